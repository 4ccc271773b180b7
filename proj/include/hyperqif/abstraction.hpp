#pragma once

#include <optional>

#include "hyperqif/envanalysis.hpp"
#include "hyperqif/hyper.hpp"

namespace hyperqif {

/// Row-stochastic post-processing of a hyper's inners. Rows index the
/// concrete hyper's inners, columns the abstract hyper's inners; the label
/// sets only fix dimensions, positions carry the meaning.
using AggregationMatrix = Channel;

/// Feasibility tolerance for refinement checking. Looser than
/// kNormTolerance because the search runs through a simplex solver whose
/// arithmetic accumulates more error than plain expectation sums.
inline constexpr double kFeasibilityTolerance = 1e-7;

/// Outcome of a refinement check. When `holds`, `matrix` is *a* witness
/// (the solver's basic solution; witnesses are not canonical) and
/// `residual` is the max-norm of joint(concrete)*matrix - joint(abstract)
/// at that witness. When the check fails, `residual` is the smallest
/// max-norm any row-stochastic matrix achieves.
struct RefinementWitness {
    bool holds = false;
    std::optional<AggregationMatrix> matrix;
    double residual = 0.0;
};

/// H' = H * A: aggregates inners by convex combination. The prior is
/// preserved; zero-outer columns are dropped.
Hyper apply_aggregation(const Hyper& hyper, const AggregationMatrix& aggregation);

/// Searches for a row-stochastic A with joint(concrete) * A =
/// joint(abstract), i.e. decides whether `abstracted` is an abstraction of
/// `concrete`.
RefinementWitness check_abstracts(const Hyper& abstracted, const Hyper& concrete,
                                  double tolerance = kFeasibilityTolerance);

/// Vulnerability of the secret in `environment` for an adversary who picks
/// the optimal guess per abstract strategy of environment * aggregation but
/// is scored against the true strategies. Equals the environmental
/// vulnerability of the abstraction itself.
double model_vulnerability(const GainFunction& gain, const Hyper& environment,
                           const AggregationMatrix& aggregation);

/// V_S(M|E) = V_E(M) / V_E(E) for an abstraction M of E. Lies between
/// V_S(E) and 1. NotAnAbstraction when the refinement check fails.
double strategy_vulnerability_given(const VulnerabilityMeasure& measure,
                                    const Hyper& environment, const Hyper& model,
                                    double tolerance = kFeasibilityTolerance);

/// For a chain coarser <= model <= environment, the common value of
/// V_S(coarser|E)/V_S(model|E) and V_E(coarser)/V_E(model): the accuracy a
/// finer model adds is the same for secrets and for strategies. Both routes
/// are evaluated and must agree within 1e-9.
double refinement_ratio(const VulnerabilityMeasure& measure, const Hyper& environment,
                        const Hyper& model, const Hyper& coarser,
                        double tolerance = kFeasibilityTolerance);

}  // namespace hyperqif
