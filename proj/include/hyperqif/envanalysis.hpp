#pragma once

#include "hyperqif/hyper.hpp"
#include "hyperqif/measures.hpp"

namespace hyperqif {

/// The multiplicative split of traditional prior vulnerability:
///
///   perceived = by_aggregation * by_strategy
///
/// where `perceived` is V(prior), `by_strategy` is the environmental
/// vulnerability V_E (protection from randomness inside strategies lowers
/// it) and `by_aggregation` is the strategy vulnerability V_S (protection
/// from the adversary's inability to tell strategies apart lowers it).
/// The *_bits fields are the same three values as -log2, min-entropy style.
struct SecurityDecomposition {
    double perceived = 0.0;
    double by_aggregation = 0.0;
    double by_strategy = 0.0;
    double perceived_bits = 0.0;
    double by_aggregation_bits = 0.0;
    double by_strategy_bits = 0.0;
};

/// -log2(v), with v clamped below at 1e-300 so reports stay total.
double min_entropy_bits(double v);

/// V_E: the expectation of the measure over the environment's strategies.
double environmental_vulnerability(const VulnerabilityMeasure& measure,
                                   const Hyper& environment);

/// V_S = V(prior) / V_E, in (0, 1]. Throws ZeroEnvironmentalVulnerability
/// when V_E is not positive (a degenerate measure/environment pair).
double strategy_vulnerability(const VulnerabilityMeasure& measure,
                              const Hyper& environment);

SecurityDecomposition decompose_security(const VulnerabilityMeasure& measure,
                                         const Hyper& environment);

/// The Bayes ratio V_Bayes(prior) / V_E_Bayes(environment): the strategy
/// vulnerability under the Bayes measure, the reference point other
/// measures' strategy vulnerability is compared against.
double bayes_ratio_lower_bound(const Hyper& environment);

}  // namespace hyperqif
