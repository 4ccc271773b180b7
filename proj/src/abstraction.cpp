#include "hyperqif/abstraction.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "simplex.hpp"

namespace hyperqif {

namespace {

Mat joint_rows(const Hyper& hyper) { return joint_matrix(hyper).matrix(); }

double max_residual(const Mat& concrete_joint, const Mat& aggregation,
                    const Mat& abstract_joint) {
    const std::size_t n_x = concrete_joint.size();
    const std::size_t n = aggregation.size();
    const std::size_t m = abstract_joint.empty() ? 0 : abstract_joint.front().size();
    double worst = 0.0;
    for (std::size_t x = 0; x < n_x; ++x) {
        for (std::size_t c = 0; c < m; ++c) {
            double value = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                value += concrete_joint[x][r] * aggregation[r][c];
            }
            worst = std::max(worst, std::abs(value - abstract_joint[x][c]));
        }
    }
    return worst;
}

SecretSpace positional_labels(std::size_t count) {
    std::vector<std::string> labels;
    labels.reserve(count);
    for (std::size_t i = 0; i < count; ++i) labels.push_back(std::to_string(i));
    return SecretSpace(std::move(labels));
}

}  // namespace

Hyper apply_aggregation(const Hyper& hyper, const AggregationMatrix& aggregation) {
    if (aggregation.input_space().size() != hyper.size()) {
        std::ostringstream msg;
        msg << "apply_aggregation: matrix has " << aggregation.input_space().size()
            << " rows for a hyper with " << hyper.size() << " inners";
        throw DimensionMismatch(msg.str());
    }
    const JointDistribution joint = joint_matrix(hyper);
    const std::size_t n_x = hyper.space().size();
    const std::size_t m = aggregation.output_space().size();
    Mat product(n_x, Vec(m, 0.0));
    for (std::size_t x = 0; x < n_x; ++x) {
        for (std::size_t r = 0; r < hyper.size(); ++r) {
            const double v = joint.at(x, r);
            if (v == 0.0) continue;
            for (std::size_t c = 0; c < m; ++c) {
                product[x][c] += v * aggregation.at(r, c);
            }
        }
    }
    return from_joint(JointDistribution(hyper.space(), aggregation.output_space(),
                                        std::move(product)));
}

RefinementWitness check_abstracts(const Hyper& abstracted, const Hyper& concrete,
                                  double tolerance) {
    if (abstracted.space() != concrete.space()) {
        throw SpaceMismatch("check_abstracts: hypers over different secret spaces");
    }

    const Mat concrete_joint = joint_rows(concrete);
    const Mat abstract_joint = joint_rows(abstracted);
    const std::size_t n_x = concrete.space().size();
    const std::size_t n = concrete.size();
    const std::size_t m = abstracted.size();

    // Feasibility as a linear program: find row-stochastic A minimizing the
    // L1 residual of joint(concrete)*A - joint(abstract), written per cell
    // as (JA)(x,c) - u(x,c) + v(x,c) = J'(x,c) with u, v >= 0. The witness
    // reports the max-norm residual at the solution; at the L1 optimum both
    // norms vanish together, which is all the feasibility decision needs.
    const std::size_t a_vars = n * m;
    const std::size_t n_cells = n_x * m;
    const std::size_t n_vars = a_vars + 2 * n_cells;

    detail::LinearProgram lp;
    lp.objective.assign(n_vars, 0.0);
    for (std::size_t k = a_vars; k < n_vars; ++k) lp.objective[k] = 1.0;

    // Row-stochasticity: sum_c A(r,c) = 1.
    for (std::size_t r = 0; r < n; ++r) {
        Vec row(n_vars, 0.0);
        for (std::size_t c = 0; c < m; ++c) row[r * m + c] = 1.0;
        lp.constraints.push_back(std::move(row));
        lp.rhs.push_back(1.0);
    }
    for (std::size_t x = 0; x < n_x; ++x) {
        for (std::size_t c = 0; c < m; ++c) {
            const std::size_t cell = x * m + c;
            Vec row(n_vars, 0.0);
            for (std::size_t r = 0; r < n; ++r) row[r * m + c] = concrete_joint[x][r];
            row[a_vars + 2 * cell] = -1.0;
            row[a_vars + 2 * cell + 1] = 1.0;
            lp.constraints.push_back(std::move(row));
            lp.rhs.push_back(abstract_joint[x][c]);
        }
    }

    const detail::SimplexResult solved = detail::solve_equality_form(lp);

    RefinementWitness witness;
    if (!solved.feasible) {
        // The program always admits a solution (any row-stochastic A with a
        // large t); this branch only fires on solver-tolerance breakdown.
        witness.holds = false;
        witness.residual = std::numeric_limits<double>::infinity();
        return witness;
    }

    // Extract A, clean up solver roundoff, and recompute the residual the
    // witness actually achieves.
    Mat matrix(n, Vec(m, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
        double row_sum = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
            matrix[r][c] = std::max(0.0, solved.solution[r * m + c]);
            row_sum += matrix[r][c];
        }
        if (row_sum > 0.0) {
            for (double& v : matrix[r]) v /= row_sum;
        } else {
            matrix[r].assign(m, 1.0 / static_cast<double>(m));
        }
    }
    witness.residual = max_residual(concrete_joint, matrix, abstract_joint);
    witness.holds = witness.residual <= tolerance;
    if (witness.holds) {
        witness.matrix = AggregationMatrix(positional_labels(n), positional_labels(m),
                                           std::move(matrix));
    }
    return witness;
}

double model_vulnerability(const GainFunction& gain, const Hyper& environment,
                           const AggregationMatrix& aggregation) {
    if (aggregation.input_space().size() != environment.size()) {
        throw DimensionMismatch(
            "model_vulnerability: aggregation rows do not match environment inners");
    }
    if (gain.space() != environment.space()) {
        throw SpaceMismatch("model_vulnerability: gain over a different secret space");
    }

    const std::size_t n = environment.size();
    const std::size_t m = aggregation.output_space().size();
    const std::size_t n_x = environment.space().size();

    // Abstract strategies built column by column so indices stay aligned
    // with the aggregation matrix (apply_aggregation would drop zero-mass
    // columns).
    std::vector<std::size_t> best_guess(m, 0);
    std::vector<bool> reachable(m, false);
    for (std::size_t c = 0; c < m; ++c) {
        double mass = 0.0;
        Vec mix(n_x, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            const double w = environment.outer_prob(r) * aggregation.at(r, c);
            mass += w;
            for (std::size_t x = 0; x < n_x; ++x) {
                mix[x] += w * environment.inner(r)[x];
            }
        }
        if (mass == 0.0) continue;
        for (double& v : mix) v /= mass;
        best_guess[c] = optimal_guess_index(gain, Distribution(environment.space(), std::move(mix)));
        reachable[c] = true;
    }

    // sum_strategy env(strategy) sum_abstract p(abstract|strategy)
    //   sum_x strategy(x) gain(w_abstract, x)
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const Distribution& strategy = environment.inner(r);
        for (std::size_t c = 0; c < m; ++c) {
            if (!reachable[c] || aggregation.at(r, c) == 0.0) continue;
            double gained = 0.0;
            for (std::size_t x = 0; x < n_x; ++x) {
                gained += strategy[x] * gain.at(best_guess[c], x);
            }
            total += environment.outer_prob(r) * aggregation.at(r, c) * gained;
        }
    }
    return total;
}

double strategy_vulnerability_given(const VulnerabilityMeasure& measure,
                                    const Hyper& environment, const Hyper& model,
                                    double tolerance) {
    const RefinementWitness witness = check_abstracts(model, environment, tolerance);
    if (!witness.holds) {
        std::ostringstream msg;
        msg << "model is not an abstraction of the environment (best residual "
            << witness.residual << ")";
        throw NotAnAbstraction(msg.str());
    }
    const double env_vulnerability = environmental_vulnerability(measure, environment);
    if (!(env_vulnerability > 0.0)) {
        throw ZeroEnvironmentalVulnerability(
            "environmental vulnerability is not positive; the ratio is undefined");
    }
    return environmental_vulnerability(measure, model) / env_vulnerability;
}

double refinement_ratio(const VulnerabilityMeasure& measure, const Hyper& environment,
                        const Hyper& model, const Hyper& coarser, double tolerance) {
    const RefinementWitness model_in_env = check_abstracts(model, environment, tolerance);
    if (!model_in_env.holds) {
        throw NotAnAbstraction("refinement_ratio: model is not an abstraction of the environment");
    }
    const RefinementWitness coarser_in_model = check_abstracts(coarser, model, tolerance);
    if (!coarser_in_model.holds) {
        throw NotAnAbstraction("refinement_ratio: coarser model is not an abstraction of the model");
    }

    const double model_value = environmental_vulnerability(measure, model);
    if (!(model_value > 0.0)) {
        throw ZeroEnvironmentalVulnerability(
            "refinement_ratio: the finer model's environmental vulnerability is not positive");
    }
    const double direct = environmental_vulnerability(measure, coarser) / model_value;
    const double via_strategy = strategy_vulnerability_given(measure, environment, coarser, tolerance) /
                                strategy_vulnerability_given(measure, environment, model, tolerance);
    if (std::abs(direct - via_strategy) > 1e-9) {
        std::ostringstream msg;
        msg << "refinement_ratio: the two evaluation routes disagree (" << direct
            << " vs " << via_strategy << ")";
        throw Error(msg.str());
    }
    return direct;
}

}  // namespace hyperqif
