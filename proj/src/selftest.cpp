#include "hyperqif/selftest.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "hyperqif/abstraction.hpp"
#include "hyperqif/envanalysis.hpp"
#include "hyperqif/hyper.hpp"
#include "hyperqif/measures.hpp"

namespace hyperqif::selftest {

namespace {

constexpr double kTolerance = 1e-9;

struct Rng {
    std::mt19937_64 engine;

    explicit Rng(std::uint64_t seed) : engine(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) {
        return std::uniform_real_distribution<double>(lo, hi)(engine);
    }
    std::size_t between(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(engine);
    }
};

SecretSpace random_space(Rng& rng) {
    const std::size_t n = rng.between(2, 5);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i + 1));
    return SecretSpace(std::move(labels));
}

Vec random_simplex_point(Rng& rng, std::size_t n) {
    Vec v(n, 0.0);
    double total = 0.0;
    for (double& x : v) {
        x = -std::log(rng.uniform(1e-12, 1.0));
        total += x;
    }
    for (double& x : v) x /= total;
    return v;
}

Distribution random_distribution(Rng& rng, const SecretSpace& space) {
    return Distribution(space, random_simplex_point(rng, space.size()));
}

Hyper random_hyper(Rng& rng, const SecretSpace& space, std::size_t max_inners = 6) {
    const std::size_t k = rng.between(1, max_inners);
    std::vector<Distribution> inners;
    for (std::size_t j = 0; j < k; ++j) inners.push_back(random_distribution(rng, space));
    return Hyper(space, std::move(inners), random_simplex_point(rng, k));
}

/// Row-stochastic matrix with strictly positive entries (no abstract
/// strategy ends up unreachable).
AggregationMatrix random_positive_aggregation(Rng& rng, std::size_t rows, std::size_t cols) {
    Mat matrix(rows, Vec(cols, 0.0));
    for (std::size_t r = 0; r < rows; ++r) {
        double total = 0.0;
        for (double& v : matrix[r]) {
            v = rng.uniform(0.05, 1.0);
            total += v;
        }
        for (double& v : matrix[r]) v /= total;
    }
    std::vector<std::string> in_labels, out_labels;
    for (std::size_t r = 0; r < rows; ++r) in_labels.push_back(std::to_string(r));
    for (std::size_t c = 0; c < cols; ++c) out_labels.push_back("a" + std::to_string(c));
    return AggregationMatrix(SecretSpace(std::move(in_labels)),
                             SecretSpace(std::move(out_labels)), std::move(matrix));
}

/// Sometimes deterministic, sometimes dense: deterministic rows can leave
/// zero-mass columns, which exercises the column-dropping paths.
AggregationMatrix random_mixed_aggregation(Rng& rng, std::size_t rows, std::size_t cols) {
    if (rng.between(0, 2) == 0) {
        Mat matrix(rows, Vec(cols, 0.0));
        for (std::size_t r = 0; r < rows; ++r) matrix[r][rng.between(0, cols - 1)] = 1.0;
        std::vector<std::string> in_labels, out_labels;
        for (std::size_t r = 0; r < rows; ++r) in_labels.push_back(std::to_string(r));
        for (std::size_t c = 0; c < cols; ++c) out_labels.push_back("a" + std::to_string(c));
        return AggregationMatrix(SecretSpace(std::move(in_labels)),
                                 SecretSpace(std::move(out_labels)), std::move(matrix));
    }
    return random_positive_aggregation(rng, rows, cols);
}

GainFunction random_gain(Rng& rng, const SecretSpace& space) {
    const std::size_t n_guesses = rng.between(1, 6);
    std::vector<std::string> guesses;
    for (std::size_t w = 0; w < n_guesses; ++w) guesses.push_back("w" + std::to_string(w));
    Mat gain(n_guesses, Vec(space.size(), 0.0));
    for (Vec& row : gain) {
        for (double& v : row) v = rng.uniform();
    }
    return GainFunction(std::move(guesses), space, std::move(gain));
}

std::vector<VulnerabilityMeasure> bayes_plus_random_gains(Rng& rng, const SecretSpace& space) {
    std::vector<VulnerabilityMeasure> measures;
    measures.push_back(VulnerabilityMeasure::bayes());
    for (int i = 0; i < 3; ++i) {
        measures.push_back(VulnerabilityMeasure::g_based(random_gain(rng, space)));
    }
    return measures;
}

HigherHyper random_higher(Rng& rng, const SecretSpace& space, std::size_t depth) {
    if (depth == 1) return HigherHyper::leaf(random_distribution(rng, space));
    const std::size_t fanout = rng.between(1, 3);
    std::vector<HigherHyper> children;
    for (std::size_t i = 0; i < fanout; ++i) {
        children.push_back(random_higher(rng, space, depth - 1));
    }
    return HigherHyper::node(random_simplex_point(rng, fanout), std::move(children));
}

class SuiteRunner {
public:
    SuiteRunner(std::string name, std::size_t instances)
        : result_{std::move(name), instances, 0, 0.0, ""} {}

    /// Records `excess` (how far past the allowed bound the check landed);
    /// anything positive is a failure.
    void check(double excess, std::size_t instance, const char* what) {
        result_.worst_violation = std::max(result_.worst_violation, excess);
        if (excess > 0.0) {
            ++result_.failures;
            if (result_.note.empty()) {
                std::ostringstream note;
                note << what << " violated by " << excess << " on instance " << instance;
                result_.note = note.str();
            }
        }
    }

    void fail(std::size_t instance, const std::string& what) {
        ++result_.failures;
        if (result_.note.empty()) {
            std::ostringstream note;
            note << what << " on instance " << instance;
            result_.note = note.str();
        }
    }

    SuiteResult take() { return std::move(result_); }

private:
    SuiteResult result_;
};

std::uint64_t suite_seed(std::uint64_t master, std::uint64_t index) {
    // splitmix64 step keeps per-suite streams independent of suite order.
    std::uint64_t z = master + (index + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::vector<SuiteResult> run_property_suites(const Options& options) {
    std::vector<SuiteResult> results;
    const std::size_t instances = std::max<std::size_t>(options.instances, 1);
    std::uint64_t suite_index = 0;

    auto run = [&](const char* name, std::size_t count,
                   const std::function<void(Rng&, SuiteRunner&, std::size_t)>& body) {
        Rng rng(suite_seed(options.seed, suite_index++));
        SuiteRunner runner(name, count);
        for (std::size_t i = 0; i < count; ++i) {
            try {
                body(rng, runner, i);
            } catch (const std::exception& e) {
                runner.fail(i, std::string("exception: ") + e.what());
            }
        }
        results.push_back(runner.take());
    };

    run("jensen_bound", instances, [](Rng& rng, SuiteRunner& runner, std::size_t i) {
        const SecretSpace space = random_space(rng);
        const Hyper env = random_hyper(rng, space);
        const Distribution prior = prior_of(env);
        for (const VulnerabilityMeasure& measure : bayes_plus_random_gains(rng, space)) {
            const double env_v = environmental_vulnerability(measure, env);
            runner.check(measure.prior_vulnerability(prior) - env_v - kTolerance, i,
                         "V_E >= V(prior)");
        }
    });

    run("point_hyper_collapse", instances, [](Rng& rng, SuiteRunner& runner, std::size_t i) {
        const SecretSpace space = random_space(rng);
        const Distribution prior = random_distribution(rng, space);
        for (const VulnerabilityMeasure& measure : bayes_plus_random_gains(rng, space)) {
            const double diff = std::abs(environmental_vulnerability(measure, point_hyper(prior)) -
                                         measure.prior_vulnerability(prior));
            runner.check(diff - kTolerance, i, "V_E([prior]) == V(prior)");
        }
    });

    run("decomposition_identity", instances, [](Rng& rng, SuiteRunner& runner, std::size_t i) {
        const SecretSpace space = random_space(rng);
        const Hyper env = random_hyper(rng, space);
        for (const VulnerabilityMeasure& measure : bayes_plus_random_gains(rng, space)) {
            const SecurityDecomposition d = decompose_security(measure, env);
            runner.check(std::abs(d.perceived - d.by_aggregation * d.by_strategy) - kTolerance,
                         i, "perceived == by_aggregation * by_strategy");
            runner.check(d.by_aggregation - 1.0 - kTolerance, i, "by_aggregation <= 1");
            runner.check(d.perceived - d.by_strategy - kTolerance, i,
                         "perceived <= by_strategy");
        }
    });

    run("miracle_bound", instances, [](Rng& rng, SuiteRunner& runner, std::size_t i) {
        const SecretSpace space = random_space(rng);
        const Hyper env = random_hyper(rng, space);
        const double bayes_ratio = bayes_ratio_lower_bound(env);
        for (const VulnerabilityMeasure& measure : bayes_plus_random_gains(rng, space)) {
            runner.check(bayes_ratio - strategy_vulnerability(measure, env) - kTolerance, i,
                         "V_S >= Bayes ratio");
        }
    });

    run("aggregation_prior", instances, [](Rng& rng, SuiteRunner& runner, std::size_t i) {
        const SecretSpace space = random_space(rng);
        const Hyper hyper = random_hyper(rng, space);
        const AggregationMatrix aggregation =
            random_mixed_aggregation(rng, hyper.size(), rng.between(1, 6));
        const Distribution before = prior_of(hyper);
        const Distribution after = prior_of(apply_aggregation(hyper, aggregation));
        for (std::size_t x = 0; x < space.size(); ++x) {
            runner.check(std::abs(before[x] - after[x]) - kTolerance, i,
                         "prior preserved under aggregation");
        }
    });

    run("model_equivalence", instances, [](Rng& rng, SuiteRunner& runner, std::size_t i) {
        const SecretSpace space = random_space(rng);
        const Hyper env = random_hyper(rng, space);
        const AggregationMatrix aggregation =
            random_mixed_aggregation(rng, env.size(), rng.between(1, 6));
        const Hyper model = apply_aggregation(env, aggregation);
        for (const VulnerabilityMeasure& measure : bayes_plus_random_gains(rng, space)) {
            const double via_model =
                model_vulnerability(measure.as_gain(space), env, aggregation);
            const double via_env = environmental_vulnerability(measure, model);
            runner.check(std::abs(via_model - via_env) - kTolerance, i,
                         "V(M|E) == V_E(M)");
        }
    });

    run("refinement_monotonic_env", instances, [](Rng& rng, SuiteRunner& runner, std::size_t i) {
        const SecretSpace space = random_space(rng);
        const Hyper env = random_hyper(rng, space);
        const Hyper model = apply_aggregation(
            env, random_positive_aggregation(rng, env.size(), rng.between(1, 6)));
        const Hyper coarser = apply_aggregation(
            model, random_positive_aggregation(rng, model.size(), rng.between(1, 6)));
        for (const VulnerabilityMeasure& measure : bayes_plus_random_gains(rng, space)) {
            runner.check(environmental_vulnerability(measure, coarser) -
                             environmental_vulnerability(measure, model) - kTolerance,
                         i, "V_E monotone under refinement");
        }
    });

    run("refinement_monotonic_strategy", instances,
        [](Rng& rng, SuiteRunner& runner, std::size_t i) {
            const SecretSpace space = random_space(rng);
            const Hyper env = random_hyper(rng, space);
            const Hyper model = apply_aggregation(
                env, random_positive_aggregation(rng, env.size(), rng.between(1, 6)));
            const Hyper coarser = apply_aggregation(
                model, random_positive_aggregation(rng, model.size(), rng.between(1, 6)));
            for (const VulnerabilityMeasure& measure : bayes_plus_random_gains(rng, space)) {
                runner.check(strategy_vulnerability_given(measure, env, coarser) -
                                 strategy_vulnerability_given(measure, env, model) - kTolerance,
                             i, "V_S(.|E) monotone under refinement");
            }
        });

    run("strategy_given_bounds", instances, [](Rng& rng, SuiteRunner& runner, std::size_t i) {
        const SecretSpace space = random_space(rng);
        const Hyper env = random_hyper(rng, space);
        const Hyper model = apply_aggregation(
            env, random_mixed_aggregation(rng, env.size(), rng.between(1, 6)));
        for (const VulnerabilityMeasure& measure : bayes_plus_random_gains(rng, space)) {
            const double given = strategy_vulnerability_given(measure, env, model);
            runner.check(strategy_vulnerability(measure, env) - given - kTolerance, i,
                         "V_S(E) <= V_S(M|E)");
            runner.check(given - 1.0 - kTolerance, i, "V_S(M|E) <= 1");
        }
    });

    run("delta_cascade", instances, [](Rng& rng, SuiteRunner& runner, std::size_t i) {
        const SecretSpace space = random_space(rng);
        const Hyper hyper = random_hyper(rng, space);
        const AggregationMatrix aggregation =
            random_positive_aggregation(rng, hyper.size(), rng.between(1, 6));
        const HyperDecomposition whole = decompose(hyper);
        const HyperDecomposition aggregated = decompose(apply_aggregation(hyper, aggregation));
        const Distribution prior = whole.prior;
        const std::size_t cols = aggregation.output_space().size();
        for (std::size_t x = 0; x < space.size(); ++x) {
            if (!(prior[x] > 0.0)) continue;  // zero-prior rows are a convention
            for (std::size_t c = 0; c < cols; ++c) {
                double cascaded = 0.0;
                for (std::size_t r = 0; r < hyper.size(); ++r) {
                    cascaded += whole.channel.at(x, r) * aggregation.at(r, c);
                }
                runner.check(std::abs(cascaded - aggregated.channel.at(x, c)) - kTolerance, i,
                             "decompose(H*A).channel == decompose(H).channel * A");
            }
        }
    });

    run("ratio_identity", instances, [](Rng& rng, SuiteRunner& runner, std::size_t i) {
        const SecretSpace space = random_space(rng);
        const Hyper env = random_hyper(rng, space);
        const Hyper model = apply_aggregation(
            env, random_positive_aggregation(rng, env.size(), rng.between(1, 6)));
        const Hyper coarser = apply_aggregation(
            model, random_positive_aggregation(rng, model.size(), rng.between(1, 6)));
        for (const VulnerabilityMeasure& measure : bayes_plus_random_gains(rng, space)) {
            const double ratio = refinement_ratio(measure, env, model, coarser);
            const double direct = environmental_vulnerability(measure, coarser) /
                                  environmental_vulnerability(measure, model);
            runner.check(std::abs(ratio - direct) - kTolerance, i,
                         "refinement ratio == V_E(M')/V_E(M)");
        }
    });

    run("abstracts_completeness", std::max<std::size_t>(instances / 2, 100),
        [](Rng& rng, SuiteRunner& runner, std::size_t i) {
            const SecretSpace space = random_space(rng);
            const Hyper env = random_hyper(rng, space);
            const Hyper model = apply_aggregation(
                env, random_mixed_aggregation(rng, env.size(), rng.between(1, 6)));
            const RefinementWitness witness = check_abstracts(model, env);
            if (!witness.holds) {
#ifdef HYPERQIF_SELFTEST_DUMP
                {
                    std::ostringstream dump;
                    auto emit = [&dump](const char* tag, const Hyper& h) {
                        const JointDistribution joint = joint_matrix(h);
                        for (const auto& row : joint.matrix()) {
                            dump << tag << " joint-row:";
                            for (double v : row) dump << " " << std::hexfloat << v;
                            dump << "\n";
                        }
                    };
                    emit("E", env);
                    emit("M", model);
                    dump << "residual " << witness.residual << "\n";
                    std::cerr << dump.str();
                }
#endif
                runner.fail(i, "constructed abstraction not recognized");
                return;
            }
            runner.check(witness.residual - kFeasibilityTolerance, i,
                         "witness residual within feasibility tolerance");
        });

    run("collapse_consistency", std::max<std::size_t>(instances / 2, 100),
        [](Rng& rng, SuiteRunner& runner, std::size_t i) {
            const SecretSpace space = random_space(rng);
            const HigherHyper higher = random_higher(rng, space, rng.between(2, 4));
            const Hyper collapsed = collapse(higher);
            for (const VulnerabilityMeasure& measure : bayes_plus_random_gains(rng, space)) {
                const double recursive = vulnerability_n(measure, higher);
                const double flat = hyper_vulnerability(measure, collapsed);
                runner.check(std::abs(recursive - flat) - kTolerance, i,
                             "vulnerability_n == hyper_vulnerability(collapse)");
            }
        });

    return results;
}

}  // namespace hyperqif::selftest
