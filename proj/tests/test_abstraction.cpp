#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "hyperqif/abstraction.hpp"
#include "simplex.hpp"

using namespace hyperqif;
using fixtures::two_secrets;

namespace {

constexpr double kTol = 1e-9;
const VulnerabilityMeasure kBayes = VulnerabilityMeasure::bayes();

void check_same_hyper(const Hyper& a, const Hyper& b) {
    REQUIRE(a.size() == b.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        CHECK(a.outer_prob(j) == doctest::Approx(b.outer_prob(j)).epsilon(kTol));
        for (std::size_t x = 0; x < a.space().size(); ++x) {
            CHECK(a.inner(j)[x] == doctest::Approx(b.inner(j)[x]).epsilon(kTol));
        }
    }
}

AggregationMatrix noninterferent_for(const Hyper& hyper) {
    std::vector<std::string> ins;
    for (std::size_t i = 0; i < hyper.size(); ++i) ins.push_back(std::to_string(i));
    return AggregationMatrix::noninterferent(SecretSpace(ins));
}

AggregationMatrix identity_for(const Hyper& hyper) {
    std::vector<std::string> ins;
    for (std::size_t i = 0; i < hyper.size(); ++i) ins.push_back(std::to_string(i));
    return AggregationMatrix::identity(SecretSpace(ins));
}

}  // namespace

TEST_CASE("simplex solves a small equality program") {
    // minimize x2 subject to x1 + x2 = 1, x1 - x3 = 0.25
    detail::LinearProgram lp;
    lp.objective = {0.0, 1.0, 0.0};
    lp.constraints = {{1.0, 1.0, 0.0}, {1.0, 0.0, -1.0}};
    lp.rhs = {1.0, 0.25};
    const detail::SimplexResult r = detail::solve_equality_form(lp);
    REQUIRE(r.feasible);
    CHECK(r.objective == doctest::Approx(0.0));
    CHECK(r.solution[0] + r.solution[1] == doctest::Approx(1.0));

    // x1 = 2 with x1 <= 1 is infeasible.
    detail::LinearProgram bad;
    bad.objective = {0.0, 0.0};
    bad.constraints = {{1.0, 1.0}, {1.0, 0.0}};
    bad.rhs = {1.0, 2.0};
    CHECK_FALSE(detail::solve_equality_form(bad).feasible);
}

TEST_CASE("apply_aggregation reproduces the state model") {
    const Hyper env = fixtures::six_user_env();
    check_same_hyper(apply_aggregation(env, fixtures::state_aggregation()),
                     fixtures::state_model());
    check_same_hyper(apply_aggregation(env, identity_for(env)), env);
    check_same_hyper(apply_aggregation(env, noninterferent_for(env)),
                     point_hyper(prior_of(env)));

    CHECK_THROWS_AS(apply_aggregation(fixtures::env1(), fixtures::state_aggregation()),
                    DimensionMismatch);
}

TEST_CASE("check_abstracts on the worked pairs") {
    const Hyper env = fixtures::six_user_env();
    const Hyper model = fixtures::state_model();

    const RefinementWitness direct = check_abstracts(model, env);
    CHECK(direct.holds);
    CHECK(direct.residual <= kFeasibilityTolerance);
    REQUIRE(direct.matrix.has_value());
    // The returned witness need not be the deterministic one, only valid.
    check_same_hyper(apply_aggregation(env, *direct.matrix), model);

    CHECK(check_abstracts(point_hyper(prior_of(env)), env).holds);

    // A point environment cannot produce two distinct point strategies.
    const RefinementWitness impossible = check_abstracts(fixtures::env1(), fixtures::env2());
    CHECK_FALSE(impossible.holds);
    CHECK(impossible.residual > 1e-3);
    CHECK(check_abstracts(fixtures::env2(), fixtures::env1()).holds);

    const SecretSpace other({"p", "q"});
    CHECK_THROWS_AS(check_abstracts(point_hyper(Distribution(other, {1.0, 0.0})), env),
                    SpaceMismatch);
}

TEST_CASE("check_abstracts completeness on constructed abstractions") {
    fixtures::TestRng rng;
    for (int trial = 0; trial < 60; ++trial) {
        const SecretSpace space = rng.space(5);
        const Hyper env = rng.hyper(space);
        const std::size_t cols = rng.between(1, 5);
        Mat rows(env.size());
        for (Vec& row : rows) row = rng.simplex_point(cols);
        std::vector<std::string> ins, outs;
        for (std::size_t i = 0; i < env.size(); ++i) ins.push_back(std::to_string(i));
        for (std::size_t c = 0; c < cols; ++c) outs.push_back("a" + std::to_string(c));
        const AggregationMatrix aggregation(SecretSpace(ins), SecretSpace(outs), rows);
        const Hyper model = apply_aggregation(env, aggregation);
        const RefinementWitness witness = check_abstracts(model, env);
        CHECK(witness.holds);
        CHECK(witness.residual <= kFeasibilityTolerance);
    }
}

TEST_CASE("model vulnerability on the six-user environment") {
    const Hyper env = fixtures::six_user_env();
    const GainFunction bayes_gain = GainFunction::identity(two_secrets());

    CHECK(model_vulnerability(bayes_gain, env, identity_for(env)) ==
          doctest::Approx(89.0 / 120.0).epsilon(kTol));
    CHECK(model_vulnerability(bayes_gain, env, noninterferent_for(env)) ==
          doctest::Approx(13.0 / 24.0).epsilon(kTol));

    // Expectation of block maxima: 2/10 * 1/2 + 5/10 * 13/20 + 3/10 * 11/18.
    const double expected = 0.2 * 0.5 + 0.5 * (13.0 / 20.0) + 0.3 * (11.0 / 18.0);
    CHECK(model_vulnerability(bayes_gain, env, fixtures::state_aggregation()) ==
          doctest::Approx(expected).epsilon(kTol));
    CHECK(environmental_vulnerability(kBayes, fixtures::state_model()) ==
          doctest::Approx(expected).epsilon(kTol));
}

TEST_CASE("model vulnerability does not depend on the witness") {
    const SecretSpace space = two_secrets();
    const Distribution skew(space, {0.8, 0.2});
    const Hyper duplicated(space, {skew, skew}, {0.5, 0.5});
    const SecretSpace idx({"0", "1"});
    const GainFunction gain = GainFunction::identity(space);

    const AggregationMatrix keep = AggregationMatrix::identity(idx);
    const AggregationMatrix swap(idx, idx, {{0.0, 1.0}, {1.0, 0.0}});
    const AggregationMatrix blend(idx, idx, {{0.37, 0.63}, {0.63, 0.37}});

    const double v = model_vulnerability(gain, duplicated, keep);
    CHECK(model_vulnerability(gain, duplicated, swap) == doctest::Approx(v).epsilon(kTol));
    CHECK(model_vulnerability(gain, duplicated, blend) == doctest::Approx(v).epsilon(kTol));
}

TEST_CASE("model vulnerability equals the abstraction's environmental vulnerability") {
    fixtures::TestRng rng;
    for (int trial = 0; trial < 60; ++trial) {
        const SecretSpace space = rng.space(5);
        const Hyper env = rng.hyper(space);
        const std::size_t cols = rng.between(1, 5);
        Mat rows(env.size());
        for (Vec& row : rows) row = rng.simplex_point(cols);
        std::vector<std::string> ins, outs;
        for (std::size_t i = 0; i < env.size(); ++i) ins.push_back(std::to_string(i));
        for (std::size_t c = 0; c < cols; ++c) outs.push_back("a" + std::to_string(c));
        const AggregationMatrix aggregation(SecretSpace(ins), SecretSpace(outs), rows);
        const GainFunction gain = rng.gain(space);
        CHECK(model_vulnerability(gain, env, aggregation) ==
              doctest::Approx(environmental_vulnerability(VulnerabilityMeasure::g_based(gain),
                                                          apply_aggregation(env, aggregation)))
                  .epsilon(kTol));
    }
}

TEST_CASE("strategy vulnerability given an abstraction") {
    const Hyper env = fixtures::six_user_env();
    const Hyper model = fixtures::state_model();

    CHECK(strategy_vulnerability_given(kBayes, env, env) == doctest::Approx(1.0));
    CHECK(strategy_vulnerability_given(kBayes, env, point_hyper(prior_of(env))) ==
          doctest::Approx(strategy_vulnerability(kBayes, env)).epsilon(kTol));
    CHECK(strategy_vulnerability_given(kBayes, env, model) ==
          doctest::Approx(73.0 / 89.0).epsilon(kTol));

    CHECK_THROWS_AS(strategy_vulnerability_given(kBayes, fixtures::env2(), fixtures::env1()),
                    NotAnAbstraction);
}

TEST_CASE("refinement ratio") {
    const Hyper env = fixtures::six_user_env();
    const Hyper model = fixtures::state_model();
    const Hyper prior_model = point_hyper(prior_of(env));

    CHECK(refinement_ratio(kBayes, env, model, model) == doctest::Approx(1.0));
    CHECK(refinement_ratio(kBayes, env, env, prior_model) ==
          doctest::Approx(strategy_vulnerability(kBayes, env)).epsilon(kTol));
    CHECK(refinement_ratio(kBayes, env, model, prior_model) ==
          doctest::Approx(65.0 / 73.0).epsilon(kTol));

    CHECK_THROWS_AS(refinement_ratio(kBayes, fixtures::env2(), fixtures::env1(), fixtures::env2()),
                    NotAnAbstraction);
}

TEST_CASE("refinement keeps priors and never helps the coarser model") {
    fixtures::TestRng rng;
    for (int trial = 0; trial < 60; ++trial) {
        const SecretSpace space = rng.space(5);
        const Hyper env = rng.hyper(space);
        const std::size_t cols = rng.between(1, 4);
        Mat rows(env.size());
        for (Vec& row : rows) {
            row.assign(cols, 0.0);
            double total = 0.0;
            for (double& v : row) {
                v = rng.uniform(0.05, 1.0);
                total += v;
            }
            for (double& v : row) v /= total;
        }
        std::vector<std::string> ins, outs;
        for (std::size_t i = 0; i < env.size(); ++i) ins.push_back(std::to_string(i));
        for (std::size_t c = 0; c < cols; ++c) outs.push_back("a" + std::to_string(c));
        const AggregationMatrix aggregation(SecretSpace(ins), SecretSpace(outs), rows);
        const Hyper model = apply_aggregation(env, aggregation);

        const Distribution before = prior_of(env);
        const Distribution after = prior_of(model);
        for (std::size_t x = 0; x < space.size(); ++x) {
            CHECK(after[x] == doctest::Approx(before[x]).epsilon(kTol));
        }

        const GainFunction gain = rng.gain(space);
        for (const VulnerabilityMeasure& measure :
             {kBayes, VulnerabilityMeasure::g_based(gain)}) {
            CHECK(environmental_vulnerability(measure, model) <=
                  environmental_vulnerability(measure, env) + kTol);
            const double given = strategy_vulnerability_given(measure, env, model);
            CHECK(given >= strategy_vulnerability(measure, env) - kTol);
            CHECK(given <= 1.0 + kTol);
        }
    }
}

TEST_CASE("delta channels cascade through aggregation") {
    const Hyper env = fixtures::six_user_env();
    const AggregationMatrix aggregation = fixtures::state_aggregation();
    const HyperDecomposition whole = decompose(env);
    const HyperDecomposition aggregated = decompose(apply_aggregation(env, aggregation));
    for (std::size_t x = 0; x < env.space().size(); ++x) {
        if (!(whole.prior[x] > 0.0)) continue;
        for (std::size_t c = 0; c < 3; ++c) {
            double cascaded = 0.0;
            for (std::size_t r = 0; r < env.size(); ++r) {
                cascaded += whole.channel.at(x, r) * aggregation.at(r, c);
            }
            CHECK(aggregated.channel.at(x, c) == doctest::Approx(cascaded).epsilon(kTol));
        }
    }
}
