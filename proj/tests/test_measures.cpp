#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "hyperqif/hyper.hpp"
#include "hyperqif/measures.hpp"

using namespace hyperqif;
using fixtures::two_secrets;

namespace {

constexpr double kTol = 1e-9;

// Independent evaluation by plain enumeration over all guesses.
double brute_force_vg(const GainFunction& g, const Distribution& prior) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t w = 0; w < g.guess_count(); ++w) {
        double value = 0.0;
        for (std::size_t x = 0; x < prior.size(); ++x) value += prior[x] * g.at(w, x);
        best = std::max(best, value);
    }
    return best;
}

}  // namespace

TEST_CASE("gain function validation") {
    const SecretSpace space = two_secrets();
    CHECK_THROWS_AS(GainFunction({}, space, {}), InvalidGainFunction);
    CHECK_THROWS_AS(GainFunction({"w", "w"}, space, {{1, 0}, {0, 1}}), InvalidGainFunction);
    CHECK_THROWS_AS(GainFunction({"w"}, space, {{1, 0}, {0, 1}}), DimensionMismatch);
    // A secret whose every gain is negative breaks the non-negativity contract.
    CHECK_THROWS_AS(GainFunction({"w"}, space, {{-1.0, 0.5}}), InvalidGainFunction);
    CHECK_NOTHROW(GainFunction({"w1", "w2"}, space, {{-1.0, 0.5}, {2.0, -3.0}}));
}

TEST_CASE("g-vulnerability on the two-adversary table") {
    const SecretSpace space = two_secrets();
    const GainFunction gb = fixtures::gain_b();
    const GainFunction id = GainFunction::identity(space);

    CHECK(g_vulnerability(gb, Distribution(space, {0.5, 0.5})) == doctest::Approx(4.75));
    CHECK(g_vulnerability(id, Distribution(space, {0.5, 0.5})) == doctest::Approx(0.5));

    // 19/20 * 1 beats 1/20 * 9.5.
    const Distribution skew(space, {0.95, 0.05});
    CHECK(brute_force_vg(gb, skew) == doctest::Approx(0.95));
    CHECK(g_vulnerability(gb, skew) == doctest::Approx(0.95));
}

TEST_CASE("bayes vulnerability") {
    const SecretSpace space = two_secrets();
    CHECK(bayes_vulnerability(Distribution(space, {0.5, 0.5})) == doctest::Approx(0.5));
    CHECK(bayes_vulnerability(Distribution(space, {0.95, 0.05})) == doctest::Approx(0.95));
    CHECK(bayes_vulnerability(Distribution(space, {1.0, 0.0})) == doctest::Approx(1.0));
}

TEST_CASE("optimal guess and tie-breaking") {
    const SecretSpace space = two_secrets();
    CHECK(optimal_guess(fixtures::gain_b(), Distribution(space, {0.95, 0.05})) == "x1");
    CHECK(optimal_guess(GainFunction::identity(space), Distribution(space, {1.0, 0.0})) == "x1");
    // Tie between both guesses resolves to the lowest index.
    CHECK(optimal_guess(GainFunction::identity(space), Distribution(space, {0.5, 0.5})) == "x1");
}

TEST_CASE("hyper vulnerability on the strategy table") {
    const VulnerabilityMeasure bayes = VulnerabilityMeasure::bayes();
    CHECK(hyper_vulnerability(bayes, fixtures::env1()) == doctest::Approx(1.0));
    CHECK(hyper_vulnerability(bayes, fixtures::env2()) == doctest::Approx(0.5));
    CHECK(hyper_vulnerability(VulnerabilityMeasure::g_based(fixtures::gain_b()),
                              fixtures::env1()) == doctest::Approx(5.25));
}

TEST_CASE("posterior g-vulnerability") {
    const SecretSpace space = two_secrets();
    const GainFunction id = GainFunction::identity(space);
    const Distribution uniform(space, {0.5, 0.5});

    CHECK(posterior_g_vulnerability(id, uniform, Channel::identity(space)) ==
          doctest::Approx(1.0));
    CHECK(posterior_g_vulnerability(id, uniform, Channel::noninterferent(space)) ==
          doctest::Approx(0.5));
    // Column maxima of the induced joint: 1/4 + 1/4 + 1/4.
    CHECK(posterior_g_vulnerability(id, uniform, fixtures::appendix_delta()) ==
          doctest::Approx(0.75));
}

TEST_CASE("joint bayes and the failed chain rule") {
    CHECK(joint_bayes(fixtures::chain_rule_joint()) == doctest::Approx(0.5));

    const SecretSpace space = two_secrets();
    const SecretSpace ys({"y1", "y2"});
    CHECK(joint_bayes(JointDistribution(space, ys, {{0.5, 0.0}, {0.0, 0.5}})) ==
          doctest::Approx(0.5));
    CHECK(joint_bayes(JointDistribution(space, ys, {{0.25, 0.25}, {0.25, 0.25}})) ==
          doctest::Approx(0.25));

    // V(X) = 3/4 and V(Y|X) = 3/4, yet the joint guess only achieves 1/2.
    const MarginalsAndConditionals mc = marginals_and_conditionals(fixtures::chain_rule_joint());
    const double v_x = *std::max_element(mc.row_marginal.begin(), mc.row_marginal.end());
    double v_y_given_x = 0.0;
    for (std::size_t x = 0; x < mc.row_marginal.size(); ++x) {
        v_y_given_x += mc.row_marginal[x] *
                       *std::max_element(mc.row_conditionals[x].begin(),
                                         mc.row_conditionals[x].end());
    }
    CHECK(v_x == doctest::Approx(0.75));
    CHECK(v_y_given_x == doctest::Approx(0.75));
    CHECK(joint_bayes(fixtures::chain_rule_joint()) == doctest::Approx(0.5));
    CHECK(v_x * v_y_given_x == doctest::Approx(9.0 / 16.0));
}

TEST_CASE("bayes equals the identity gain") {
    fixtures::TestRng rng;
    for (int trial = 0; trial < 200; ++trial) {
        const SecretSpace space = rng.space(6);
        const Distribution prior = rng.distribution(space);
        CHECK(std::abs(bayes_vulnerability(prior) -
                       g_vulnerability(GainFunction::identity(space), prior)) <= 1e-12);
    }
}

TEST_CASE("g-vulnerability is convex") {
    fixtures::TestRng rng;
    for (int trial = 0; trial < 200; ++trial) {
        const SecretSpace space = rng.space(5);
        const GainFunction g = rng.gain(space);
        const Distribution a = rng.distribution(space);
        const Distribution b = rng.distribution(space);
        const double lambda = rng.uniform();
        Vec mixed(space.size());
        for (std::size_t x = 0; x < space.size(); ++x) {
            mixed[x] = lambda * a[x] + (1.0 - lambda) * b[x];
        }
        const double at_mix = g_vulnerability(g, Distribution(space, mixed));
        const double mix_of =
            lambda * g_vulnerability(g, a) + (1.0 - lambda) * g_vulnerability(g, b);
        CHECK(at_mix <= mix_of + kTol);
    }
}

TEST_CASE("argmax and value cohere exactly") {
    fixtures::TestRng rng;
    for (int trial = 0; trial < 100; ++trial) {
        const SecretSpace space = rng.space(5);
        const GainFunction g = rng.gain(space);
        const Distribution prior = rng.distribution(space);
        const std::size_t w = optimal_guess_index(g, prior);
        double value = 0.0;
        for (std::size_t x = 0; x < space.size(); ++x) value += prior[x] * g.at(w, x);
        CHECK(g_vulnerability(g, prior) == value);
    }
}

TEST_CASE("posterior matches the pushed-through hyper") {
    fixtures::TestRng rng;
    for (int trial = 0; trial < 100; ++trial) {
        const SecretSpace space = rng.space(5);
        const GainFunction g = rng.gain(space);
        const Distribution prior = rng.distribution(space);
        const std::size_t width = rng.between(1, 4);
        Mat rows(space.size());
        for (Vec& row : rows) row = rng.simplex_point(width);
        std::vector<std::string> outs;
        for (std::size_t i = 0; i < width; ++i) outs.push_back("y" + std::to_string(i));
        const Channel channel(space, SecretSpace(outs), rows);
        const double direct = posterior_g_vulnerability(g, prior, channel);
        const double via_hyper = hyper_vulnerability(VulnerabilityMeasure::g_based(g),
                                                     push_through(prior, channel));
        CHECK(direct == doctest::Approx(via_hyper).epsilon(kTol));
    }
}
