#pragma once

// Shared builders for the worked examples used across the test suites:
// the two-secret strategy tables, the six-user environment with its state
// aggregation, and the three-inner hyper with the known [prior, channel]
// decomposition.

#include <random>
#include <string>
#include <vector>

#include "hyperqif/abstraction.hpp"
#include "hyperqif/hyper.hpp"
#include "hyperqif/measures.hpp"

namespace fixtures {

using namespace hyperqif;

inline SecretSpace two_secrets() { return SecretSpace({"x1", "x2"}); }

inline Distribution strategy(const SecretSpace& space, std::vector<double> probs) {
    return Distribution(space, std::move(probs));
}

// sigma1..sigma4 of the small password table: point at x1, point at x2,
// uniform, and the 9/10-1/10 skew.
inline std::vector<Distribution> password_strategies() {
    const SecretSpace space = two_secrets();
    return {strategy(space, {1.0, 0.0}), strategy(space, {0.0, 1.0}),
            strategy(space, {0.5, 0.5}), strategy(space, {0.9, 0.1})};
}

// env1 = {sigma1@1/2, sigma2@1/2}, env2 = [sigma3], env3 = {sigma1@1/2, sigma4@1/2}.
inline Hyper env1() {
    auto s = password_strategies();
    return Hyper(two_secrets(), {s[0], s[1], s[2], s[3]}, {0.5, 0.5, 0.0, 0.0});
}
inline Hyper env2() {
    auto s = password_strategies();
    return point_hyper(s[2]);
}
inline Hyper env3() {
    auto s = password_strategies();
    return Hyper(two_secrets(), {s[0], s[3]}, {0.5, 0.5});
}

// Adversary B's gain: guessing the secret, with x2 worth 9.5.
inline GainFunction gain_b() {
    const SecretSpace space = two_secrets();
    return GainFunction({"x1", "x2"}, space, {{1.0, 0.0}, {0.0, 9.5}});
}

// The six-user environment and its three-state aggregation.
inline Hyper six_user_env() {
    const SecretSpace space = two_secrets();
    std::vector<Distribution> inners = {
        strategy(space, {1.0, 0.0}),
        strategy(space, {0.0, 1.0}),
        strategy(space, {0.5, 0.5}),
        strategy(space, {0.25, 0.75}),
        strategy(space, {0.75, 0.25}),
        strategy(space, {1.0 / 3.0, 2.0 / 3.0}),
    };
    return Hyper(space, std::move(inners), {0.1, 0.1, 0.2, 0.3, 0.2, 0.1});
}

inline AggregationMatrix state_aggregation() {
    std::vector<std::string> users{"0", "1", "2", "3", "4", "5"};
    std::vector<std::string> states{"A", "B", "C"};
    Mat matrix = {{1, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 1}};
    return AggregationMatrix(SecretSpace(users), SecretSpace(states), matrix);
}

// The three-state model the aggregation produces.
inline Hyper state_model() {
    const SecretSpace space = two_secrets();
    std::vector<Distribution> inners = {
        strategy(space, {0.5, 0.5}),
        strategy(space, {7.0 / 20.0, 13.0 / 20.0}),
        strategy(space, {11.0 / 18.0, 7.0 / 18.0}),
    };
    return Hyper(space, std::move(inners), {0.2, 0.5, 0.3});
}

// Three-inner hyper whose decomposition is known in closed form.
inline Hyper appendix_hyper() {
    const SecretSpace space = two_secrets();
    std::vector<Distribution> inners = {
        strategy(space, {1.0, 0.0}),
        strategy(space, {0.0, 1.0}),
        strategy(space, {0.5, 0.5}),
    };
    return Hyper(space, std::move(inners), {0.25, 0.25, 0.5});
}

inline Channel appendix_delta() {
    return Channel(two_secrets(), SecretSpace({"0", "1", "2"}),
                   {{0.5, 0.0, 0.5}, {0.0, 0.5, 0.5}});
}

// Joint with p(x1,y1)=1/2, p(x2,y1)=0, p(x1,y2)=p(x2,y2)=1/4.
inline JointDistribution chain_rule_joint() {
    return JointDistribution(two_secrets(), SecretSpace({"y1", "y2"}),
                             {{0.5, 0.25}, {0.0, 0.25}});
}

// Small deterministic generators for hand-rolled property loops.
struct TestRng {
    std::mt19937_64 engine{0xfeedface2024ULL};

    double uniform(double lo = 0.0, double hi = 1.0) {
        return std::uniform_real_distribution<double>(lo, hi)(engine);
    }
    std::size_t between(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(engine);
    }
    Vec simplex_point(std::size_t n) {
        Vec v(n);
        double total = 0.0;
        for (double& x : v) {
            x = -std::log(uniform(1e-12, 1.0));
            total += x;
        }
        for (double& x : v) x /= total;
        return v;
    }
    SecretSpace space(std::size_t max_labels = 6) {
        const std::size_t n = between(2, max_labels);
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i + 1));
        return SecretSpace(std::move(labels));
    }
    Distribution distribution(const SecretSpace& s) {
        return Distribution(s, simplex_point(s.size()));
    }
    Hyper hyper(const SecretSpace& s, std::size_t max_inners = 6) {
        const std::size_t k = between(1, max_inners);
        std::vector<Distribution> inners;
        for (std::size_t j = 0; j < k; ++j) inners.push_back(distribution(s));
        return Hyper(s, std::move(inners), simplex_point(k));
    }
    GainFunction gain(const SecretSpace& s) {
        const std::size_t n_guesses = between(1, 5);
        std::vector<std::string> guesses;
        for (std::size_t w = 0; w < n_guesses; ++w) guesses.push_back("w" + std::to_string(w));
        Mat g(n_guesses, Vec(s.size()));
        for (Vec& row : g) {
            for (double& v : row) v = uniform();
        }
        return GainFunction(std::move(guesses), s, std::move(g));
    }
};

}  // namespace fixtures
