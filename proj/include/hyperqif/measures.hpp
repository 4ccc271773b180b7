#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hyperqif/core.hpp"

namespace hyperqif {

class Hyper;

/// Finite guess set W with a gain matrix g(w,x): the adversary's benefit
/// for guessing w when the secret is x.
///
/// To keep the induced vulnerability non-negative on every prior, each
/// secret column must contain at least one non-negative entry (a sufficient
/// condition; arbitrary real gains below that floor are rejected).
class GainFunction {
public:
    GainFunction(std::vector<std::string> guesses, SecretSpace space, Mat gain);

    /// W = X, 1 on the diagonal, 0 elsewhere. Induces Bayes vulnerability.
    static GainFunction identity(const SecretSpace& space);

    const std::vector<std::string>& guesses() const noexcept { return guesses_; }
    const SecretSpace& space() const noexcept { return space_; }
    const Mat& gain() const noexcept { return gain_; }
    double at(std::size_t guess, std::size_t secret) const {
        return gain_.at(guess).at(secret);
    }
    std::size_t guess_count() const noexcept { return guesses_.size(); }

private:
    std::vector<std::string> guesses_;
    SecretSpace space_;
    Mat gain_;
};

/// Either Bayes vulnerability (max entry of the prior) or a g-vulnerability
/// for an explicit gain function. Bayes behaves exactly like the identity
/// gain; it is computed directly for clarity and speed.
class VulnerabilityMeasure {
public:
    static VulnerabilityMeasure bayes();
    static VulnerabilityMeasure g_based(GainFunction gain, std::string name = "g");

    bool is_bayes() const noexcept { return !gain_.has_value(); }
    const std::string& name() const noexcept { return name_; }
    const GainFunction& gain_function() const;

    /// The gain function realizing this measure over `space` (identity for
    /// Bayes). SpaceMismatch if a stored gain covers a different space.
    GainFunction as_gain(const SecretSpace& space) const;

    double prior_vulnerability(const Distribution& prior) const;
    double operator()(const Distribution& prior) const { return prior_vulnerability(prior); }

private:
    VulnerabilityMeasure(std::optional<GainFunction> gain, std::string name)
        : gain_(std::move(gain)), name_(std::move(name)) {}

    std::optional<GainFunction> gain_;
    std::string name_;
};

/// V_g(pi) = max_w sum_x pi(x) g(w,x).
double g_vulnerability(const GainFunction& gain, const Distribution& prior);

/// Bayes vulnerability: max entry of the prior.
double bayes_vulnerability(const Distribution& prior);

/// Argmax guess for V_g(pi); ties broken by lowest guess index.
std::size_t optimal_guess_index(const GainFunction& gain, const Distribution& prior);
std::string optimal_guess(const GainFunction& gain, const Distribution& prior);

/// Expectation of the measure over the hyper's inners.
double hyper_vulnerability(const VulnerabilityMeasure& measure, const Hyper& hyper);

/// V_g[pi,C]: hyper vulnerability of the prior pushed through the channel.
double posterior_g_vulnerability(const GainFunction& gain, const Distribution& prior,
                                 const Channel& channel);

/// Bayes vulnerability of guessing the (row, column) pair in one try:
/// the max entry of the joint matrix.
double joint_bayes(const JointDistribution& joint);

}  // namespace hyperqif
