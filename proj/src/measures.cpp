#include "hyperqif/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "hyperqif/hyper.hpp"

namespace hyperqif {

namespace {

double expected_gain(const GainFunction& gain, const Distribution& prior,
                     std::size_t guess) {
    double total = 0.0;
    for (std::size_t x = 0; x < prior.size(); ++x) {
        total += prior[x] * gain.at(guess, x);
    }
    return total;
}

void require_same_space(const GainFunction& gain, const Distribution& prior) {
    if (gain.space() != prior.space()) {
        throw SpaceMismatch("gain function and distribution cover different secret spaces");
    }
}

}  // namespace

GainFunction::GainFunction(std::vector<std::string> guesses, SecretSpace space, Mat gain)
    : guesses_(std::move(guesses)), space_(std::move(space)), gain_(std::move(gain)) {
    if (guesses_.empty()) {
        throw InvalidGainFunction("gain function: guess set is empty");
    }
    for (std::size_t i = 0; i < guesses_.size(); ++i) {
        for (std::size_t j = i + 1; j < guesses_.size(); ++j) {
            if (guesses_[i] == guesses_[j]) {
                throw InvalidGainFunction("gain function: duplicate guess \"" + guesses_[i] + "\"");
            }
        }
    }
    if (gain_.size() != guesses_.size()) {
        throw DimensionMismatch("gain function: row count does not match guess count");
    }
    for (const Vec& row : gain_) {
        if (row.size() != space_.size()) {
            throw DimensionMismatch("gain function: column count does not match secret space");
        }
        for (double v : row) {
            if (!std::isfinite(v)) {
                throw InvalidGainFunction("gain function: non-finite entry");
            }
        }
    }
    for (std::size_t x = 0; x < space_.size(); ++x) {
        bool has_non_negative = false;
        for (std::size_t w = 0; w < guesses_.size(); ++w) {
            if (gain_[w][x] >= 0.0) {
                has_non_negative = true;
                break;
            }
        }
        if (!has_non_negative) {
            std::ostringstream msg;
            msg << "gain function: every gain for secret \"" << space_.label(x)
                << "\" is negative; at least one non-negative entry per secret is required";
            throw InvalidGainFunction(msg.str());
        }
    }
}

GainFunction GainFunction::identity(const SecretSpace& space) {
    Mat gain(space.size(), Vec(space.size(), 0.0));
    for (std::size_t i = 0; i < space.size(); ++i) gain[i][i] = 1.0;
    return GainFunction(space.labels(), space, std::move(gain));
}

VulnerabilityMeasure VulnerabilityMeasure::bayes() {
    return VulnerabilityMeasure(std::nullopt, "bayes");
}

VulnerabilityMeasure VulnerabilityMeasure::g_based(GainFunction gain, std::string name) {
    return VulnerabilityMeasure(std::move(gain), std::move(name));
}

const GainFunction& VulnerabilityMeasure::gain_function() const {
    if (!gain_) throw Error("measure \"bayes\" stores no explicit gain function");
    return *gain_;
}

GainFunction VulnerabilityMeasure::as_gain(const SecretSpace& space) const {
    if (!gain_) return GainFunction::identity(space);
    if (gain_->space() != space) {
        throw SpaceMismatch("measure's gain function covers a different secret space");
    }
    return *gain_;
}

double VulnerabilityMeasure::prior_vulnerability(const Distribution& prior) const {
    return gain_ ? g_vulnerability(*gain_, prior) : bayes_vulnerability(prior);
}

double g_vulnerability(const GainFunction& gain, const Distribution& prior) {
    require_same_space(gain, prior);
    return expected_gain(gain, prior, optimal_guess_index(gain, prior));
}

double bayes_vulnerability(const Distribution& prior) {
    return *std::max_element(prior.probs().begin(), prior.probs().end());
}

std::size_t optimal_guess_index(const GainFunction& gain, const Distribution& prior) {
    require_same_space(gain, prior);
    std::size_t best = 0;
    double best_value = expected_gain(gain, prior, 0);
    for (std::size_t w = 1; w < gain.guess_count(); ++w) {
        const double value = expected_gain(gain, prior, w);
        if (value > best_value) {
            best = w;
            best_value = value;
        }
    }
    return best;
}

std::string optimal_guess(const GainFunction& gain, const Distribution& prior) {
    return gain.guesses().at(optimal_guess_index(gain, prior));
}

double hyper_vulnerability(const VulnerabilityMeasure& measure, const Hyper& hyper) {
    double total = 0.0;
    for (std::size_t j = 0; j < hyper.size(); ++j) {
        total += hyper.outer_prob(j) * measure.prior_vulnerability(hyper.inner(j));
    }
    return total;
}

double posterior_g_vulnerability(const GainFunction& gain, const Distribution& prior,
                                 const Channel& channel) {
    return hyper_vulnerability(VulnerabilityMeasure::g_based(gain),
                               push_through(prior, channel));
}

double joint_bayes(const JointDistribution& joint) {
    double best = 0.0;
    for (const Vec& row : joint.matrix()) {
        for (double v : row) best = std::max(best, v);
    }
    return best;
}

}  // namespace hyperqif
