#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hyperqif/errors.hpp"

namespace hyperqif {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

/// Absolute tolerance for "sums to one" validation. Inputs whose total
/// deviates from 1 by more than this are rejected; smaller deviations are
/// renormalized away.
inline constexpr double kNormTolerance = 1e-9;

/// Ordered set of distinct labels naming the possible secret values.
///
/// The label order is fixed at construction and is the indexing contract
/// for every vector and matrix in the library. The labels are shared
/// (copy-on-nothing) so that hypers with many inners over one space stay
/// cheap.
class SecretSpace {
public:
    explicit SecretSpace(std::vector<std::string> labels);

    std::size_t size() const noexcept { return data_->labels.size(); }
    const std::string& label(std::size_t i) const { return data_->labels.at(i); }
    const std::vector<std::string>& labels() const noexcept { return data_->labels; }

    std::optional<std::size_t> find(std::string_view label) const;
    /// Index of `label`; throws UnknownLabel if absent.
    std::size_t index_of(const std::string& label) const;

    bool operator==(const SecretSpace& other) const;
    bool operator!=(const SecretSpace& other) const { return !(*this == other); }

private:
    struct Data {
        std::vector<std::string> labels;
        std::unordered_map<std::string, std::size_t> index;
    };
    std::shared_ptr<const Data> data_;
};

/// Probability distribution over a SecretSpace; doubles as a defender
/// strategy. Entries are validated non-negative and renormalized when the
/// total is within kNormTolerance of 1, rejected otherwise.
class Distribution {
public:
    Distribution(SecretSpace space, Vec probs);

    /// All probability mass on `label`, 0 elsewhere.
    static Distribution point(const SecretSpace& space, const std::string& label);
    static Distribution uniform(const SecretSpace& space);

    const SecretSpace& space() const noexcept { return space_; }
    const Vec& probs() const noexcept { return probs_; }
    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_.at(i); }

    /// Indices with probability > 0.
    std::vector<std::size_t> support() const;

private:
    SecretSpace space_;
    Vec probs_;
};

/// Row-stochastic matrix from an input label set to an output label set.
class Channel {
public:
    Channel(SecretSpace input_space, SecretSpace output_space, Mat matrix);

    static Channel identity(const SecretSpace& space);
    /// The noninterferent channel: a single output column, all rows equal.
    static Channel noninterferent(const SecretSpace& input_space,
                                  const std::string& output_label = "*");

    const SecretSpace& input_space() const noexcept { return input_; }
    const SecretSpace& output_space() const noexcept { return output_; }
    const Mat& matrix() const noexcept { return matrix_; }
    double at(std::size_t in, std::size_t out) const { return matrix_.at(in).at(out); }
    const Vec& row(std::size_t in) const { return matrix_.at(in); }

    /// True iff every row has a single 1 (up to kNormTolerance).
    bool is_deterministic() const;

private:
    SecretSpace input_;
    SecretSpace output_;
    Mat matrix_;
};

/// Joint distribution over (row label, column label) pairs. Entries are
/// non-negative and the total is 1 within kNormTolerance.
class JointDistribution {
public:
    JointDistribution(SecretSpace row_space, SecretSpace col_space, Mat matrix);

    const SecretSpace& row_space() const noexcept { return rows_; }
    const SecretSpace& col_space() const noexcept { return cols_; }
    const Mat& matrix() const noexcept { return matrix_; }
    double at(std::size_t r, std::size_t c) const { return matrix_.at(r).at(c); }

private:
    SecretSpace rows_;
    SecretSpace cols_;
    Mat matrix_;
};

/// p(x,y) = prior(x) * channel(x,y).
JointDistribution joint_from(const Distribution& prior, const Channel& channel);

struct MarginalsAndConditionals {
    Vec row_marginal;       // p(x)
    Vec col_marginal;       // p(y)
    Mat row_conditionals;   // p(y|x), one row per row label
    Mat col_conditionals;   // p(x|y), one row per column label
};

/// Marginalization and conditioning of a joint. Conditionals attached to a
/// zero-mass outcome are filled uniformly so the result is always total.
MarginalsAndConditionals marginals_and_conditionals(const JointDistribution& joint);

}  // namespace hyperqif
