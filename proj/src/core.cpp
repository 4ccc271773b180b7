#include "hyperqif/core.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

namespace hyperqif {

namespace {

double checked_sum(const Vec& values, const char* what) {
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (!(v >= 0.0)) {  // also catches NaN
            std::ostringstream msg;
            msg << what << ": negative entry " << v << " at index " << i;
            throw NegativeProbability(msg.str());
        }
        sum += v;
    }
    return sum;
}

// Validates non-negativity and total ~1, then rescales to total exactly 1.
void normalize_in_place(Vec& values, const char* what) {
    const double sum = checked_sum(values, what);
    if (std::abs(sum - 1.0) > kNormTolerance) {
        std::ostringstream msg;
        msg << what << ": entries sum to " << sum << ", expected 1 within "
            << kNormTolerance;
        throw NotNormalized(msg.str());
    }
    for (double& v : values) v /= sum;
}

}  // namespace

SecretSpace::SecretSpace(std::vector<std::string> labels) {
    if (labels.empty()) throw Error("secret space: needs at least one label");
    auto data = std::make_shared<Data>();
    data->index.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!data->index.emplace(labels[i], i).second) {
            throw Error("secret space: duplicate label \"" + labels[i] + "\"");
        }
    }
    data->labels = std::move(labels);
    data_ = std::move(data);
}

std::optional<std::size_t> SecretSpace::find(std::string_view label) const {
    auto it = data_->index.find(std::string(label));
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
}

std::size_t SecretSpace::index_of(const std::string& label) const {
    auto it = data_->index.find(label);
    if (it == data_->index.end()) {
        throw UnknownLabel("unknown label \"" + label + "\"");
    }
    return it->second;
}

bool SecretSpace::operator==(const SecretSpace& other) const {
    return data_ == other.data_ || data_->labels == other.data_->labels;
}

Distribution::Distribution(SecretSpace space, Vec probs)
    : space_(std::move(space)), probs_(std::move(probs)) {
    if (probs_.size() != space_.size()) {
        std::ostringstream msg;
        msg << "distribution: " << probs_.size() << " probabilities for "
            << space_.size() << " labels";
        throw LengthMismatch(msg.str());
    }
    normalize_in_place(probs_, "distribution");
}

Distribution Distribution::point(const SecretSpace& space, const std::string& label) {
    Vec probs(space.size(), 0.0);
    probs[space.index_of(label)] = 1.0;
    return Distribution(space, std::move(probs));
}

Distribution Distribution::uniform(const SecretSpace& space) {
    return Distribution(space, Vec(space.size(), 1.0 / static_cast<double>(space.size())));
}

std::vector<std::size_t> Distribution::support() const {
    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (probs_[i] > 0.0) indices.push_back(i);
    }
    return indices;
}

Channel::Channel(SecretSpace input_space, SecretSpace output_space, Mat matrix)
    : input_(std::move(input_space)), output_(std::move(output_space)),
      matrix_(std::move(matrix)) {
    if (matrix_.size() != input_.size()) {
        throw DimensionMismatch("channel: row count does not match input space");
    }
    for (std::size_t r = 0; r < matrix_.size(); ++r) {
        Vec& row = matrix_[r];
        if (row.size() != output_.size()) {
            throw DimensionMismatch("channel: column count does not match output space");
        }
        double sum = 0.0;
        for (double v : row) {
            if (!(v >= 0.0)) {
                std::ostringstream msg;
                msg << "channel: negative entry in row " << r;
                throw NotStochastic(msg.str());
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kNormTolerance) {
            std::ostringstream msg;
            msg << "channel: row " << r << " sums to " << sum;
            throw NotStochastic(msg.str());
        }
        for (double& v : row) v /= sum;
    }
}

Channel Channel::identity(const SecretSpace& space) {
    Mat rows(space.size(), Vec(space.size(), 0.0));
    for (std::size_t i = 0; i < space.size(); ++i) rows[i][i] = 1.0;
    return Channel(space, space, std::move(rows));
}

Channel Channel::noninterferent(const SecretSpace& input_space,
                                const std::string& output_label) {
    Mat rows(input_space.size(), Vec{1.0});
    return Channel(input_space, SecretSpace({output_label}), std::move(rows));
}

bool Channel::is_deterministic() const {
    for (const Vec& row : matrix_) {
        for (double v : row) {
            if (std::abs(v - 1.0) > kNormTolerance && std::abs(v) > kNormTolerance) {
                return false;
            }
        }
    }
    return true;
}

JointDistribution::JointDistribution(SecretSpace row_space, SecretSpace col_space, Mat matrix)
    : rows_(std::move(row_space)), cols_(std::move(col_space)), matrix_(std::move(matrix)) {
    if (matrix_.size() != rows_.size()) {
        throw DimensionMismatch("joint: row count does not match row space");
    }
    double total = 0.0;
    for (std::size_t r = 0; r < matrix_.size(); ++r) {
        if (matrix_[r].size() != cols_.size()) {
            throw DimensionMismatch("joint: column count does not match column space");
        }
        total += checked_sum(matrix_[r], "joint");
    }
    if (std::abs(total - 1.0) > kNormTolerance) {
        std::ostringstream msg;
        msg << "joint: total mass " << total << ", expected 1 within " << kNormTolerance;
        throw NotNormalized(msg.str());
    }
    for (Vec& row : matrix_) {
        for (double& v : row) v /= total;
    }
}

JointDistribution joint_from(const Distribution& prior, const Channel& channel) {
    if (prior.space() != channel.input_space()) {
        throw SpaceMismatch("joint_from: prior space differs from channel input space");
    }
    Mat joint(prior.size(), Vec(channel.output_space().size(), 0.0));
    for (std::size_t x = 0; x < prior.size(); ++x) {
        for (std::size_t y = 0; y < channel.output_space().size(); ++y) {
            joint[x][y] = prior[x] * channel.at(x, y);
        }
    }
    return JointDistribution(prior.space(), channel.output_space(), std::move(joint));
}

MarginalsAndConditionals marginals_and_conditionals(const JointDistribution& joint) {
    const std::size_t n_rows = joint.row_space().size();
    const std::size_t n_cols = joint.col_space().size();

    MarginalsAndConditionals out;
    out.row_marginal.assign(n_rows, 0.0);
    out.col_marginal.assign(n_cols, 0.0);
    for (std::size_t r = 0; r < n_rows; ++r) {
        for (std::size_t c = 0; c < n_cols; ++c) {
            out.row_marginal[r] += joint.at(r, c);
            out.col_marginal[c] += joint.at(r, c);
        }
    }

    out.row_conditionals.assign(n_rows, Vec(n_cols, 0.0));
    for (std::size_t r = 0; r < n_rows; ++r) {
        if (out.row_marginal[r] > 0.0) {
            for (std::size_t c = 0; c < n_cols; ++c) {
                out.row_conditionals[r][c] = joint.at(r, c) / out.row_marginal[r];
            }
        } else {
            out.row_conditionals[r].assign(n_cols, 1.0 / static_cast<double>(n_cols));
        }
    }

    out.col_conditionals.assign(n_cols, Vec(n_rows, 0.0));
    for (std::size_t c = 0; c < n_cols; ++c) {
        if (out.col_marginal[c] > 0.0) {
            for (std::size_t r = 0; r < n_rows; ++r) {
                out.col_conditionals[c][r] = joint.at(r, c) / out.col_marginal[c];
            }
        } else {
            out.col_conditionals[c].assign(n_rows, 1.0 / static_cast<double>(n_rows));
        }
    }
    return out;
}

}  // namespace hyperqif
