#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hyperqif/core.hpp"
#include "hyperqif/measures.hpp"

namespace hyperqif {

/// Distribution on distributions: an outer distribution over inner
/// Distributions that all share one SecretSpace. Serves both as an
/// environment (distribution on secret-generating strategies) and as an
/// adversary's model.
///
/// Inners carrying zero outer mass are dropped at construction. Duplicate
/// inners are kept as-is; merging is the opt-in job of reduce().
class Hyper {
public:
    Hyper(SecretSpace space, std::vector<Distribution> inners, Vec outer);

    const SecretSpace& space() const noexcept { return space_; }
    const std::vector<Distribution>& inners() const noexcept { return inners_; }
    const Vec& outer() const noexcept { return outer_; }
    std::size_t size() const noexcept { return inners_.size(); }
    const Distribution& inner(std::size_t j) const { return inners_.at(j); }
    double outer_prob(std::size_t j) const { return outer_.at(j); }

private:
    SecretSpace space_;
    std::vector<Distribution> inners_;
    Vec outer_;
};

/// [pi]: all outer mass on a single inner.
Hyper point_hyper(const Distribution& prior);

/// The prior consistent with the hyper: the outer-weighted mixture of the
/// inners (the adversary's concise knowledge).
Distribution prior_of(const Hyper& hyper);

/// Pushes `prior` through `channel`: outer(y) = p(y), inner_y = posterior
/// p(.|y). Output columns with p(y) = 0 are dropped.
Hyper push_through(const Distribution& prior, const Channel& channel);

/// The |X| x |inners| joint matrix with column j = outer(j) * inner_j.
/// Column labels are positional indices.
JointDistribution joint_matrix(const Hyper& hyper);

/// Recovers a hyper from a joint: outer = column sums, inners = normalized
/// columns, zero-mass columns dropped.
Hyper from_joint(const JointDistribution& joint);

struct HyperDecomposition {
    Distribution prior;   // pi_H
    Channel channel;      // Delta_H, secrets -> inner indices
};

/// Writes the hyper as [pi_H, Delta_H] with Delta_H(i,j) = p(inner_j | x_i).
/// Rows for zero-prior secrets are filled uniformly. push_through on the
/// result re-yields the hyper.
HyperDecomposition decompose(const Hyper& hyper);

/// Canonical form: merges inners within L-infinity distance `tolerance`
/// (mass added to the first representative seen). Opt-in; constructors
/// never merge.
Hyper reduce(const Hyper& hyper, double tolerance = kNormTolerance);

/// A distribution tower of uniform depth: Leaf(Distribution) at depth 1,
/// otherwise an outer distribution over children of equal depth.
class HigherHyper {
public:
    static HigherHyper leaf(Distribution dist);
    static HigherHyper node(Vec outer, std::vector<HigherHyper> children);

    bool is_leaf() const noexcept;
    /// Leaf = 1, node = 1 + depth of its children.
    std::size_t depth() const noexcept;
    const SecretSpace& space() const noexcept;

    const Distribution& leaf_distribution() const;
    const Vec& outer() const;
    const std::vector<HigherHyper>& children() const;

private:
    struct Node;
    explicit HigherHyper(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Flattens a depth >= 2 tower into an ordinary Hyper: one inner per
/// reachable leaf, weighted by the product of outer probabilities along its
/// path. DepthTooSmall on a bare leaf.
Hyper collapse(const HigherHyper& h);

/// Vulnerability of order n: the measure itself on leaves, the recursive
/// expectation above them. Agrees with hyper_vulnerability of collapse().
double vulnerability_n(const VulnerabilityMeasure& measure, const HigherHyper& h);

}  // namespace hyperqif
