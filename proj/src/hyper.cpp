#include "hyperqif/hyper.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace hyperqif {

namespace {

SecretSpace positional_labels(std::size_t count) {
    std::vector<std::string> labels;
    labels.reserve(count);
    for (std::size_t i = 0; i < count; ++i) labels.push_back(std::to_string(i));
    return SecretSpace(std::move(labels));
}

}  // namespace

Hyper::Hyper(SecretSpace space, std::vector<Distribution> inners, Vec outer)
    : space_(std::move(space)) {
    if (inners.size() != outer.size()) {
        std::ostringstream msg;
        msg << "hyper: " << outer.size() << " outer probabilities for "
            << inners.size() << " inners";
        throw LengthMismatch(msg.str());
    }
    if (inners.empty()) throw LengthMismatch("hyper: needs at least one inner");
    for (const Distribution& inner : inners) {
        if (inner.space() != space_) {
            throw SpaceMismatch("hyper: inner over a different secret space");
        }
    }
    // Validate the outer as a distribution over inner indices, then drop
    // zero-mass inners.
    const std::size_t count = outer.size();
    Distribution outer_dist(positional_labels(count), std::move(outer));
    for (std::size_t j = 0; j < inners.size(); ++j) {
        if (outer_dist[j] > 0.0) {
            inners_.push_back(std::move(inners[j]));
            outer_.push_back(outer_dist[j]);
        }
    }
}

Hyper point_hyper(const Distribution& prior) {
    return Hyper(prior.space(), {prior}, {1.0});
}

Distribution prior_of(const Hyper& hyper) {
    Vec mix(hyper.space().size(), 0.0);
    for (std::size_t j = 0; j < hyper.size(); ++j) {
        const Distribution& inner = hyper.inner(j);
        for (std::size_t x = 0; x < mix.size(); ++x) {
            mix[x] += hyper.outer_prob(j) * inner[x];
        }
    }
    return Distribution(hyper.space(), std::move(mix));
}

Hyper push_through(const Distribution& prior, const Channel& channel) {
    if (prior.space() != channel.input_space()) {
        throw SpaceMismatch("push_through: prior space differs from channel input space");
    }
    const std::size_t n_out = channel.output_space().size();
    std::vector<Distribution> inners;
    Vec outer;
    for (std::size_t y = 0; y < n_out; ++y) {
        double p_y = 0.0;
        for (std::size_t x = 0; x < prior.size(); ++x) {
            p_y += prior[x] * channel.at(x, y);
        }
        if (p_y == 0.0) continue;
        Vec posterior(prior.size(), 0.0);
        for (std::size_t x = 0; x < prior.size(); ++x) {
            posterior[x] = prior[x] * channel.at(x, y) / p_y;
        }
        inners.emplace_back(prior.space(), std::move(posterior));
        outer.push_back(p_y);
    }
    return Hyper(prior.space(), std::move(inners), std::move(outer));
}

JointDistribution joint_matrix(const Hyper& hyper) {
    const std::size_t n = hyper.space().size();
    Mat joint(n, Vec(hyper.size(), 0.0));
    for (std::size_t j = 0; j < hyper.size(); ++j) {
        for (std::size_t x = 0; x < n; ++x) {
            joint[x][j] = hyper.outer_prob(j) * hyper.inner(j)[x];
        }
    }
    return JointDistribution(hyper.space(), positional_labels(hyper.size()),
                             std::move(joint));
}

Hyper from_joint(const JointDistribution& joint) {
    const std::size_t n_rows = joint.row_space().size();
    const std::size_t n_cols = joint.col_space().size();
    std::vector<Distribution> inners;
    Vec outer;
    for (std::size_t c = 0; c < n_cols; ++c) {
        double mass = 0.0;
        for (std::size_t r = 0; r < n_rows; ++r) mass += joint.at(r, c);
        if (mass == 0.0) continue;
        Vec inner(n_rows, 0.0);
        for (std::size_t r = 0; r < n_rows; ++r) inner[r] = joint.at(r, c) / mass;
        inners.emplace_back(joint.row_space(), std::move(inner));
        outer.push_back(mass);
    }
    if (inners.empty()) throw NotNormalized("from_joint: joint carries no mass");
    return Hyper(joint.row_space(), std::move(inners), std::move(outer));
}

HyperDecomposition decompose(const Hyper& hyper) {
    Distribution prior = prior_of(hyper);
    const std::size_t n = hyper.space().size();
    const std::size_t k = hyper.size();
    Mat delta(n, Vec(k, 0.0));
    for (std::size_t x = 0; x < n; ++x) {
        if (prior[x] > 0.0) {
            for (std::size_t j = 0; j < k; ++j) {
                delta[x][j] = hyper.outer_prob(j) * hyper.inner(j)[x] / prior[x];
            }
        } else {
            delta[x].assign(k, 1.0 / static_cast<double>(k));
        }
    }
    Channel channel(hyper.space(), positional_labels(k), std::move(delta));
    return HyperDecomposition{std::move(prior), std::move(channel)};
}

Hyper reduce(const Hyper& hyper, double tolerance) {
    std::vector<Distribution> reps;
    Vec outer;
    for (std::size_t j = 0; j < hyper.size(); ++j) {
        const Distribution& inner = hyper.inner(j);
        bool merged = false;
        for (std::size_t r = 0; r < reps.size(); ++r) {
            double distance = 0.0;
            for (std::size_t x = 0; x < inner.size(); ++x) {
                distance = std::max(distance, std::abs(inner[x] - reps[r][x]));
            }
            if (distance <= tolerance) {
                outer[r] += hyper.outer_prob(j);
                merged = true;
                break;
            }
        }
        if (!merged) {
            reps.push_back(inner);
            outer.push_back(hyper.outer_prob(j));
        }
    }
    return Hyper(hyper.space(), std::move(reps), std::move(outer));
}

struct HigherHyper::Node {
    std::optional<Distribution> leaf;
    Vec outer;
    std::vector<HigherHyper> children;
    std::size_t depth = 1;
};

HigherHyper HigherHyper::leaf(Distribution dist) {
    auto node = std::make_shared<Node>();
    node->leaf = std::move(dist);
    node->depth = 1;
    return HigherHyper(std::move(node));
}

HigherHyper HigherHyper::node(Vec outer, std::vector<HigherHyper> children) {
    if (outer.size() != children.size()) {
        throw LengthMismatch("higher hyper: outer length differs from child count");
    }
    if (children.empty()) throw LengthMismatch("higher hyper: needs at least one child");
    const std::size_t child_depth = children.front().depth();
    const SecretSpace& space = children.front().space();
    for (const HigherHyper& child : children) {
        if (child.depth() != child_depth) {
            throw DimensionMismatch("higher hyper: ragged nesting (children of unequal depth)");
        }
        if (child.space() != space) {
            throw SpaceMismatch("higher hyper: children over different secret spaces");
        }
    }
    const std::size_t count = outer.size();
    Distribution outer_dist(positional_labels(count), std::move(outer));
    auto node = std::make_shared<Node>();
    node->depth = child_depth + 1;
    for (std::size_t i = 0; i < children.size(); ++i) {
        if (outer_dist[i] > 0.0) {
            node->outer.push_back(outer_dist[i]);
            node->children.push_back(children[i]);
        }
    }
    return HigherHyper(std::move(node));
}

bool HigherHyper::is_leaf() const noexcept { return node_->leaf.has_value(); }
std::size_t HigherHyper::depth() const noexcept { return node_->depth; }

const SecretSpace& HigherHyper::space() const noexcept {
    const Node* n = node_.get();
    while (!n->leaf) n = n->children.front().node_.get();
    return n->leaf->space();
}

const Distribution& HigherHyper::leaf_distribution() const {
    if (!node_->leaf) throw Error("higher hyper: not a leaf");
    return *node_->leaf;
}

const Vec& HigherHyper::outer() const {
    if (node_->leaf) throw Error("higher hyper: leaf has no outer");
    return node_->outer;
}

const std::vector<HigherHyper>& HigherHyper::children() const {
    if (node_->leaf) throw Error("higher hyper: leaf has no children");
    return node_->children;
}

namespace {

void collect_leaves(const HigherHyper& h, double weight,
                    std::vector<Distribution>& inners, Vec& outer) {
    if (h.is_leaf()) {
        inners.push_back(h.leaf_distribution());
        outer.push_back(weight);
        return;
    }
    for (std::size_t i = 0; i < h.children().size(); ++i) {
        collect_leaves(h.children()[i], weight * h.outer()[i], inners, outer);
    }
}

}  // namespace

Hyper collapse(const HigherHyper& h) {
    if (h.depth() < 2) {
        throw DepthTooSmall("collapse: requires depth >= 2, got a bare distribution");
    }
    std::vector<Distribution> inners;
    Vec outer;
    collect_leaves(h, 1.0, inners, outer);
    return Hyper(h.space(), std::move(inners), std::move(outer));
}

double vulnerability_n(const VulnerabilityMeasure& measure, const HigherHyper& h) {
    if (h.is_leaf()) return measure.prior_vulnerability(h.leaf_distribution());
    double total = 0.0;
    for (std::size_t i = 0; i < h.children().size(); ++i) {
        total += h.outer()[i] * vulnerability_n(measure, h.children()[i]);
    }
    return total;
}

}  // namespace hyperqif
