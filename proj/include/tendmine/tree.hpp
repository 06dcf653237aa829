#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dataset.hpp"

namespace tendmine {

/// A node of a nominal decision tree. Internal nodes test one attribute and
/// own one child per value of it; leaves predict the majority class of
/// `distribution`.
struct TreeNode {
    /// Training weight per class reaching this node. An empty leaf (no training
    /// instance took its branch) carries its parent's distribution instead.
    ClassDistribution distribution;
    std::optional<std::size_t> attribute;  // engaged on internal nodes
    std::vector<TreeNode> children;
    std::vector<double> branch_weights;  // training weight down each branch, internal nodes only
    bool empty = false;

    bool is_leaf() const noexcept { return !attribute.has_value(); }
    std::size_t predicted() const { return distribution.majority(); }

    /// Training weight that actually reached the node (0 for empty leaves).
    double weight() const { return empty ? 0.0 : distribution.total(); }

    static TreeNode leaf(ClassDistribution dist, bool empty = false) {
        TreeNode n;
        n.distribution = std::move(dist);
        n.empty = empty;
        return n;
    }

    bool operator==(const TreeNode&) const = default;
};

struct TreeStats {
    std::size_t node_count = 0;
    std::size_t leaf_count = 0;
    std::size_t depth = 0;

    bool operator==(const TreeStats&) const = default;
};

inline TreeStats compute_stats(const TreeNode& root) {
    TreeStats s;
    std::function<void(const TreeNode&, std::size_t)> walk = [&](const TreeNode& n, std::size_t depth) {
        ++s.node_count;
        s.depth = std::max(s.depth, depth);
        if (n.is_leaf()) {
            ++s.leaf_count;
            return;
        }
        for (auto& c : n.children) walk(c, depth + 1);
    };
    walk(root, 0);
    return s;
}

struct Prediction {
    std::size_t label = 0;
    std::vector<double> probabilities;
};

/// Argmax with ties to the lowest index.
inline std::size_t argmax(std::span<const double> xs) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[i] > xs[best]) best = i;
    return best;
}

class DecisionTree {
public:
    DecisionTree(DatasetSchema schema, TreeNode root, bool laplace_smoothing)
        : schema_(std::move(schema)), root_(std::move(root)), laplace_(laplace_smoothing) {
        std::vector<bool> on_path(schema_.size(), false);
        validate(root_, on_path);
        stats_ = compute_stats(root_);
    }

    const DatasetSchema& schema() const noexcept { return schema_; }
    const TreeNode& root() const noexcept { return root_; }
    const TreeStats& stats() const noexcept { return stats_; }
    bool laplace_smoothing() const noexcept { return laplace_; }

    bool operator==(const DecisionTree&) const = default;

private:
    void validate(const TreeNode& n, std::vector<bool>& on_path) const {
        if (n.distribution.size() != schema_.num_classes())
            throw std::invalid_argument("node distribution does not match class count");
        if (n.is_leaf()) {
            if (!n.children.empty()) throw std::invalid_argument("leaf with children");
            return;
        }
        const std::size_t a = *n.attribute;
        schema_.require_predictor(a);
        if (on_path[a])
            throw std::invalid_argument("attribute '" + schema_.attribute(a).name + "' repeats on a path");
        if (n.children.size() != schema_.attribute(a).size() || n.branch_weights.size() != n.children.size())
            throw std::invalid_argument("internal node on '" + schema_.attribute(a).name +
                                        "' needs one child per value");
        on_path[a] = true;
        for (auto& c : n.children) validate(c, on_path);
        on_path[a] = false;
    }

    DatasetSchema schema_;
    TreeNode root_;
    TreeStats stats_;
    bool laplace_ = true;
};

/// Leaf class probabilities: add-one smoothed, or relative frequencies falling
/// back to uniform for an all-zero distribution.
inline std::vector<double> leaf_probabilities(const ClassDistribution& dist, bool laplace) {
    const std::size_t k = dist.size();
    const double total = dist.total();
    std::vector<double> p(k, 1.0 / static_cast<double>(k));
    if (laplace) {
        for (std::size_t c = 0; c < k; ++c) p[c] = (dist[c] + 1.0) / (total + static_cast<double>(k));
    } else if (total > 0.0) {
        for (std::size_t c = 0; c < k; ++c) p[c] = dist[c] / total;
    }
    return p;
}

namespace detail {

inline void accumulate_prediction(const TreeNode& n, const Instance& x, double weight, bool laplace,
                                  std::vector<double>& out) {
    if (n.is_leaf()) {
        const auto p = leaf_probabilities(n.distribution, laplace);
        for (std::size_t c = 0; c < p.size(); ++c) out[c] += weight * p[c];
        return;
    }
    if (auto v = x.values[*n.attribute]) {
        accumulate_prediction(n.children[*v], x, weight, laplace, out);
        return;
    }
    double total = 0.0;
    for (double w : n.branch_weights) total += w;
    for (std::size_t b = 0; b < n.children.size(); ++b) {
        const double share = total > 0.0 ? n.branch_weights[b] / total : 1.0 / static_cast<double>(n.children.size());
        if (share > 0.0) accumulate_prediction(n.children[b], x, weight * share, laplace, out);
    }
}

}  // namespace detail

/// Routes `x` down the tree. A missing test value sends it down every branch,
/// weighted by the training share of each branch, and mixes the leaf outputs.
inline Prediction classify(const DecisionTree& t, const Instance& x) {
    if (x.values.size() != t.schema().size())
        throw std::invalid_argument("instance has " + std::to_string(x.values.size()) + " values, tree expects " +
                                    std::to_string(t.schema().size()));
    Prediction pred;
    pred.probabilities.assign(t.schema().num_classes(), 0.0);
    detail::accumulate_prediction(t.root(), x, 1.0, t.laplace_smoothing(), pred.probabilities);
    double sum = 0.0;
    for (double p : pred.probabilities) sum += p;
    for (double& p : pred.probabilities) p /= sum;
    pred.label = argmax(pred.probabilities);
    return pred;
}

/// Leaf reached by `x`, which must have every tested attribute present.
inline const TreeNode& leaf_for(const DecisionTree& t, const Instance& x) {
    const TreeNode* n = &t.root();
    while (!n->is_leaf()) {
        auto v = x.values.at(*n->attribute);
        if (!v) throw std::invalid_argument("instance lacks tested attribute '" +
                                            t.schema().attribute(*n->attribute).name + "'");
        n = &n->children[*v];
    }
    return *n;
}

}  // namespace tendmine
