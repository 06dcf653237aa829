#pragma once

// Top-down induction of nominal decision trees (C4.5 style) with
// pessimistic-error subtree replacement.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "dataset.hpp"
#include "infotheory.hpp"
#include "tree.hpp"

namespace tendmine {

enum class SplitCriterion { gain_ratio, info_gain };

struct InductionConfig {
    SplitCriterion criterion = SplitCriterion::gain_ratio;
    std::size_t min_instances_per_leaf = 2;
    double confidence_factor = 0.25;
    bool pruning = true;
    bool average_gain_constraint = true;
    bool laplace_smoothing = true;

    /// Plain information gain, no pruning, no average-gain filter.
    static InductionConfig id3() {
        InductionConfig cfg;
        cfg.criterion = SplitCriterion::info_gain;
        cfg.pruning = false;
        cfg.average_gain_constraint = false;
        return cfg;
    }

    void validate() const {
        if (!(confidence_factor > 0.0 && confidence_factor <= 0.5))
            throw std::invalid_argument("confidence factor must lie in (0, 0.5]");
        if (min_instances_per_leaf < 1) throw std::invalid_argument("minimum leaf size must be at least 1");
    }
};

namespace detail {

/// At least two branches receive `min_leaf` known weight.
inline bool splits_usefully(const SplitEvaluation& e, std::size_t min_leaf) {
    const double need = static_cast<double>(min_leaf) - 1e-9;
    return std::count_if(e.branch_weights.begin(), e.branch_weights.end(), [&](double w) { return w >= need; }) >= 2;
}

}  // namespace detail

/// Picks the attribute to test next, or none when no candidate is worth a split.
///
/// Candidates must have positive gain and leave two branches with at least
/// `min_instances_per_leaf` weight. With the gain-ratio criterion and the
/// average-gain constraint, only candidates whose gain reaches the mean gain
/// of that pool compete on gain ratio. Ties keep the lowest schema index.
inline std::optional<std::size_t> select_split(const Dataset& d, std::span<const std::size_t> candidates,
                                               const InductionConfig& cfg) {
    std::vector<std::size_t> order(candidates.begin(), candidates.end());
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end()), order.end());

    std::vector<SplitEvaluation> pool;
    for (auto a : order) {
        auto e = evaluate_split(d, a);
        if (e.info_gain > kGainEpsilon && detail::splits_usefully(e, cfg.min_instances_per_leaf))
            pool.push_back(std::move(e));
    }
    if (pool.empty()) return std::nullopt;

    if (cfg.criterion == SplitCriterion::info_gain) {
        const SplitEvaluation* best = &pool.front();
        for (auto& e : pool)
            if (e.info_gain > best->info_gain) best = &e;
        return best->attribute;
    }

    double mean_gain = 0.0;
    for (auto& e : pool) mean_gain += e.info_gain;
    mean_gain /= static_cast<double>(pool.size());

    const SplitEvaluation* best = nullptr;
    for (auto& e : pool) {
        if (!e.gain_ratio) continue;
        if (cfg.average_gain_constraint && e.info_gain < mean_gain - 1e-9) continue;
        if (!best || *e.gain_ratio > *best->gain_ratio) best = &e;
    }
    if (!best) return std::nullopt;
    return best->attribute;
}

/// Upper confidence bound on the errors of a leaf beyond the `errors` observed
/// among `n` instances, at confidence `cf`.
inline double added_errors(double n, double errors, double cf) {
    if (n <= 0.0) return 0.0;
    if (errors < 1.0) {
        const double base = n * (1.0 - std::pow(cf, 1.0 / n));
        if (errors == 0.0) return base;
        return base + errors * (added_errors(n, 1.0, cf) - base);
    }
    if (errors + 0.5 >= n) return std::max(n - errors, 0.0);
    static const boost::math::normal standard;
    const double z = boost::math::quantile(standard, 1.0 - cf);
    const double f = (errors + 0.5) / n;
    const double r =
        (f + z * z / (2.0 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4.0 * n * n))) / (1.0 + z * z / n);
    return r * n - errors;
}

/// Pessimistic error count had `dist` been a leaf.
inline double estimated_leaf_errors(const ClassDistribution& dist, double cf) {
    const double n = dist.total();
    if (n <= 0.0) return 0.0;
    const double e = dist.errors();
    return e + added_errors(n, e, cf);
}

namespace detail {

inline TreeNode grow(const Dataset& d, std::vector<std::size_t> candidates, const InductionConfig& cfg) {
    TreeNode node = TreeNode::leaf(class_distribution(d));
    const double total = node.distribution.total();
    if (node.distribution.pure() || total < 2.0 * static_cast<double>(cfg.min_instances_per_leaf) ||
        candidates.empty())
        return node;

    auto chosen = select_split(d, candidates, cfg);
    if (!chosen) return node;

    candidates.erase(std::find(candidates.begin(), candidates.end(), *chosen));
    node.attribute = *chosen;
    for (auto& part : partition_by_attribute(d, *chosen)) {
        const double w = part.total_weight();
        node.branch_weights.push_back(w);
        if (w <= 0.0)
            node.children.push_back(TreeNode::leaf(node.distribution, true));
        else
            node.children.push_back(grow(part, candidates, cfg));
    }
    return node;
}

/// Re-derives node distributions and branch weights from `data`.
inline void redistribute(TreeNode& node, const Dataset& data, const ClassDistribution& parent) {
    const double w = data.total_weight();
    if (w <= 0.0) {
        node.distribution = parent;
        node.empty = true;
    } else {
        node.distribution = class_distribution(data);
        node.empty = false;
    }
    if (node.is_leaf()) return;
    auto parts = partition_by_attribute(data, *node.attribute);
    for (std::size_t b = 0; b < parts.size(); ++b) {
        node.branch_weights[b] = parts[b].total_weight();
        redistribute(node.children[b], parts[b], node.distribution);
    }
}

/// Bottom-up subtree replacement; returns the estimated errors of the result.
inline double prune_node(TreeNode& node, double cf) {
    if (node.is_leaf()) return node.empty ? 0.0 : estimated_leaf_errors(node.distribution, cf);
    double subtree = 0.0;
    for (auto& c : node.children) subtree += prune_node(c, cf);
    const double as_leaf = node.empty ? 0.0 : estimated_leaf_errors(node.distribution, cf);
    if (as_leaf <= subtree + 0.1) {
        node.attribute.reset();
        node.children.clear();
        node.branch_weights.clear();
        return as_leaf;
    }
    return subtree;
}

}  // namespace detail

/// Collapses a subtree into a leaf whenever the leaf's pessimistic error
/// estimate is within 0.1 of the subtree's. Node distributions are first
/// recomputed by routing `training` through the tree.
inline DecisionTree prune_tree(const DecisionTree& t, const Dataset& training, const InductionConfig& cfg) {
    cfg.validate();
    if (!(training.schema() == t.schema())) throw std::invalid_argument("training data schema differs from tree");
    TreeNode root = t.root();
    const Dataset labeled = training.labeled();
    detail::redistribute(root, labeled, class_distribution(labeled));
    detail::prune_node(root, cfg.confidence_factor);
    return DecisionTree(t.schema(), std::move(root), t.laplace_smoothing());
}

/// Grows a tree on the labeled instances of `d`, then prunes it if requested.
inline DecisionTree build_tree(const Dataset& d, const InductionConfig& cfg = {}) {
    cfg.validate();
    const Dataset labeled = d.labeled();
    if (labeled.empty()) throw DataError("cannot induce a tree from a dataset without labeled instances");
    DecisionTree grown(d.schema(), detail::grow(labeled, d.schema().predictors(), cfg), cfg.laplace_smoothing);
    return cfg.pruning ? prune_tree(grown, labeled, cfg) : grown;
}

}  // namespace tendmine
