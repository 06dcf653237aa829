#pragma once

#include <string>

#include <fmt/format.h>

#include "tree.hpp"

namespace tendmine {

namespace detail {

/// Two decimals with trailing zeros trimmed, keeping at least one ("10.0", "0.67").
inline std::string format_weight(double w) {
    std::string s = fmt::format("{:.2f}", w);
    if (s.back() == '0') s.pop_back();
    return s;
}

inline std::string leaf_suffix(const DecisionTree& t, const TreeNode& n) {
    const auto& label = t.schema().class_attribute().values[n.predicted()];
    const double weight = n.weight();
    const double errors = n.empty ? 0.0 : n.distribution.errors();
    return fmt::format(": {} ({}/{})", label, format_weight(weight), format_weight(errors));
}

inline void text_lines(const DecisionTree& t, const TreeNode& n, std::size_t depth, std::string& out) {
    const auto& attr = t.schema().attribute(*n.attribute);
    for (std::size_t b = 0; b < n.children.size(); ++b) {
        const auto& child = n.children[b];
        for (std::size_t i = 0; i < depth; ++i) out += "|   ";
        out += attr.name + " = " + attr.values[b];
        if (child.is_leaf()) {
            out += leaf_suffix(t, child) + "\n";
        } else {
            out += "\n";
            text_lines(t, child, depth + 1, out);
        }
    }
}

inline std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

inline std::size_t dot_nodes(const DecisionTree& t, const TreeNode& n, std::size_t& next_id, std::string& out) {
    const std::size_t id = next_id++;
    if (n.is_leaf()) {
        const auto& label = t.schema().class_attribute().values[n.predicted()];
        out += fmt::format("  n{} [label={}, shape=box];\n", id,
                           dot_quote(label + " (" + format_weight(n.weight()) + ")"));
        return id;
    }
    const auto& attr = t.schema().attribute(*n.attribute);
    out += fmt::format("  n{} [label={}, shape=ellipse];\n", id, dot_quote(attr.name));
    for (std::size_t b = 0; b < n.children.size(); ++b) {
        const std::size_t child = dot_nodes(t, n.children[b], next_id, out);
        out += fmt::format("  n{} -> n{} [label={}];\n", id, child, dot_quote(attr.values[b]));
    }
    return id;
}

}  // namespace detail

/// One line per branch, indented with "|   " per level. Branches into leaves
/// end with ": label (weight/errors)". A single-leaf tree is one line.
inline std::string export_text(const DecisionTree& t) {
    std::string out;
    if (t.root().is_leaf()) return detail::leaf_suffix(t, t.root()) + "\n";
    detail::text_lines(t, t.root(), 0, out);
    return out;
}

/// Graphviz digraph; node ids n0, n1, ... follow pre-order.
inline std::string export_dot(const DecisionTree& t) {
    std::string out = "digraph tree {\n";
    std::size_t next_id = 0;
    detail::dot_nodes(t, t.root(), next_id, out);
    out += "}\n";
    return out;
}

}  // namespace tendmine
