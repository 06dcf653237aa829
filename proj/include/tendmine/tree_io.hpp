#pragma once

// Line-based tree file:
//
//   tendmine-tree v1
//   relation <name>
//   attribute <name> <value>...        one line per schema attribute
//   class <index>
//   smoothing laplace|none
//   nodes <count>
//   internal <attr> <class weights...> | <branch weights...>
//   leaf <empty 0|1> <class weights...>
//
// Nodes are listed in pre-order. Tokens escape '%', control characters,
// spaces and non-ASCII bytes as %XX; a lone '%' is the empty string.
// Weights use the shortest round-trip decimal form.

#include <cstdlib>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "io.hpp"
#include "tree.hpp"

namespace tendmine {

inline constexpr std::string_view kTreeMagic = "tendmine-tree v1";

namespace detail {

inline std::string escape_token(std::string_view s) {
    if (s.empty()) return "%";
    std::string out;
    for (unsigned char c : s) {
        if (c <= ' ' || c > '~' || c == '%')
            out += fmt::format("%{:02X}", static_cast<unsigned>(c));
        else
            out += static_cast<char>(c);
    }
    return out;
}

inline std::string unescape_token(std::string_view s, std::size_t line) {
    if (s == "%") return {};
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '%') {
            out += s[i];
            continue;
        }
        if (i + 2 >= s.size()) throw ParseError(line, "truncated escape");
        const std::string hex(s.substr(i + 1, 2));
        char* end = nullptr;
        const long v = std::strtol(hex.c_str(), &end, 16);
        if (end != hex.c_str() + 2) throw ParseError(line, "bad escape '%" + hex + "'");
        out += static_cast<char>(v);
        i += 2;
    }
    return out;
}

inline std::vector<std::string> words(std::string_view line) {
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

inline double parse_number(const std::string& s, std::size_t line) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw ParseError(line, "expected a number, got '" + s + "'");
    return v;
}

inline std::size_t parse_index(const std::string& s, std::size_t line) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || s.front() == '-' || end != s.c_str() + s.size())
        throw ParseError(line, "expected a non-negative integer, got '" + s + "'");
    return static_cast<std::size_t>(v);
}

inline void write_weights(std::string& out, const std::vector<double>& ws) {
    for (double w : ws) out += fmt::format(" {}", w);
}

inline void write_node(const TreeNode& n, std::string& out) {
    if (n.is_leaf()) {
        out += fmt::format("leaf {}", n.empty ? 1 : 0);
        write_weights(out, n.distribution.weights);
        out += '\n';
        return;
    }
    out += fmt::format("internal {}", *n.attribute);
    write_weights(out, n.distribution.weights);
    out += " |";
    write_weights(out, n.branch_weights);
    out += '\n';
    for (auto& c : n.children) write_node(c, out);
}

class TreeReader {
public:
    TreeReader(std::vector<std::string_view> lines, const DatasetSchema& schema, std::size_t first)
        : lines_(std::move(lines)), schema_(schema), next_(first) {}

    TreeNode read_node() {
        if (next_ >= lines_.size()) throw ParseError(lines_.size(), "unexpected end of tree file");
        const std::size_t line_no = next_ + 1;
        const auto w = words(lines_[next_++]);
        const std::size_t k = schema_.num_classes();
        if (w.empty()) throw ParseError(line_no, "blank node line");
        TreeNode node;
        if (w[0] == "leaf") {
            if (w.size() != 2 + k) throw ParseError(line_no, "leaf line needs an empty flag and " + std::to_string(k) + " weights");
            node.empty = w[1] == "1";
            if (w[1] != "0" && w[1] != "1") throw ParseError(line_no, "empty flag must be 0 or 1");
            node.distribution = ClassDistribution(k);
            for (std::size_t c = 0; c < k; ++c) node.distribution.weights[c] = parse_number(w[2 + c], line_no);
            return node;
        }
        if (w[0] != "internal") throw ParseError(line_no, "expected 'leaf' or 'internal'");
        if (w.size() < 3 + k) throw ParseError(line_no, "internal line too short");
        const std::size_t a = parse_index(w[1], line_no);
        if (a >= schema_.size() || a == schema_.class_index())
            throw ParseError(line_no, "attribute index " + w[1] + " is not a predictor");
        const std::size_t m = schema_.attribute(a).size();
        if (w.size() != 3 + k + m || w[2 + k] != "|")
            throw ParseError(line_no, "internal line needs " + std::to_string(k) + " class weights, '|', and " +
                                          std::to_string(m) + " branch weights");
        node.attribute = a;
        node.distribution = ClassDistribution(k);
        for (std::size_t c = 0; c < k; ++c) node.distribution.weights[c] = parse_number(w[2 + c], line_no);
        for (std::size_t b = 0; b < m; ++b) node.branch_weights.push_back(parse_number(w[3 + k + b], line_no));
        for (std::size_t b = 0; b < m; ++b) node.children.push_back(read_node());
        return node;
    }

    std::size_t consumed() const noexcept { return next_; }

private:
    std::vector<std::string_view> lines_;
    const DatasetSchema& schema_;
    std::size_t next_;
};

}  // namespace detail

inline std::string write_tree(const DecisionTree& t) {
    std::string out(kTreeMagic);
    out += '\n';
    const auto& s = t.schema();
    out += "relation " + detail::escape_token(s.relation()) + "\n";
    for (auto& attr : s.attributes()) {
        out += "attribute " + detail::escape_token(attr.name);
        for (auto& v : attr.values) out += " " + detail::escape_token(v);
        out += '\n';
    }
    out += fmt::format("class {}\n", s.class_index());
    out += fmt::format("smoothing {}\n", t.laplace_smoothing() ? "laplace" : "none");
    out += fmt::format("nodes {}\n", t.stats().node_count);
    detail::write_node(t.root(), out);
    return out;
}

inline bool looks_like_tree(std::string_view text) { return text.substr(0, kTreeMagic.size()) == kTreeMagic; }

inline DecisionTree read_tree(std::string_view text) {
    auto lines = detail::lines_of(text);
    for (auto& l : lines) l = detail::trim(l);
    std::size_t i = 0;
    auto expect = [&](std::string_view keyword) {
        if (i >= lines.size()) throw ParseError(lines.size(), "expected '" + std::string(keyword) + "'");
        auto w = detail::words(lines[i]);
        if (w.empty() || w[0] != keyword)
            throw ParseError(i + 1, "expected '" + std::string(keyword) + "'");
        ++i;
        return w;
    };
    if (lines.empty() || lines[0] != kTreeMagic) throw ParseError(1, "missing 'tendmine-tree v1' header");
    ++i;

    auto rel = expect("relation");
    if (rel.size() != 2) throw ParseError(i, "relation line needs one name");
    const std::string relation = detail::unescape_token(rel[1], i);

    std::vector<AttributeSpec> attrs;
    while (i < lines.size() && detail::words(lines[i]).size() > 0 && detail::words(lines[i])[0] == "attribute") {
        auto w = detail::words(lines[i]);
        ++i;
        if (w.size() < 3) throw ParseError(i, "attribute line needs a name and values");
        AttributeSpec attr{detail::unescape_token(w[1], i), {}};
        for (std::size_t v = 2; v < w.size(); ++v) attr.values.push_back(detail::unescape_token(w[v], i));
        attrs.push_back(std::move(attr));
    }
    auto cls = expect("class");
    if (cls.size() != 2) throw ParseError(i, "class line needs one index");
    const std::size_t class_index = detail::parse_index(cls[1], i);

    auto smooth = expect("smoothing");
    if (smooth.size() != 2 || (smooth[1] != "laplace" && smooth[1] != "none"))
        throw ParseError(i, "smoothing must be 'laplace' or 'none'");
    const bool laplace = smooth[1] == "laplace";

    auto count = expect("nodes");
    if (count.size() != 2) throw ParseError(i, "nodes line needs a count");
    const std::size_t node_count = detail::parse_index(count[1], i);

    DatasetSchema schema = [&] {
        try {
            return DatasetSchema(relation, std::move(attrs), class_index);
        } catch (const std::invalid_argument& e) {
            throw ParseError(i, std::string("invalid schema: ") + e.what());
        }
    }();

    detail::TreeReader reader(lines, schema, i);
    TreeNode root = reader.read_node();
    for (std::size_t j = reader.consumed(); j < lines.size(); ++j)
        if (!lines[j].empty()) throw ParseError(j + 1, "trailing content after tree");

    try {
        DecisionTree tree(std::move(schema), std::move(root), laplace);
        if (tree.stats().node_count != node_count)
            throw ParseError(reader.consumed(), "node count " + std::to_string(tree.stats().node_count) +
                                                    " does not match header " + std::to_string(node_count));
        return tree;
    } catch (const std::invalid_argument& e) {
        throw ParseError(reader.consumed(), std::string("invalid tree: ") + e.what());
    }
}

}  // namespace tendmine
