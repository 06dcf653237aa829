#pragma once

// ARFF subset and headered-CSV readers for nominal data, plus an ARFF writer.
//
// Supported ARFF: `%` comments, @relation, @attribute <name> {v1,...}, @data,
// comma-separated rows, `?` for missing. Directives are case-insensitive and
// all value tokens are folded to lower case.

#include <fstream>
#include <istream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dataset.hpp"

namespace tendmine {

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::string_view unquote(std::string_view s) {
    if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front())
        return s.substr(1, s.size() - 2);
    return s;
}

inline std::vector<std::string> split_cells(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        const auto piece = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        out.emplace_back(unquote(trim(piece)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline bool starts_with_ci(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && fold_case(s.substr(0, prefix.size())) == prefix;
}

/// Splits text into lines, keeping 1-based numbering.
inline std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) out.push_back(text.substr(start));
            break;
        }
        out.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return out;
}

inline std::string slurp(std::istream& in) {
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline Cell parse_cell(const AttributeSpec& attr, const std::string& token, std::size_t line) {
    if (token == "?") return std::nullopt;
    if (token.empty()) throw ParseError(line, "empty cell for attribute '" + attr.name + "'");
    auto idx = attr.index_of(token);
    if (!idx) throw ParseError(line, "unknown value '" + token + "' for attribute '" + attr.name + "'");
    return idx;
}

/// Parses one row against `schema`. A row one cell short is accepted when
/// `allow_missing_class` is set; the class cell is then MISSING.
inline Instance parse_row(const DatasetSchema& schema, std::string_view line, std::size_t line_no,
                          bool allow_missing_class) {
    auto cells = split_cells(line);
    const std::size_t n = schema.size();
    Instance inst;
    inst.values.resize(n);
    if (cells.size() == n) {
        for (std::size_t a = 0; a < n; ++a) inst.values[a] = parse_cell(schema.attribute(a), cells[a], line_no);
    } else if (allow_missing_class && cells.size() + 1 == n) {
        std::size_t k = 0;
        for (std::size_t a = 0; a < n; ++a) {
            if (a == schema.class_index()) continue;
            inst.values[a] = parse_cell(schema.attribute(a), cells[k++], line_no);
        }
    } else {
        throw ParseError(line_no, "row has " + std::to_string(cells.size()) + " cells, expected " +
                                      std::to_string(n));
    }
    return inst;
}

struct ArffHeader {
    DatasetSchema schema;
    std::size_t data_line = 0;  // index into lines of the first line after @data
};

inline ArffHeader parse_arff_header(const std::vector<std::string_view>& lines) {
    std::string relation;
    std::vector<AttributeSpec> attrs;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        const auto line = trim(lines[i]);
        if (line.empty() || line.front() == '%') continue;
        if (starts_with_ci(line, "@relation")) {
            relation = std::string(unquote(trim(line.substr(9))));
        } else if (starts_with_ci(line, "@attribute")) {
            auto rest = trim(line.substr(10));
            std::string name;
            if (!rest.empty() && (rest.front() == '\'' || rest.front() == '"')) {
                auto close = rest.find(rest.front(), 1);
                if (close == std::string_view::npos) throw ParseError(line_no, "unterminated attribute name");
                name = std::string(rest.substr(1, close - 1));
                rest = trim(rest.substr(close + 1));
            } else {
                auto sp = rest.find_first_of(" \t");
                if (sp == std::string_view::npos) throw ParseError(line_no, "attribute declaration lacks a type");
                name = std::string(rest.substr(0, sp));
                rest = trim(rest.substr(sp));
            }
            if (rest.empty() || rest.front() != '{') {
                throw UnsupportedFeatureError(line_no, "attribute '" + name + "' has type '" + std::string(rest) +
                                                           "'; only nominal attributes are supported");
            }
            if (rest.back() != '}') throw ParseError(line_no, "unterminated value list for '" + name + "'");
            AttributeSpec attr{name, {}};
            std::set<std::string> seen;
            for (auto& tok : split_cells(rest.substr(1, rest.size() - 2))) {
                if (tok.empty()) throw ParseError(line_no, "empty value in declaration of '" + name + "'");
                auto folded = fold_case(tok);
                if (!seen.insert(folded).second)
                    throw ParseError(line_no, "duplicate value '" + folded + "' in '" + name + "'");
                attr.values.push_back(std::move(folded));
            }
            for (auto& other : attrs)
                if (other.name == name) throw ParseError(line_no, "duplicate attribute '" + name + "'");
            attrs.push_back(std::move(attr));
        } else if (starts_with_ci(line, "@data")) {
            if (attrs.empty()) throw ParseError(line_no, "@data before any @attribute");
            const std::size_t class_index = attrs.size() - 1;
            return {DatasetSchema(relation, std::move(attrs), class_index), i + 1};
        } else {
            throw ParseError(line_no, "unexpected line in header: '" + std::string(line) + "'");
        }
    }
    throw ParseError(lines.size(), "missing @data section");
}

inline bool is_data_line(std::string_view line) { return !line.empty() && line.front() != '%'; }

}  // namespace detail

/// Last declared attribute becomes the class.
inline Dataset parse_arff(std::string_view text) {
    const auto lines = detail::lines_of(text);
    auto header = detail::parse_arff_header(lines);
    std::vector<Instance> rows;
    for (std::size_t i = header.data_line; i < lines.size(); ++i) {
        const auto line = detail::trim(lines[i]);
        if (!detail::is_data_line(line)) continue;
        if (line.front() == '{') throw UnsupportedFeatureError(i + 1, "sparse ARFF rows are not supported");
        rows.push_back(detail::parse_row(header.schema, line, i + 1, false));
    }
    return Dataset(std::move(header.schema), std::move(rows));
}

inline Dataset parse_arff(std::istream& in) { return parse_arff(detail::slurp(in)); }

/// Header row names the columns; each column's value list is the sorted set
/// of distinct folded tokens seen in it.
inline Dataset parse_csv(std::string_view text, std::string_view class_column) {
    const auto lines = detail::lines_of(text);
    std::size_t first = 0;
    while (first < lines.size() && detail::trim(lines[first]).empty()) ++first;
    if (first == lines.size()) throw ParseError(1, "empty CSV input");

    std::vector<std::string> names = detail::split_cells(detail::trim(lines[first]));
    {
        std::set<std::string> seen;
        for (auto& n : names) {
            if (n.empty()) throw ParseError(first + 1, "empty column name");
            if (!seen.insert(n).second) throw ParseError(first + 1, "duplicate column '" + n + "'");
        }
    }
    std::size_t class_index = names.size();
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == class_column) class_index = i;
    if (class_index == names.size())
        throw DataError("class column '" + std::string(class_column) + "' not in CSV header");

    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> row_lines;
    std::vector<std::set<std::string>> distinct(names.size());
    for (std::size_t i = first + 1; i < lines.size(); ++i) {
        const auto line = detail::trim(lines[i]);
        if (line.empty()) continue;
        auto cells = detail::split_cells(line);
        if (cells.size() != names.size())
            throw ParseError(i + 1, "row has " + std::to_string(cells.size()) + " cells, expected " +
                                        std::to_string(names.size()));
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (cells[c].empty()) throw ParseError(i + 1, "empty cell in column '" + names[c] + "'");
            cells[c] = cells[c] == "?" ? cells[c] : fold_case(cells[c]);
            if (cells[c] != "?") distinct[c].insert(cells[c]);
        }
        rows.push_back(std::move(cells));
        row_lines.push_back(i + 1);
    }

    std::vector<AttributeSpec> attrs;
    for (std::size_t c = 0; c < names.size(); ++c) {
        if (distinct[c].empty()) throw DataError("column '" + names[c] + "' has no observed values");
        attrs.push_back({names[c], {distinct[c].begin(), distinct[c].end()}});
    }
    DatasetSchema schema("", std::move(attrs), class_index);

    std::vector<Instance> instances;
    instances.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        Instance inst;
        for (std::size_t c = 0; c < names.size(); ++c)
            inst.values.push_back(detail::parse_cell(schema.attribute(c), rows[r][c], row_lines[r]));
        instances.push_back(std::move(inst));
    }
    return Dataset(std::move(schema), std::move(instances));
}

inline Dataset parse_csv(std::istream& in, std::string_view class_column) {
    return parse_csv(detail::slurp(in), class_column);
}

/// ARFF text that parse_arff maps back to an equal Dataset when the class is
/// the last attribute. Instance weights are not representable and are dropped.
inline std::string to_arff(const Dataset& d) {
    std::ostringstream out;
    const auto& schema = d.schema();
    out << "@relation " << (schema.relation().empty() ? "data" : schema.relation()) << "\n\n";
    for (auto& attr : schema.attributes()) {
        out << "@attribute " << attr.name << " {";
        for (std::size_t v = 0; v < attr.size(); ++v) out << (v ? "," : "") << attr.values[v];
        out << "}\n";
    }
    out << "\n@data\n";
    for (auto& inst : d.instances()) {
        for (std::size_t a = 0; a < inst.values.size(); ++a) {
            if (a) out << ',';
            const auto& cell = inst.values[a];
            out << (cell ? schema.attribute(a).values[*cell] : std::string("?"));
        }
        out << '\n';
    }
    return out.str();
}

enum class InputFormat { arff, csv };

inline InputFormat guess_format(std::string_view path, std::string_view text) {
    auto dot = path.rfind('.');
    if (dot != std::string_view::npos) {
        auto ext = fold_case(path.substr(dot + 1));
        if (ext == "csv") return InputFormat::csv;
        if (ext == "arff") return InputFormat::arff;
    }
    for (auto line : detail::lines_of(text)) {
        line = detail::trim(line);
        if (line.empty() || line.front() == '%') continue;
        return line.front() == '@' ? InputFormat::arff : InputFormat::csv;
    }
    return InputFormat::arff;
}

/// Parses `text` as a dataset. `class_name`, when given, selects the class
/// attribute; otherwise the last attribute or column is the class.
inline Dataset parse_dataset(std::string_view text, InputFormat format, std::optional<std::string_view> class_name) {
    if (format == InputFormat::csv) {
        if (class_name) return parse_csv(text, *class_name);
        for (auto line : detail::lines_of(text)) {
            if (detail::trim(line).empty()) continue;
            const auto names = detail::split_cells(detail::trim(line));
            return parse_csv(text, names.back());
        }
        throw ParseError(1, "empty CSV input");
    }
    Dataset d = parse_arff(text);
    if (!class_name) return d;
    auto idx = d.schema().index_of(*class_name);
    if (!idx) throw DataError("class attribute '" + std::string(*class_name) + "' not in schema");
    return Dataset(d.schema().with_class(*idx), {d.instances().begin(), d.instances().end()});
}

/// Reads rows against an existing schema (used for prediction). ARFF input's
/// header is skipped and rows are matched by position; CSV columns are matched
/// by header name. The class cell may be present (ignored by callers) or absent.
inline Dataset parse_rows(std::string_view text, InputFormat format, const DatasetSchema& schema) {
    const auto lines = detail::lines_of(text);
    std::vector<Instance> rows;
    if (format == InputFormat::arff) {
        std::size_t i = 0;
        for (; i < lines.size(); ++i)
            if (detail::starts_with_ci(detail::trim(lines[i]), "@data")) break;
        if (i == lines.size()) throw ParseError(lines.size(), "missing @data section");
        for (++i; i < lines.size(); ++i) {
            const auto line = detail::trim(lines[i]);
            if (!detail::is_data_line(line)) continue;
            rows.push_back(detail::parse_row(schema, line, i + 1, true));
        }
        return Dataset(schema, std::move(rows));
    }

    std::size_t first = 0;
    while (first < lines.size() && detail::trim(lines[first]).empty()) ++first;
    if (first == lines.size()) throw ParseError(1, "empty CSV input");
    auto names = detail::split_cells(detail::trim(lines[first]));
    std::vector<std::size_t> column_to_attr;
    std::vector<bool> covered(schema.size(), false);
    for (auto& n : names) {
        auto idx = schema.index_of(n);
        if (!idx) throw ParseError(first + 1, "column '" + n + "' not in model schema");
        if (covered[*idx]) throw ParseError(first + 1, "duplicate column '" + n + "'");
        covered[*idx] = true;
        column_to_attr.push_back(*idx);
    }
    for (std::size_t a = 0; a < schema.size(); ++a)
        if (!covered[a] && a != schema.class_index())
            throw ParseError(first + 1, "column '" + schema.attribute(a).name + "' missing");
    for (std::size_t i = first + 1; i < lines.size(); ++i) {
        const auto line = detail::trim(lines[i]);
        if (line.empty()) continue;
        auto cells = detail::split_cells(line);
        if (cells.size() != names.size())
            throw ParseError(i + 1, "row has " + std::to_string(cells.size()) + " cells, expected " +
                                        std::to_string(names.size()));
        Instance inst;
        inst.values.resize(schema.size());
        for (std::size_t c = 0; c < cells.size(); ++c)
            inst.values[column_to_attr[c]] = detail::parse_cell(schema.attribute(column_to_attr[c]), cells[c], i + 1);
        rows.push_back(std::move(inst));
    }
    return Dataset(schema, std::move(rows));
}

}  // namespace tendmine
