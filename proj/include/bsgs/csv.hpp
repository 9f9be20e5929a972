#pragma once

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bsgs/errors.hpp"
#include "bsgs/group_structure.hpp"
#include "bsgs/types.hpp"

namespace bsgs {

/// A grouped dataset read from disk, columns reordered so groups are
/// contiguous. `column_names` follows the reordered design; `group_labels`
/// maps group ids back to the labels of the group-map file.
struct IngestedData {
    mat_t x_raw;
    vec_t y_raw;
    GroupStructure structure;
    std::vector<std::string> column_names;
    std::vector<std::string> group_labels;
};

namespace csv {

inline std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(trim(std::string_view(line).substr(start)));
            break;
        }
        fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

inline std::vector<std::vector<std::string>> read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'");
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        rows.push_back(split_row(line));
    }
    if (rows.empty()) throw parse_error("'" + path + "' is empty");
    return rows;
}

inline double parse_number(const std::string& cell, const std::string& path, std::size_t row,
                           const std::string& column) {
    double value = 0;
    const char* first = cell.data();
    const char* last = first + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw parse_error("'" + path + "': non-numeric cell \"" + cell + "\" at row " +
                          std::to_string(row) + ", column '" + column + "'");
    }
    return value;
}

} // namespace csv

/// Reads a headered numeric design CSV plus a (column_name, group_label) map,
/// reorders columns so each group is contiguous (groups sorted by label,
/// columns keeping their design order), and returns the raw arrays.
inline IngestedData ingest_csv(const std::string& design_path, const std::string& response_column,
                               const std::string& group_map_path) {
    const auto design_rows = csv::read_table(design_path);
    const std::vector<std::string>& header = design_rows.front();
    if (design_rows.size() < 2) throw parse_error("'" + design_path + "' has a header but no data rows");

    const auto map_rows = csv::read_table(group_map_path);
    std::map<std::string, std::string> label_of; // column name -> group label
    for (std::size_t r = 1; r < map_rows.size(); ++r) {
        const auto& row = map_rows[r];
        if (row.size() != 2)
            throw parse_error("'" + group_map_path + "': row " + std::to_string(r) +
                              " must have exactly 2 fields (column_name, group_label)");
        if (!label_of.emplace(row[0], row[1]).second)
            throw parse_error("'" + group_map_path + "': column '" + row[0] + "' mapped twice");
    }

    std::map<std::string, index_t> design_col; // column name -> position in file
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (!design_col.emplace(header[c], static_cast<index_t>(c)).second)
            throw parse_error("'" + design_path + "': duplicate column '" + header[c] + "'");
    }
    if (design_col.find(response_column) == design_col.end())
        throw unknown_column_error("response column '" + response_column + "' not found in '" +
                                   design_path + "'");
    if (label_of.count(response_column))
        throw unmapped_column_error("response column '" + response_column +
                                    "' must not appear in the group map");

    for (const auto& [name, label] : label_of) {
        if (design_col.find(name) == design_col.end())
            throw unknown_column_error("group map references column '" + name +
                                       "' absent from '" + design_path + "'");
    }
    for (const auto& name : header) {
        if (name != response_column && !label_of.count(name))
            throw unmapped_column_error("design column '" + name + "' is missing from the group map");
    }

    // Groups ordered by label; columns inside a group keep design-file order.
    std::map<std::string, std::vector<index_t>> by_label;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == response_column) continue;
        by_label[label_of.at(header[c])].push_back(static_cast<index_t>(c));
    }

    IngestedData data;
    const index_t n = static_cast<index_t>(design_rows.size()) - 1;
    const index_t p = static_cast<index_t>(header.size()) - 1;
    data.x_raw.resize(n, p);
    data.y_raw.resize(n);

    std::vector<std::vector<index_t>> raw_groups;
    std::vector<index_t> source_of(static_cast<std::size_t>(p));
    index_t dest = 0;
    for (const auto& [label, cols] : by_label) {
        std::vector<index_t> group;
        for (index_t src : cols) {
            source_of[static_cast<std::size_t>(dest)] = src;
            data.column_names.push_back(header[static_cast<std::size_t>(src)]);
            group.push_back(dest);
            ++dest;
        }
        raw_groups.push_back(std::move(group));
        data.group_labels.push_back(label);
    }
    data.structure = validate_groups(raw_groups, p);

    const index_t y_col = design_col.at(response_column);
    for (index_t i = 0; i < n; ++i) {
        const auto& row = design_rows[static_cast<std::size_t>(i) + 1];
        if (row.size() != header.size())
            throw parse_error("'" + design_path + "': row " + std::to_string(i + 1) + " has " +
                              std::to_string(row.size()) + " fields, expected " +
                              std::to_string(header.size()));
        data.y_raw[i] = csv::parse_number(row[static_cast<std::size_t>(y_col)], design_path,
                                          static_cast<std::size_t>(i) + 1, response_column);
        for (index_t c = 0; c < p; ++c) {
            const index_t src = source_of[static_cast<std::size_t>(c)];
            data.x_raw(i, c) = csv::parse_number(row[static_cast<std::size_t>(src)], design_path,
                                                 static_cast<std::size_t>(i) + 1,
                                                 header[static_cast<std::size_t>(src)]);
        }
    }
    return data;
}

/// Writes a design + response as the headered CSV `ingest_csv` reads.
inline void write_design_csv(const std::string& path, const mat_t& x_raw, const vec_t& y_raw,
                             const std::vector<std::string>& column_names,
                             const std::string& response_column) {
    if (x_raw.cols() != static_cast<index_t>(column_names.size()))
        throw shape_error("write_design_csv: column name count mismatch");
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write '" + path + "'");
    for (const auto& name : column_names) out << name << ',';
    out << response_column << '\n';
    char buf[40];
    for (index_t i = 0; i < x_raw.rows(); ++i) {
        for (index_t c = 0; c < x_raw.cols(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", x_raw(i, c));
            out << buf << ',';
        }
        std::snprintf(buf, sizeof(buf), "%.17g", y_raw[i]);
        out << buf << '\n';
    }
}

inline void write_group_map_csv(const std::string& path, const std::vector<std::string>& column_names,
                                const std::vector<std::string>& labels_per_column) {
    if (column_names.size() != labels_per_column.size())
        throw shape_error("write_group_map_csv: length mismatch");
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write '" + path + "'");
    out << "column,group\n";
    for (std::size_t c = 0; c < column_names.size(); ++c)
        out << column_names[c] << ',' << labels_per_column[c] << '\n';
}

} // namespace bsgs
