#pragma once

#include <numeric>
#include <sstream>
#include <vector>

#include "bsgs/errors.hpp"
#include "bsgs/types.hpp"

namespace bsgs {

/// A partition of the predictor columns 0..p-1 into disjoint groups.
/// Column indices inside each group are kept sorted ascending.
class GroupStructure {
public:
    GroupStructure() = default;

    int num_groups() const { return static_cast<int>(groups_.size()); }
    index_t num_predictors() const { return p_; }
    index_t min_group_size() const { return p_min_; }
    index_t max_group_size() const { return p_max_; }

    const std::vector<index_t>& columns_of(int group) const { return groups_[static_cast<std::size_t>(group)]; }
    index_t group_size(int group) const { return static_cast<index_t>(groups_[static_cast<std::size_t>(group)].size()); }

    /// #{A}: total predictor count inside a subset of groups.
    index_t predictors_in(const group_set_t& subset) const {
        index_t total = 0;
        for (int j : subset) total += group_size(j);
        return total;
    }

    /// Column indices of a subset of groups, concatenated in group-id order.
    std::vector<index_t> columns_in(const group_set_t& subset) const {
        std::vector<index_t> cols;
        cols.reserve(static_cast<std::size_t>(predictors_in(subset)));
        for (int j : subset)
            for (index_t c : columns_of(j)) cols.push_back(c);
        return cols;
    }

    friend GroupStructure validate_groups(const std::vector<std::vector<index_t>>& raw_groups, index_t p);

private:
    std::vector<std::vector<index_t>> groups_;
    index_t p_ = 0;
    index_t p_min_ = 0;
    index_t p_max_ = 0;
};

/// Checks that `raw_groups` is a partition of {0..p-1} and builds the structure.
inline GroupStructure validate_groups(const std::vector<std::vector<index_t>>& raw_groups, index_t p) {
    if (p < 1) throw shape_error("validate_groups: p must be >= 1");
    if (raw_groups.empty()) throw shape_error("validate_groups: no groups given");

    GroupStructure out;
    out.groups_.reserve(raw_groups.size());
    std::vector<int> owner(static_cast<std::size_t>(p), -1);

    for (std::size_t g = 0; g < raw_groups.size(); ++g) {
        if (raw_groups[g].empty()) {
            throw empty_group_error("group " + std::to_string(g) + " is empty");
        }
        std::vector<index_t> cols = raw_groups[g];
        std::sort(cols.begin(), cols.end());
        for (index_t c : cols) {
            if (c < 0 || c >= p) {
                throw coverage_error("group " + std::to_string(g) + " references column " +
                                     std::to_string(c) + " outside 0.." + std::to_string(p - 1));
            }
            if (owner[static_cast<std::size_t>(c)] >= 0) {
                std::ostringstream msg;
                msg << "column " << c << " appears in groups " << owner[static_cast<std::size_t>(c)]
                    << " and " << g;
                throw overlap_error(msg.str());
            }
            owner[static_cast<std::size_t>(c)] = static_cast<int>(g);
        }
        out.groups_.push_back(std::move(cols));
    }

    for (index_t c = 0; c < p; ++c) {
        if (owner[static_cast<std::size_t>(c)] < 0) {
            throw coverage_error("column " + std::to_string(c) + " is not covered by any group");
        }
    }

    out.p_ = p;
    out.p_min_ = out.p_max_ = out.group_size(0);
    for (int j = 1; j < out.num_groups(); ++j) {
        out.p_min_ = std::min(out.p_min_, out.group_size(j));
        out.p_max_ = std::max(out.p_max_, out.group_size(j));
    }
    return out;
}

/// J groups of K contiguous columns each, the layout used by the synthetic designs.
inline GroupStructure contiguous_groups(int num_groups, index_t group_size) {
    std::vector<std::vector<index_t>> raw(static_cast<std::size_t>(num_groups));
    for (int j = 0; j < num_groups; ++j) {
        raw[static_cast<std::size_t>(j)].resize(static_cast<std::size_t>(group_size));
        std::iota(raw[static_cast<std::size_t>(j)].begin(), raw[static_cast<std::size_t>(j)].end(),
                  static_cast<index_t>(j) * group_size);
    }
    return validate_groups(raw, static_cast<index_t>(num_groups) * group_size);
}

} // namespace bsgs
