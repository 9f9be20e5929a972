#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <vector>

namespace bsgs {

template <class T>
using mat_type = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using vec_type = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using scalar_t = double;
using index_t = Eigen::Index;
using mat_t = mat_type<scalar_t>;
using vec_t = vec_type<scalar_t>;

/// A set of group ids, kept sorted ascending. Ids are 0-based.
using group_set_t = std::vector<int>;

inline bool contains(const group_set_t& set, int id) {
    return std::binary_search(set.begin(), set.end(), id);
}

inline group_set_t set_union(const group_set_t& a, const group_set_t& b) {
    group_set_t out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline group_set_t set_difference(const group_set_t& a, const group_set_t& b) {
    group_set_t out;
    out.reserve(a.size());
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

/// Groups in {0..num_groups-1} that are not in `a`.
inline group_set_t set_complement(const group_set_t& a, int num_groups) {
    group_set_t out;
    out.reserve(static_cast<std::size_t>(num_groups) - a.size());
    auto it = a.begin();
    for (int j = 0; j < num_groups; ++j) {
        if (it != a.end() && *it == j) {
            ++it;
        } else {
            out.push_back(j);
        }
    }
    return out;
}

} // namespace bsgs
