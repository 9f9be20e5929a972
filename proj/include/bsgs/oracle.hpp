#pragma once

#include <string>

#include "bsgs/errors.hpp"
#include "bsgs/least_squares.hpp"
#include "bsgs/types.hpp"

namespace bsgs {

struct OracleResult {
    group_set_t best_support;
    scalar_t best_loss = 0;
    long long num_candidates = 0;
};

namespace detail {

inline double binomial_approx(int n, int k) {
    double v = 1;
    for (int i = 0; i < k; ++i) v *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    return v;
}

inline bool next_combination(group_set_t& ids, int num_groups) {
    const int k = static_cast<int>(ids.size());
    for (int i = k - 1; i >= 0; --i) {
        if (ids[static_cast<std::size_t>(i)] < num_groups - k + i) {
            ++ids[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                ids[static_cast<std::size_t>(j)] = ids[static_cast<std::size_t>(j - 1)] + 1;
            return true;
        }
    }
    return false;
}

} // namespace detail

/// Exhaustive minimizer of the size-T best-subset-of-groups problem.
/// Enumerates supports in lexicographic order, so ties resolve to the
/// lexicographically smallest support.
inline OracleResult exhaustive_bsgs(const GroupedDesign& design, int target_size) {
    const int num_groups = design.structure.num_groups();
    if (target_size < 0 || target_size > num_groups)
        throw size_error("exhaustive_bsgs: T must lie in 0..J");
    if (detail::binomial_approx(num_groups, target_size) > 1e6)
        throw too_large_error("exhaustive_bsgs: C(" + std::to_string(num_groups) + "," +
                              std::to_string(target_size) + ") exceeds the 1e6 enumeration guard");

    OracleResult result;
    group_set_t support(static_cast<std::size_t>(target_size));
    for (int i = 0; i < target_size; ++i) support[static_cast<std::size_t>(i)] = i;

    bool more = true;
    while (more) {
        SupportFit fit = fit_least_squares(design, support);
        if (result.num_candidates == 0 || fit.loss < result.best_loss) {
            result.best_loss = fit.loss;
            result.best_support = support;
        }
        ++result.num_candidates;
        more = target_size > 0 && detail::next_combination(support, num_groups);
    }
    return result;
}

} // namespace bsgs
