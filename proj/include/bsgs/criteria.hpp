#pragma once

#include <cmath>
#include <string>

#include "bsgs/errors.hpp"
#include "bsgs/types.hpp"

namespace bsgs {

inline void check_loglog_domain(index_t n, const char* where) {
    // log(log n) must be positive, which needs n > e.
    if (n <= 2) throw domain_error(std::string(where) + ": n must be at least 3, got " + std::to_string(n));
}

/// Group information criterion: n log L + #{A} log J log(log n).
inline scalar_t gic_of(scalar_t loss, index_t num_predictors, index_t n, int num_groups,
                       scalar_t loss_floor) {
    check_loglog_domain(n, "gic_of");
    if (num_groups < 2) throw domain_error("gic_of: need at least 2 groups");
    const scalar_t nn = static_cast<scalar_t>(n);
    return nn * std::log(std::max(loss, loss_floor)) +
           static_cast<scalar_t>(num_predictors) * std::log(static_cast<scalar_t>(num_groups)) *
               std::log(std::log(nn));
}

/// BIC with the usual n log(RSS/n) + #{A} log n form; RSS/n equals 2L.
inline scalar_t bic_of(scalar_t loss, index_t num_predictors, index_t n, scalar_t loss_floor) {
    check_loglog_domain(n, "bic_of");
    const scalar_t nn = static_cast<scalar_t>(n);
    return nn * std::log(std::max(2.0 * loss, loss_floor)) +
           static_cast<scalar_t>(num_predictors) * std::log(nn);
}

/// Guard value for log L at a perfect fit.
inline scalar_t default_loss_floor(const vec_t& y, index_t n) {
    return 1e-12 * (y.squaredNorm() / (2.0 * static_cast<scalar_t>(n)) + 1.0);
}

/// Suggested upper bound for the model-size search: [n / (p_min log p)],
/// clamped into [1, J].
inline int default_tmax(index_t n, index_t p, index_t p_min, int num_groups) {
    if (n < 2 || p < 2) throw domain_error("default_tmax: need n >= 2 and p >= 2");
    const scalar_t raw = static_cast<scalar_t>(n) /
                         (static_cast<scalar_t>(p_min) * std::log(static_cast<scalar_t>(p)));
    const long long rounded = std::llround(raw);
    if (rounded < 1) return 1;
    if (rounded > num_groups) return num_groups;
    return static_cast<int>(rounded);
}

} // namespace bsgs
