#pragma once

#include <cmath>
#include <string>

#include "bsgs/errors.hpp"
#include "bsgs/grouped_design.hpp"
#include "bsgs/types.hpp"

namespace bsgs {

/// Losses below this are flagged `near_zero` so callers can guard logarithms.
inline constexpr scalar_t kNearZeroLoss = 1e-12;

/// Least-squares solution restricted to a subset of groups.
/// `beta` lives in the orthonormalized basis and is exactly zero off the support.
struct SupportFit {
    group_set_t support;
    vec_t beta;
    vec_t residual;
    scalar_t loss = 0;
    bool near_zero = false;
};

/// L(beta) = ||y - X beta||^2 / (2n).
template <class Derived>
scalar_t loss_of(const GroupedDesign& design, const Eigen::MatrixBase<Derived>& beta) {
    return (design.y - design.x * beta).squaredNorm() / (2.0 * static_cast<scalar_t>(design.n));
}

inline scalar_t loss_of_residual(const vec_t& residual, index_t n) {
    return residual.squaredNorm() / (2.0 * static_cast<scalar_t>(n));
}

/// Exact least squares on the columns of `support`, zero elsewhere.
///
/// Solves via QR of the n-by-#{A} block. Since each group block is
/// orthonormalized, the Gram diagonal equals n; a pivot below 1e-10 of that
/// scale marks the cross-group system as singular.
inline SupportFit fit_least_squares(const GroupedDesign& design, group_set_t support) {
    const index_t n = design.n;
    for (int j : support) {
        if (j < 0 || j >= design.structure.num_groups())
            throw size_error("fit_least_squares: group id " + std::to_string(j) + " out of range");
    }

    SupportFit fit;
    fit.support = std::move(support);
    fit.beta = vec_t::Zero(design.structure.num_predictors());

    const std::vector<index_t> cols = design.structure.columns_in(fit.support);
    const index_t m = static_cast<index_t>(cols.size());
    if (m >= n) {
        throw support_too_large_error("support spans " + std::to_string(m) +
                                      " predictors but only " + std::to_string(n) +
                                      " samples are available");
    }

    if (m == 0) {
        fit.residual = design.y;
    } else {
        mat_t xa(n, m);
        for (index_t k = 0; k < m; ++k) xa.col(k) = design.x.col(cols[static_cast<std::size_t>(k)]);

        Eigen::ColPivHouseholderQR<mat_t> qr(xa);
        const auto r_diag = qr.matrixR().diagonal();
        const scalar_t pivot_floor = 1e-10 * static_cast<scalar_t>(n);
        for (index_t k = 0; k < m; ++k) {
            if (r_diag[k] * r_diag[k] < pivot_floor) {
                throw singular_support_error(
                    "support Gram matrix is numerically singular (pivot " +
                    std::to_string(r_diag[k] * r_diag[k]) + " below " + std::to_string(pivot_floor) + ")");
            }
        }

        vec_t beta_cols = qr.solve(design.y);
        for (index_t k = 0; k < m; ++k) fit.beta[cols[static_cast<std::size_t>(k)]] = beta_cols[k];
        fit.residual = design.y - xa * beta_cols;
    }

    fit.loss = loss_of_residual(fit.residual, n);
    fit.near_zero = fit.loss < kNearZeroLoss;
    return fit;
}

/// Dual variable d = X^T residual / n, zero on the support groups.
/// The support part of X^T r must already vanish by least-squares
/// orthogonality; it is checked to 1e-8 before being zeroed.
inline vec_t dual_on_inactive(const GroupedDesign& design, const SupportFit& fit) {
    if (fit.beta.size() != design.structure.num_predictors())
        throw shape_error("dual_on_inactive: fit does not match design");
    vec_t d = design.x.transpose() * fit.residual / static_cast<scalar_t>(design.n);
    for (int j : fit.support) {
        for (index_t c : design.structure.columns_of(j)) {
            if (std::abs(d[c]) > 1e-8) {
                throw numeric_error("residual is not orthogonal to active group " + std::to_string(j) +
                                    " (|X^T r|/n = " + std::to_string(std::abs(d[c])) + ")");
            }
            d[c] = 0;
        }
    }
    return d;
}

} // namespace bsgs
