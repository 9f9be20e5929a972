#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bsgs/errors.hpp"
#include "bsgs/group_structure.hpp"
#include "bsgs/types.hpp"

namespace bsgs {

/// A regression problem after centering and groupwise orthonormalization.
///
/// Every column of `x` and `y` has mean zero, and each group block satisfies
/// x_G^T x_G / n = I. `group_transforms[j]` maps coefficients expressed in the
/// orthonormalized basis back to the original (centered) column basis.
struct GroupedDesign {
    mat_t x;
    vec_t y;
    GroupStructure structure;
    index_t n = 0;
    vec_t column_means;
    scalar_t y_mean = 0;
    std::vector<mat_t> group_transforms;

    /// Back-map a coefficient vector from the orthonormalized basis.
    vec_t to_original(const vec_t& beta_orth) const {
        vec_t out = vec_t::Zero(structure.num_predictors());
        for (int j = 0; j < structure.num_groups(); ++j) {
            const auto& cols = structure.columns_of(j);
            const index_t pj = static_cast<index_t>(cols.size());
            vec_t block(pj);
            for (index_t k = 0; k < pj; ++k) block[k] = beta_orth[cols[static_cast<std::size_t>(k)]];
            vec_t mapped = group_transforms[static_cast<std::size_t>(j)] * block;
            for (index_t k = 0; k < pj; ++k) out[cols[static_cast<std::size_t>(k)]] = mapped[k];
        }
        return out;
    }

    /// Forward-map original-basis coefficients into the orthonormalized basis.
    vec_t to_orthonormal(const vec_t& beta_original) const {
        vec_t out = vec_t::Zero(structure.num_predictors());
        for (int j = 0; j < structure.num_groups(); ++j) {
            const auto& cols = structure.columns_of(j);
            const index_t pj = static_cast<index_t>(cols.size());
            vec_t block(pj);
            for (index_t k = 0; k < pj; ++k) block[k] = beta_original[cols[static_cast<std::size_t>(k)]];
            // group_transforms[j] is triangular; its inverse is the forward map.
            vec_t mapped = group_transforms[static_cast<std::size_t>(j)]
                               .triangularView<Eigen::Upper>()
                               .solve(block);
            for (index_t k = 0; k < pj; ++k) out[cols[static_cast<std::size_t>(k)]] = mapped[k];
        }
        return out;
    }

    /// Intercept of the fitted model in raw coordinates.
    scalar_t intercept_for(const vec_t& beta_original) const {
        return y_mean - column_means.dot(beta_original);
    }
};

/// Centers `x_raw` and `y_raw` and orthonormalizes each group block so that
/// x_G^T x_G / n = I. The per-group transform is a scaled thin QR with the
/// R diagonal forced nonnegative, which makes the result deterministic.
inline GroupedDesign preprocess(const mat_t& x_raw, const vec_t& y_raw, GroupStructure structure) {
    const index_t n = x_raw.rows();
    if (n < 2) throw shape_error("preprocess: need at least 2 samples");
    if (y_raw.size() != n) throw shape_error("preprocess: y length does not match design rows");
    if (x_raw.cols() != structure.num_predictors())
        throw shape_error("preprocess: design has " + std::to_string(x_raw.cols()) +
                          " columns but the group structure covers " +
                          std::to_string(structure.num_predictors()));

    GroupedDesign out;
    out.n = n;
    out.structure = std::move(structure);
    out.column_means = x_raw.colwise().mean();
    out.y_mean = y_raw.mean();
    out.y = y_raw.array() - out.y_mean;
    out.x.resize(n, x_raw.cols());
    out.group_transforms.resize(static_cast<std::size_t>(out.structure.num_groups()));

    const scalar_t sqrt_n = std::sqrt(static_cast<scalar_t>(n));
    mat_t block;
    for (int j = 0; j < out.structure.num_groups(); ++j) {
        const auto& cols = out.structure.columns_of(j);
        const index_t pj = static_cast<index_t>(cols.size());
        if (pj >= n) {
            // centering removes one dimension, so a block this wide cannot have
            // full column rank
            throw rank_error("group " + std::to_string(j) + " has " + std::to_string(pj) +
                             " columns but only " + std::to_string(n) + " samples");
        }
        block.resize(n, pj);
        for (index_t k = 0; k < pj; ++k) {
            const index_t c = cols[static_cast<std::size_t>(k)];
            block.col(k) = x_raw.col(c).array() - out.column_means[c];
        }

        Eigen::JacobiSVD<mat_t> svd(block);
        const vec_t& sv = svd.singularValues();
        if (sv[pj - 1] < 1e-10 * sv[0]) {
            throw rank_error("group " + std::to_string(j) +
                             " is column-rank-deficient after centering (singular value ratio " +
                             std::to_string(sv[pj - 1] / sv[0]) + ")");
        }

        Eigen::HouseholderQR<mat_t> qr(block);
        mat_t q = qr.householderQ() * mat_t::Identity(n, pj);
        mat_t r = qr.matrixQR().topRows(pj).triangularView<Eigen::Upper>();
        for (index_t k = 0; k < pj; ++k) {
            if (r(k, k) < 0) {
                r.row(k) = -r.row(k);
                q.col(k) = -q.col(k);
            }
        }

        for (index_t k = 0; k < pj; ++k) out.x.col(cols[static_cast<std::size_t>(k)]) = sqrt_n * q.col(k);
        // block = (sqrt_n q) (r / sqrt_n), so the back-map is sqrt_n r^{-1}.
        out.group_transforms[static_cast<std::size_t>(j)] =
            r.triangularView<Eigen::Upper>().solve(mat_t::Identity(pj, pj)) * sqrt_n;
    }
    return out;
}

} // namespace bsgs
