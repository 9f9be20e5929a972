#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>

#include "bsgs/errors.hpp"
#include "bsgs/group_structure.hpp"
#include "bsgs/rng.hpp"
#include "bsgs/types.hpp"

namespace bsgs {

/// Cross-group correlation pattern of the latent variables.
///  - exponential: Sigma_ij = rho^|i-j|
///  - constant:    Sigma_ij = rho for i != j
///  - iid:         the design itself is drawn i.i.d. N(0,1), no latent layer
enum class CorrStructure { exponential, constant, iid };

/// Full recipe for one synthetic experiment.
struct SyntheticSpec {
    index_t n = 0;
    int num_groups = 0; // J
    index_t group_size = 1; // K
    scalar_t rho = 0;
    CorrStructure structure = CorrStructure::exponential;
    scalar_t sigma1 = 1;
    int s_star = 0;
    std::uint64_t seed = 0;
    std::optional<group_set_t> true_support;
    std::optional<scalar_t> fixed_coefficient; // overrides the centered-gamma draws
};

struct GroundTruth {
    group_set_t true_support;
    vec_t beta_star;   // original basis
    mat_t design_raw;  // n x JK
    vec_t response;
};

inline void validate_spec(const SyntheticSpec& spec) {
    if (spec.n < 2) throw size_error("synthetic spec: n must be >= 2");
    if (spec.num_groups < 1) throw size_error("synthetic spec: J must be >= 1");
    if (spec.group_size < 1) throw size_error("synthetic spec: K must be >= 1");
    if (spec.s_star < 0 || spec.s_star > spec.num_groups)
        throw size_error("synthetic spec: s* must lie in 0..J");
    if (!(spec.rho >= 0 && spec.rho <= 1)) throw domain_error("synthetic spec: rho must be in [0,1]");
    if (!(spec.sigma1 >= 0)) throw domain_error("synthetic spec: sigma1 must be >= 0");
    if (spec.true_support) {
        if (static_cast<int>(spec.true_support->size()) != spec.s_star)
            throw size_error("synthetic spec: explicit support size differs from s*");
        for (int j : *spec.true_support)
            if (j < 0 || j >= spec.num_groups) throw size_error("synthetic spec: support id out of range");
    }
}

inline GroupStructure group_structure_of(const SyntheticSpec& spec) {
    return contiguous_groups(spec.num_groups, spec.group_size);
}

namespace detail {

inline mat_t draw_normal_matrix(RandomStream& stream, index_t rows, index_t cols) {
    mat_t out(rows, cols);
    for (index_t i = 0; i < rows; ++i)
        for (index_t j = 0; j < cols; ++j) out(i, j) = stream.next_normal();
    return out;
}

} // namespace detail

/// Latent n-by-J matrix with rows i.i.d. MVN(0, Sigma), built by applying the
/// Cholesky factor of Sigma to standard normal draws. For the iid structure
/// this is simply an i.i.d. standard normal matrix.
inline mat_t gen_latent(const SyntheticSpec& spec) {
    validate_spec(spec);
    RandomStream stream = RandomStream::substream(spec.seed, "latent");
    const index_t num_groups = spec.num_groups;
    mat_t z = detail::draw_normal_matrix(stream, spec.n, num_groups);
    if (spec.structure == CorrStructure::iid || spec.rho == 0) return z;

    mat_t sigma(num_groups, num_groups);
    for (index_t i = 0; i < num_groups; ++i) {
        for (index_t j = 0; j < num_groups; ++j) {
            if (spec.structure == CorrStructure::exponential) {
                sigma(i, j) = std::pow(spec.rho, std::abs(static_cast<double>(i - j)));
            } else {
                sigma(i, j) = i == j ? 1.0 : spec.rho;
            }
        }
    }
    Eigen::LLT<mat_t> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw cholesky_error("latent covariance is not positive definite (rho=" +
                             std::to_string(spec.rho) + "); rho=1 makes the groups indistinguishable");
    }
    return z * mat_t(llt.matrixL()).transpose();
}

/// Grouped design: column (j,k) is (latent_j + R_jk) / sqrt(2) with R i.i.d.
/// standard normal, giving unit-variance columns with within-group
/// correlation 1/2. The iid structure draws all JK columns independently.
inline mat_t gen_design(const SyntheticSpec& spec, const mat_t& latent) {
    validate_spec(spec);
    if (latent.rows() != spec.n || latent.cols() != spec.num_groups)
        throw shape_error("gen_design: latent matrix does not match spec");
    const index_t p = static_cast<index_t>(spec.num_groups) * spec.group_size;
    if (spec.structure == CorrStructure::iid) {
        // No latent layer: every design entry comes straight from the latent stream.
        RandomStream stream = RandomStream::substream(spec.seed, "latent");
        return detail::draw_normal_matrix(stream, spec.n, p);
    }

    RandomStream stream = RandomStream::substream(spec.seed, "noise");
    const scalar_t inv_sqrt2 = 1.0 / std::sqrt(2.0);
    mat_t x(spec.n, p);
    for (index_t c = 0; c < p; ++c) {
        const index_t j = c / spec.group_size;
        for (index_t i = 0; i < spec.n; ++i) x(i, c) = (latent(i, j) + stream.next_normal()) * inv_sqrt2;
    }
    return x;
}

/// True support and coefficients. Each relevant group gets K+1 standard
/// normal draws gamma and coefficients gamma_i - mean(gamma), so the entries
/// are centered; a fixed_coefficient spec overrides the draws entirely.
inline std::pair<group_set_t, vec_t> gen_beta(const SyntheticSpec& spec) {
    validate_spec(spec);
    group_set_t support;
    if (spec.true_support) {
        support = *spec.true_support;
        std::sort(support.begin(), support.end());
    } else {
        RandomStream stream = RandomStream::substream(spec.seed, "support");
        std::vector<int> ids(static_cast<std::size_t>(spec.num_groups));
        for (int j = 0; j < spec.num_groups; ++j) ids[static_cast<std::size_t>(j)] = j;
        for (int i = 0; i < spec.s_star; ++i) {
            const auto pick = i + static_cast<int>(stream.next_below(
                                      static_cast<std::uint64_t>(spec.num_groups - i)));
            std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(pick)]);
        }
        support.assign(ids.begin(), ids.begin() + spec.s_star);
        std::sort(support.begin(), support.end());
    }

    RandomStream gamma_stream = RandomStream::substream(spec.seed, "gamma");
    vec_t beta = vec_t::Zero(static_cast<index_t>(spec.num_groups) * spec.group_size);
    for (int j : support) {
        if (spec.fixed_coefficient) {
            for (index_t k = 0; k < spec.group_size; ++k)
                beta[static_cast<index_t>(j) * spec.group_size + k] = *spec.fixed_coefficient;
            continue;
        }
        vec_t gamma(spec.group_size + 1);
        for (index_t i = 0; i < gamma.size(); ++i) gamma[i] = gamma_stream.next_normal();
        const scalar_t mean = gamma.mean();
        for (index_t k = 0; k < spec.group_size; ++k)
            beta[static_cast<index_t>(j) * spec.group_size + k] = gamma[k] - mean;
    }
    return {std::move(support), std::move(beta)};
}

/// y = X beta* + epsilon with epsilon ~ N(0, sigma1^2) from `stream`.
inline vec_t gen_response(const mat_t& design_raw, const vec_t& beta_star, scalar_t sigma1,
                          RandomStream& stream) {
    if (design_raw.cols() != beta_star.size())
        throw shape_error("gen_response: coefficient length does not match design");
    vec_t y = design_raw * beta_star;
    if (sigma1 > 0)
        for (index_t i = 0; i < y.size(); ++i) y[i] += sigma1 * stream.next_normal();
    return y;
}

/// Full dataset for one experiment; a pure function of (spec, seed).
inline GroundTruth make_dataset(const SyntheticSpec& spec) {
    validate_spec(spec);
    GroundTruth truth;
    if (spec.structure == CorrStructure::iid) {
        truth.design_raw = gen_design(spec, mat_t::Zero(spec.n, spec.num_groups));
    } else {
        truth.design_raw = gen_design(spec, gen_latent(spec));
    }
    auto [support, beta] = gen_beta(spec);
    truth.true_support = std::move(support);
    truth.beta_star = std::move(beta);
    RandomStream eps = RandomStream::substream(spec.seed, "epsilon");
    truth.response = gen_response(truth.design_raw, truth.beta_star, spec.sigma1, eps);
    return truth;
}

} // namespace bsgs
