#pragma once

#include <cmath>
#include <optional>

#include "bsgs/errors.hpp"
#include "bsgs/splice.hpp"
#include "bsgs/types.hpp"

namespace bsgs {

struct Confusion {
    int tp = 0;
    int fp = 0;
    int tn = 0;
    int fn = 0;
};

struct Rates {
    std::optional<scalar_t> tpr; // missing when there are no true groups
    std::optional<scalar_t> fpr; // missing when every group is true
    scalar_t mcc = 0;            // 0 whenever a factor under the root vanishes
};

/// Selection quality of one replicate.
struct MetricsRecord {
    Confusion counts;
    Rates rates;
    int gse = 0;       // |A_hat| - |A*|
    scalar_t reee = 0; // relative estimation error in the original basis
    std::optional<scalar_t> pe;
};

inline Confusion confusion_of(const group_set_t& selected, const group_set_t& truth, int num_groups) {
    Confusion c;
    for (int j : selected) {
        if (contains(truth, j)) ++c.tp;
        else ++c.fp;
    }
    c.fn = static_cast<int>(truth.size()) - c.tp;
    c.tn = num_groups - c.tp - c.fp - c.fn;
    if (c.fn < 0 || c.tn < 0) throw size_error("confusion_of: sets are not subsets of 1..J");
    return c;
}

inline Rates rates_of(const Confusion& c) {
    Rates r;
    if (c.tp + c.fn > 0) r.tpr = static_cast<scalar_t>(c.tp) / static_cast<scalar_t>(c.tp + c.fn);
    if (c.fp + c.tn > 0) r.fpr = static_cast<scalar_t>(c.fp) / static_cast<scalar_t>(c.fp + c.tn);
    const scalar_t denom = static_cast<scalar_t>(c.tp + c.fp) * static_cast<scalar_t>(c.tp + c.fn) *
                           static_cast<scalar_t>(c.tn + c.fp) * static_cast<scalar_t>(c.tn + c.fn);
    if (denom > 0) {
        r.mcc = (static_cast<scalar_t>(c.tp) * static_cast<scalar_t>(c.tn) -
                 static_cast<scalar_t>(c.fp) * static_cast<scalar_t>(c.fn)) /
                std::sqrt(denom);
    }
    return r;
}

inline int gse_of(const group_set_t& selected, const group_set_t& truth) {
    return static_cast<int>(selected.size()) - static_cast<int>(truth.size());
}

/// ||beta_hat - beta*|| / ||beta*||, both vectors in the original basis.
inline scalar_t reee_of(const vec_t& beta_hat, const vec_t& beta_star) {
    if (beta_hat.size() != beta_star.size()) throw shape_error("reee_of: length mismatch");
    const scalar_t truth_norm = beta_star.norm();
    if (truth_norm == 0) throw zero_truth_error("reee_of: beta* is identically zero");
    return (beta_hat - beta_star).norm() / truth_norm;
}

/// Mean squared error of the fitted model on held-out rows.
inline scalar_t prediction_error(const FitReport& fit, const mat_t& x_holdout, const vec_t& y_holdout) {
    if (x_holdout.cols() != fit.beta_original.size())
        throw schema_error("prediction_error: holdout has " + std::to_string(x_holdout.cols()) +
                           " columns, the fit expects " + std::to_string(fit.beta_original.size()));
    if (x_holdout.rows() != y_holdout.size())
        throw schema_error("prediction_error: holdout rows do not match response length");
    vec_t predicted = (x_holdout * fit.beta_original).array() + fit.intercept;
    return (y_holdout - predicted).squaredNorm() / static_cast<scalar_t>(y_holdout.size());
}

inline MetricsRecord evaluate_selection(const group_set_t& selected, const group_set_t& truth,
                                        int num_groups, const vec_t& beta_hat, const vec_t& beta_star) {
    MetricsRecord rec;
    rec.counts = confusion_of(selected, truth, num_groups);
    rec.rates = rates_of(rec.counts);
    rec.gse = gse_of(selected, truth);
    rec.reee = reee_of(beta_hat, beta_star);
    return rec;
}

} // namespace bsgs
