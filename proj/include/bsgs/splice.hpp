#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bsgs/criteria.hpp"
#include "bsgs/errors.hpp"
#include "bsgs/grouped_design.hpp"
#include "bsgs/least_squares.hpp"
#include "bsgs/types.hpp"

namespace bsgs {

/// One iterate of the group-splicing iteration: the active/inactive partition
/// of group ids together with the primal fit and the dual variable.
struct SpliceState {
    group_set_t active;
    group_set_t inactive;
    SupportFit fit;
    vec_t dual;
    int iteration = 0;
};

struct GSplicingConfig {
    int target_size = 1;                       // T, fixed size of the active set
    int max_exchange = 2;                      // largest number of groups swapped at once
    scalar_t threshold = 0;                    // minimum loss decrease for accepting a splice
    int max_iterations = 100;
    std::optional<group_set_t> initial_active; // defaults to the screening rule below
};

struct IterationRecord {
    int iteration = 0;
    group_set_t active;
    scalar_t loss = 0;
    int accepted_size = 0; // number of groups exchanged to reach this iterate (0 for the start)
};

/// Final result of a fit, reported in both coefficient bases.
struct FitReport {
    group_set_t support;
    vec_t beta_orth;
    vec_t beta_original;
    scalar_t intercept = 0;
    scalar_t loss = 0;
    bool near_zero = false;
    index_t num_predictors = 0;
    scalar_t gic = 0;
    scalar_t bic = 0;
    int iterations = 0;
    scalar_t threshold = 0;
    std::vector<scalar_t> loss_trace; // loss at iterate 0, 1, ...
    std::vector<IterationRecord> trace;
};

using splice_observer_t = std::function<void(const SpliceState&)>;

/// Default splice-acceptance threshold 0.1 T p_max log(p) log(log n) / n.
inline scalar_t default_threshold(int target_size, index_t p, index_t p_max, index_t n) {
    check_loglog_domain(n, "default_threshold");
    if (p < 2) throw domain_error("default_threshold: need p >= 2");
    if (target_size < 0) throw domain_error("default_threshold: negative model size");
    return 0.1 * static_cast<scalar_t>(target_size) * static_cast<scalar_t>(p_max) *
           std::log(static_cast<scalar_t>(p)) * std::log(std::log(static_cast<scalar_t>(n))) /
           static_cast<scalar_t>(n);
}

/// The T groups with the largest ||X_G^T y||^2, ties to the lowest id.
inline group_set_t initial_active_set(const GroupedDesign& design, int target_size) {
    const int num_groups = design.structure.num_groups();
    if (target_size < 1 || target_size > num_groups)
        throw size_error("initial_active_set: T must be in 1..J");

    std::vector<std::pair<scalar_t, int>> scores;
    scores.reserve(static_cast<std::size_t>(num_groups));
    for (int j = 0; j < num_groups; ++j) {
        scalar_t s = 0;
        for (index_t c : design.structure.columns_of(j)) {
            const scalar_t v = design.x.col(c).dot(design.y);
            s += v * v;
        }
        scores.emplace_back(s, j);
    }
    std::sort(scores.begin(), scores.end(),
              [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });

    group_set_t out;
    out.reserve(static_cast<std::size_t>(target_size));
    for (int k = 0; k < target_size; ++k) out.push_back(scores[static_cast<std::size_t>(k)].second);
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

inline scalar_t group_sq_norm(const GroupedDesign& design, const vec_t& v, int group) {
    scalar_t s = 0;
    for (index_t c : design.structure.columns_of(group)) s += v[c] * v[c];
    return s;
}

// Active groups ordered by ascending backward sacrifice ||beta_G||^2 and
// inactive groups ordered by descending forward sacrifice ||d_G||^2.
// Ties break toward the lowest group id, so prefixes of these rankings are
// exactly the exchange sets for every splice size C.
struct SacrificeRanking {
    std::vector<int> drop_order; // active, weakest first
    std::vector<int> add_order;  // inactive, strongest first
};

inline SacrificeRanking rank_sacrifices(const GroupedDesign& design, const SpliceState& state) {
    SacrificeRanking rank;
    std::vector<std::pair<scalar_t, int>> backward;
    backward.reserve(state.active.size());
    for (int j : state.active) backward.emplace_back(group_sq_norm(design, state.fit.beta, j), j);
    std::sort(backward.begin(), backward.end(),
              [](const auto& a, const auto& b) { return a.first != b.first ? a.first < b.first : a.second < b.second; });

    std::vector<std::pair<scalar_t, int>> forward;
    forward.reserve(state.inactive.size());
    for (int j : state.inactive) forward.emplace_back(group_sq_norm(design, state.dual, j), j);
    std::sort(forward.begin(), forward.end(),
              [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });

    rank.drop_order.reserve(backward.size());
    for (const auto& [s, j] : backward) rank.drop_order.push_back(j);
    rank.add_order.reserve(forward.size());
    for (const auto& [s, j] : forward) rank.add_order.push_back(j);
    return rank;
}

} // namespace detail

/// Builds the iterate for a given active set: primal fit plus dual variable.
inline SpliceState make_splice_state(const GroupedDesign& design, group_set_t active, int iteration) {
    SpliceState state;
    state.active = std::move(active);
    state.inactive = set_complement(state.active, design.structure.num_groups());
    state.fit = fit_least_squares(design, state.active);
    state.dual = dual_on_inactive(design, state.fit);
    state.iteration = iteration;
    return state;
}

/// Exchange candidates of size C: the C active groups with the smallest
/// ||beta_G||^2 and the C inactive groups with the largest ||d_G||^2.
inline std::pair<group_set_t, group_set_t> exchange_candidates(const GroupedDesign& design,
                                                               const SpliceState& state, int c) {
    const int limit = static_cast<int>(std::min(state.active.size(), state.inactive.size()));
    if (c < 1 || c > limit)
        throw size_error("exchange_candidates: C=" + std::to_string(c) + " outside 1.." + std::to_string(limit));
    detail::SacrificeRanking rank = detail::rank_sacrifices(design, state);
    group_set_t drop(rank.drop_order.begin(), rank.drop_order.begin() + c);
    group_set_t add(rank.add_order.begin(), rank.add_order.begin() + c);
    std::sort(drop.begin(), drop.end());
    std::sort(add.begin(), add.end());
    return {std::move(drop), std::move(add)};
}

struct SpliceOutcome {
    SpliceState state;
    bool accepted = false;
    int accepted_size = 0; // the C that was accepted, 0 otherwise
};

/// One splicing pass: scan C from max_exchange down to 1 and accept the first
/// exchange whose refitted loss improves on the current one by more than the
/// threshold. Returns the input state unchanged when no exchange qualifies.
inline SpliceOutcome splice_once(const GroupedDesign& design, const SpliceState& state,
                                 const GSplicingConfig& config) {
    SpliceOutcome out;
    const int limit = static_cast<int>(std::min(state.active.size(), state.inactive.size()));
    const int c_max = std::min(config.max_exchange, limit);
    if (c_max < 1) {
        out.state = state;
        return out;
    }

    const detail::SacrificeRanking rank = detail::rank_sacrifices(design, state);
    for (int c = c_max; c >= 1; --c) {
        group_set_t drop(rank.drop_order.begin(), rank.drop_order.begin() + c);
        group_set_t add(rank.add_order.begin(), rank.add_order.begin() + c);
        std::sort(drop.begin(), drop.end());
        std::sort(add.begin(), add.end());

        group_set_t candidate = set_union(set_difference(state.active, drop), add);
        SupportFit refit = fit_least_squares(design, std::move(candidate));
        if (state.fit.loss - refit.loss > config.threshold) {
            out.state.active = refit.support;
            out.state.inactive = set_complement(refit.support, design.structure.num_groups());
            out.state.dual = dual_on_inactive(design, refit);
            out.state.fit = std::move(refit);
            out.state.iteration = state.iteration + 1;
            out.accepted = true;
            out.accepted_size = c;
            return out;
        }
    }
    out.state = state;
    return out;
}

namespace detail {

inline void validate_gsplicing_config(const GroupedDesign& design, const GSplicingConfig& config) {
    const int num_groups = design.structure.num_groups();
    if (config.target_size < 1 || config.target_size > num_groups)
        throw size_error("gsplicing: T=" + std::to_string(config.target_size) + " outside 1..J=" +
                         std::to_string(num_groups));
    if (config.max_exchange < 1 || config.max_exchange > config.target_size)
        throw size_error("gsplicing: C_max must be in 1..T");
    if (!(config.threshold >= 0)) throw domain_error("gsplicing: threshold must be nonnegative");
    if (config.max_iterations < 1) throw size_error("gsplicing: max_iterations must be >= 1");
    if (config.initial_active) {
        const group_set_t& a0 = *config.initial_active;
        if (static_cast<int>(a0.size()) != config.target_size)
            throw size_error("gsplicing: initial active set has size " + std::to_string(a0.size()) +
                             ", expected T=" + std::to_string(config.target_size));
        for (int j : a0)
            if (j < 0 || j >= num_groups) throw size_error("gsplicing: initial active id out of range");
    }
}

struct GSplicingRun {
    SpliceState state;
    std::vector<IterationRecord> trace;
};

inline GSplicingRun gsplicing_run(const GroupedDesign& design, const GSplicingConfig& config,
                                  const splice_observer_t& observer = {}) {
    validate_gsplicing_config(design, config);
    group_set_t a0 = config.initial_active ? *config.initial_active
                                           : initial_active_set(design, config.target_size);
    GSplicingRun run;
    run.state = make_splice_state(design, std::move(a0), 0);
    run.trace.push_back({0, run.state.active, run.state.fit.loss, 0});
    if (observer) observer(run.state);

    while (true) {
        SpliceOutcome out = splice_once(design, run.state, config);
        if (!out.accepted) break;
        run.state = std::move(out.state);
        run.trace.push_back({run.state.iteration, run.state.active, run.state.fit.loss, out.accepted_size});
        if (observer) observer(run.state);
        if (run.state.iteration >= config.max_iterations) {
            // The run is only over-budget if yet another exchange would be taken.
            SpliceOutcome probe = splice_once(design, run.state, config);
            if (probe.accepted)
                throw iteration_cap_error("gsplicing did not converge within " +
                                          std::to_string(config.max_iterations) + " iterations");
            break;
        }
    }
    return run;
}

inline FitReport report_from_state(const GroupedDesign& design, const SpliceState& state,
                                   std::vector<IterationRecord> trace, scalar_t threshold) {
    FitReport report;
    report.support = state.active;
    report.beta_orth = state.fit.beta;
    report.beta_original = design.to_original(state.fit.beta);
    report.intercept = design.intercept_for(report.beta_original);
    report.loss = state.fit.loss;
    report.near_zero = state.fit.near_zero;
    report.num_predictors = design.structure.predictors_in(state.active);
    const scalar_t floor = default_loss_floor(design.y, design.n);
    report.gic = gic_of(report.loss, report.num_predictors, design.n, design.structure.num_groups(), floor);
    report.bic = bic_of(report.loss, report.num_predictors, design.n, floor);
    report.iterations = state.iteration;
    report.threshold = threshold;
    report.trace = std::move(trace);
    report.loss_trace.reserve(report.trace.size());
    for (const auto& rec : report.trace) report.loss_trace.push_back(rec.loss);
    return report;
}

} // namespace detail

/// Group splicing at fixed model size T: iterates splice_once until no
/// exchange decreases the loss by more than the threshold.
inline FitReport gsplicing_fit(const GroupedDesign& design, const GSplicingConfig& config,
                               const splice_observer_t& observer = {}) {
    detail::GSplicingRun run = detail::gsplicing_run(design, config, observer);
    return detail::report_from_state(design, run.state, std::move(run.trace), config.threshold);
}

} // namespace bsgs
