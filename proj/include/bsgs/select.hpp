#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bsgs/criteria.hpp"
#include "bsgs/errors.hpp"
#include "bsgs/splice.hpp"
#include "bsgs/types.hpp"

namespace bsgs {

enum class Criterion { gic, bic };

/// Criterion evaluation of one fitted model size along a search path.
struct CriterionRecord {
    int target_size = 0;
    group_set_t support;
    index_t num_predictors = 0;
    scalar_t loss = 0;
    scalar_t gic = 0;
    scalar_t bic = 0;
};

struct SelectorConfig {
    int t_min = 1;
    int t_max = 0;       // <= 0 means the default [n / (p_min log p)]
    int max_exchange = 2;
    Criterion criterion = Criterion::gic;
    scalar_t loss_floor = 0; // <= 0 means the default 1e-12 (||y||^2/(2n) + 1)
    std::optional<scalar_t> threshold_override; // fixed splicing threshold for every T
    int max_iterations = 100;
};

struct SelectionResult {
    FitReport best;
    std::vector<CriterionRecord> path;  // one record per evaluated T, ascending
    int distinct_fits = 0;
};

namespace detail {

struct ResolvedSelector {
    int t_min;
    int t_max;
    int max_exchange_cap;
    Criterion criterion;
    scalar_t loss_floor;
};

inline ResolvedSelector resolve_selector(const GroupedDesign& design, const SelectorConfig& config) {
    ResolvedSelector r;
    const int num_groups = design.structure.num_groups();
    r.t_max = config.t_max > 0
                  ? config.t_max
                  : default_tmax(design.n, design.structure.num_predictors(),
                                 design.structure.min_group_size(), num_groups);
    r.t_min = config.t_min;
    if (r.t_min < 1 || r.t_min > r.t_max || r.t_max > num_groups)
        throw size_error("selector: need 1 <= t_min <= t_max <= J, got [" + std::to_string(r.t_min) +
                         ", " + std::to_string(r.t_max) + "] with J=" + std::to_string(num_groups));
    if (config.max_exchange < 1) throw size_error("selector: C_max must be >= 1");
    r.max_exchange_cap = config.max_exchange;
    r.criterion = config.criterion;
    r.loss_floor = config.loss_floor > 0 ? config.loss_floor : default_loss_floor(design.y, design.n);
    return r;
}

inline GSplicingConfig splicing_config_for(const GroupedDesign& design, const SelectorConfig& config,
                                           const ResolvedSelector& r, int target_size) {
    GSplicingConfig g;
    g.target_size = target_size;
    g.max_exchange = std::min(r.max_exchange_cap, target_size);
    g.threshold = config.threshold_override
                      ? *config.threshold_override
                      : default_threshold(target_size, design.structure.num_predictors(),
                                          design.structure.max_group_size(), design.n);
    g.max_iterations = config.max_iterations;
    return g;
}

inline CriterionRecord record_of(const GroupedDesign& design, const SpliceState& state,
                                 int target_size, scalar_t loss_floor) {
    CriterionRecord rec;
    rec.target_size = target_size;
    rec.support = state.active;
    rec.num_predictors = design.structure.predictors_in(state.active);
    rec.loss = state.fit.loss;
    rec.gic = gic_of(rec.loss, rec.num_predictors, design.n, design.structure.num_groups(), loss_floor);
    rec.bic = bic_of(rec.loss, rec.num_predictors, design.n, loss_floor);
    return rec;
}

inline scalar_t criterion_value(const CriterionRecord& rec, Criterion criterion) {
    return criterion == Criterion::gic ? rec.gic : rec.bic;
}

template <class Fn>
auto annotate_failing_size(int target_size, Fn&& fn) {
    auto rethrow = [&](const error& e, auto tag) -> void {
        throw std::decay_t<decltype(tag)>("T=" + std::to_string(target_size) + ": " + e.what());
    };
    try {
        return fn();
    } catch (const input_error& e) {
        rethrow(e, input_error{""});
    } catch (const config_error& e) {
        rethrow(e, config_error{""});
    } catch (const numeric_error& e) {
        rethrow(e, numeric_error{""});
    }
    throw error("unreachable");
}

} // namespace detail

/// Sequential sweep of Algorithm-style model sizes T = 1..t_max, warm-starting
/// each size from the previous support plus its strongest inactive group, then
/// picking the criterion argmin (ties to the smallest T).
inline SelectionResult sgsplicing_fit(const GroupedDesign& design, const SelectorConfig& config,
                                      const splice_observer_t& observer = {}) {
    const detail::ResolvedSelector r = detail::resolve_selector(design, config);

    SelectionResult result;
    result.path.reserve(static_cast<std::size_t>(r.t_max));

    std::optional<SpliceState> best_state;
    std::optional<SpliceState> prev;
    std::vector<IterationRecord> best_trace;
    scalar_t best_value = 0;
    scalar_t best_threshold = 0;

    for (int t = 1; t <= r.t_max; ++t) {
        GSplicingConfig g = detail::splicing_config_for(design, config, r, t);
        if (t == 1) {
            g.initial_active = initial_active_set(design, 1);
        } else {
            // Warm start: previous support plus the inactive group with the
            // largest dual sacrifice, ties to the lowest id.
            int best_j = -1;
            scalar_t best_s = -1;
            for (int j : prev->inactive) {
                const scalar_t s = detail::group_sq_norm(design, prev->dual, j);
                if (s > best_s) {
                    best_s = s;
                    best_j = j;
                }
            }
            g.initial_active = set_union(prev->active, group_set_t{best_j});
        }

        detail::GSplicingRun run = detail::annotate_failing_size(
            t, [&] { return detail::gsplicing_run(design, g, observer); });
        ++result.distinct_fits;

        CriterionRecord rec = detail::record_of(design, run.state, t, r.loss_floor);
        const scalar_t value = detail::criterion_value(rec, r.criterion);
        if (!best_state || value < best_value) {
            best_state = run.state;
            best_trace = run.trace;
            best_value = value;
            best_threshold = g.threshold;
        }
        result.path.push_back(std::move(rec));
        prev = std::move(run.state);
    }

    result.best = detail::report_from_state(design, *best_state, std::move(best_trace), best_threshold);
    return result;
}

/// Golden-section search over the model size.
///
/// Probes shrink the bracket [t_min, t_max] with the 0.618 : 0.382 split until
/// the two probes coincide; the remaining bracket is then swept through the
/// fit cache so the reported size is the exact criterion argmin over it.
/// Each size is fit at most once, from a fresh screening initial set.
inline SelectionResult ggsplicing_fit(const GroupedDesign& design, const SelectorConfig& config,
                                      const splice_observer_t& observer = {}) {
    const detail::ResolvedSelector r = detail::resolve_selector(design, config);

    struct CacheEntry {
        SpliceState state;
        std::vector<IterationRecord> trace;
        CriterionRecord record;
        scalar_t threshold = 0;
    };
    std::map<int, CacheEntry> cache;

    auto probe = [&](int t) -> const CacheEntry& {
        auto it = cache.find(t);
        if (it != cache.end()) return it->second;
        GSplicingConfig g = detail::splicing_config_for(design, config, r, t);
        detail::GSplicingRun run = detail::annotate_failing_size(
            t, [&] { return detail::gsplicing_run(design, g, observer); });
        CacheEntry entry;
        entry.record = detail::record_of(design, run.state, t, r.loss_floor);
        entry.state = std::move(run.state);
        entry.trace = std::move(run.trace);
        entry.threshold = g.threshold;
        return cache.emplace(t, std::move(entry)).first->second;
    };
    auto value_at = [&](int t) { return detail::criterion_value(probe(t).record, r.criterion); };
    auto lower_probe = [](int lo, int hi) { return static_cast<int>(std::llround(0.618 * lo + 0.382 * hi)); };
    auto upper_probe = [](int lo, int hi) { return static_cast<int>(std::llround(0.382 * lo + 0.618 * hi)); };

    int lo = r.t_min;
    int hi = r.t_max;
    int t1 = lower_probe(lo, hi);
    int t2 = upper_probe(lo, hi);
    scalar_t f1 = value_at(t1);
    scalar_t f2 = value_at(t2);

    int stalled_rounds = 0;
    while (t1 != t2) {
        const int prev_lo = lo;
        const int prev_hi = hi;
        if (f1 <= f2) {
            hi = t2;
            t2 = t1;
            f2 = f1;
            t1 = lower_probe(lo, hi);
            f1 = value_at(t1);
        } else {
            lo = t1;
            t1 = t2;
            f1 = f2;
            t2 = upper_probe(lo, hi);
            f2 = value_at(t2);
        }
        if (lo == prev_lo && hi == prev_hi) {
            if (++stalled_rounds >= 2)
                throw search_stall_error("golden-section bounds stopped shrinking at [" +
                                         std::to_string(lo) + ", " + std::to_string(hi) + "]");
        } else {
            stalled_rounds = 0;
        }
    }

    // Probes have met; resolve the surviving bracket exactly.
    int best_t = lo;
    scalar_t best_value = value_at(lo);
    for (int t = lo + 1; t <= hi; ++t) {
        const scalar_t v = value_at(t);
        if (v < best_value) {
            best_value = v;
            best_t = t;
        }
    }

    SelectionResult result;
    result.distinct_fits = static_cast<int>(cache.size());
    result.path.reserve(cache.size());
    for (const auto& [t, entry] : cache) result.path.push_back(entry.record);
    const CacheEntry& chosen = cache.at(best_t);
    result.best = detail::report_from_state(design, chosen.state, chosen.trace, chosen.threshold);
    return result;
}

} // namespace bsgs
