#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "bsgs/grouped_design.hpp"
#include "bsgs/metrics.hpp"
#include "bsgs/oracle.hpp"
#include "bsgs/rng.hpp"
#include "bsgs/select.hpp"
#include "bsgs/splice.hpp"
#include "bsgs/synth.hpp"
#include "bsgs/types.hpp"

namespace bsgs {

enum class Method { gsplicing, sgs, ggs };

/// One replicated synthetic experiment: generate, fit, score.
struct SimConfig {
    SyntheticSpec spec;
    int replications = 100;
    Method method = Method::sgs;
    SelectorConfig selector;             // for sgs / ggs
    std::optional<int> fixed_size;       // for method == gsplicing
    std::optional<scalar_t> threshold_override;
    int threads = 1;
};

struct ReplicateResult {
    int replicate = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    int selected_size = 0;
    int iterations = 0;
    MetricsRecord metrics;
    double runtime_seconds = 0;
};

using report_observer_t = std::function<void(const FitReport&)>;

namespace detail {

inline FitReport fit_with_method(const GroupedDesign& design, Method method,
                                 const SelectorConfig& selector, std::optional<int> fixed_size,
                                 std::optional<scalar_t> threshold_override) {
    switch (method) {
        case Method::gsplicing: {
            if (!fixed_size) throw size_error("gsplicing method requires an explicit model size");
            GSplicingConfig g;
            g.target_size = *fixed_size;
            g.max_exchange = std::min(selector.max_exchange, *fixed_size);
            g.max_iterations = selector.max_iterations;
            g.threshold = threshold_override
                              ? *threshold_override
                              : default_threshold(*fixed_size, design.structure.num_predictors(),
                                                  design.structure.max_group_size(), design.n);
            return gsplicing_fit(design, g);
        }
        case Method::sgs: {
            SelectorConfig s = selector;
            s.threshold_override = threshold_override ? threshold_override : s.threshold_override;
            return sgsplicing_fit(design, s).best;
        }
        case Method::ggs: {
            SelectorConfig s = selector;
            s.threshold_override = threshold_override ? threshold_override : s.threshold_override;
            return ggsplicing_fit(design, s).best;
        }
    }
    throw config_error("unknown method");
}

template <class Work>
void run_indexed_pool(int count, int threads, Work&& work) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) work(i);
        return;
    }
    std::atomic<int> next{0};
    auto loop = [&] {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= count) break;
            work(i);
        }
    };
    std::vector<std::thread> pool;
    const int workers = std::min(threads, count);
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(loop);
    for (auto& t : pool) t.join();
}

} // namespace detail

/// Runs `config.replications` independent replicates (optionally on a worker
/// pool); results come back in replicate order whatever the scheduling. Only
/// the fit itself is timed. Failed replicates carry their error message and
/// the run continues.
inline std::vector<ReplicateResult> run_replications(const SimConfig& config,
                                                     const report_observer_t& observer = {}) {
    if (config.replications < 1) throw size_error("run_replications: need at least 1 replication");
    if (config.method == Method::gsplicing && !config.fixed_size)
        throw size_error("gsplicing method requires an explicit model size");
    std::vector<ReplicateResult> results(static_cast<std::size_t>(config.replications));
    std::mutex observer_mutex;

    detail::run_indexed_pool(config.replications, config.threads, [&](int r) {
        ReplicateResult& res = results[static_cast<std::size_t>(r)];
        res.replicate = r;
        res.seed = derive_seed(config.spec.seed, static_cast<std::uint64_t>(r));
        try {
            SyntheticSpec spec = config.spec;
            spec.seed = res.seed;
            const GroundTruth truth = make_dataset(spec);
            const GroupedDesign design =
                preprocess(truth.design_raw, truth.response, group_structure_of(spec));

            const auto start = std::chrono::steady_clock::now();
            FitReport fit = detail::fit_with_method(design, config.method, config.selector,
                                                    config.fixed_size, config.threshold_override);
            const auto stop = std::chrono::steady_clock::now();
            res.runtime_seconds = std::chrono::duration<double>(stop - start).count();

            res.selected_size = static_cast<int>(fit.support.size());
            res.iterations = fit.iterations;
            res.metrics = evaluate_selection(fit.support, truth.true_support, spec.num_groups,
                                             fit.beta_original, truth.beta_star);
            res.ok = true;
            if (observer) {
                std::lock_guard<std::mutex> lock(observer_mutex);
                observer(fit);
            }
        } catch (const error& e) {
            res.ok = false;
            res.error = e.what();
        }
    });
    return results;
}

struct SummaryStat {
    scalar_t mean = 0;
    scalar_t sd = 0;
    int count = 0;
};

inline SummaryStat summarize(const std::vector<scalar_t>& values) {
    SummaryStat s;
    s.count = static_cast<int>(values.size());
    if (s.count == 0) return s;
    for (scalar_t v : values) s.mean += v;
    s.mean /= static_cast<scalar_t>(s.count);
    if (s.count > 1) {
        scalar_t acc = 0;
        for (scalar_t v : values) acc += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(acc / static_cast<scalar_t>(s.count - 1));
    }
    return s;
}

/// Stability selection on a fixed dataset: fit on row subsamples and count
/// how often each group is selected. Frequencies are relative to the
/// successful replicates.
struct StabilityConfig {
    int replications = 100;
    double subsample_fraction = 0.5;
    std::uint64_t seed = 0;
    Method method = Method::sgs;
    SelectorConfig selector;
    std::optional<int> fixed_size;
    int threads = 1;
};

struct StabilityResult {
    std::vector<double> frequency; // per group id
    int successes = 0;
    int failures = 0;
};

inline StabilityResult stability_frequencies(const mat_t& x_raw, const vec_t& y_raw,
                                             const GroupStructure& structure,
                                             const StabilityConfig& config) {
    if (!(config.subsample_fraction > 0 && config.subsample_fraction < 1))
        throw domain_error("stability: subsample fraction must lie strictly in (0,1)");
    if (config.replications < 1) throw size_error("stability: need at least 1 replication");
    const index_t n = x_raw.rows();
    const index_t m = static_cast<index_t>(std::floor(config.subsample_fraction * static_cast<double>(n)));
    if (m < 2) throw size_error("stability: subsample of " + std::to_string(m) + " rows is too small");

    const int num_groups = structure.num_groups();
    std::vector<std::atomic<int>> hits(static_cast<std::size_t>(num_groups));
    for (auto& h : hits) h.store(0);
    std::atomic<int> successes{0};

    detail::run_indexed_pool(config.replications, config.threads, [&](int r) {
        try {
            RandomStream stream(derive_seed(config.seed, static_cast<std::uint64_t>(r)));
            std::vector<index_t> rows(static_cast<std::size_t>(n));
            for (index_t i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = i;
            for (index_t i = 0; i < m; ++i) {
                const auto pick = i + static_cast<index_t>(stream.next_below(static_cast<std::uint64_t>(n - i)));
                std::swap(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(pick)]);
            }

            mat_t x_sub(m, x_raw.cols());
            vec_t y_sub(m);
            for (index_t i = 0; i < m; ++i) {
                x_sub.row(i) = x_raw.row(rows[static_cast<std::size_t>(i)]);
                y_sub[i] = y_raw[rows[static_cast<std::size_t>(i)]];
            }

            const GroupedDesign design = preprocess(x_sub, y_sub, structure);
            FitReport fit = detail::fit_with_method(design, config.method, config.selector,
                                                    config.fixed_size, {});
            for (int j : fit.support) hits[static_cast<std::size_t>(j)].fetch_add(1);
            successes.fetch_add(1);
        } catch (const error&) {
            // a failed subsample fit simply contributes nothing
        }
    });

    StabilityResult result;
    result.successes = successes.load();
    result.failures = config.replications - result.successes;
    result.frequency.resize(static_cast<std::size_t>(num_groups), 0.0);
    if (result.successes > 0) {
        for (int j = 0; j < num_groups; ++j)
            result.frequency[static_cast<std::size_t>(j)] =
                static_cast<double>(hits[static_cast<std::size_t>(j)].load()) /
                static_cast<double>(result.successes);
    }
    return result;
}

} // namespace bsgs
