#include "sparsespec/bench.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "sparsespec/estimators.hpp"
#include "sparsespec/rng.hpp"

namespace sparsespec {

const char* method_name(Method m) {
    switch (m) {
        case Method::fourier: return "fourier";
        case Method::lasso: return "lasso";
        case Method::sema: return "sema";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "fourier") return Method::fourier;
    if (name == "lasso") return Method::lasso;
    if (name == "sema") return Method::sema;
    throw std::invalid_argument("unknown method '" + name + "'");
}

namespace {

SampledSignal subsample_signal(const SampledSignal& signal, std::size_t count,
                               std::uint64_t seed) {
    const auto sub_scheme = subsample_random(signal.scheme, count, std::nullopt, seed);
    SampledSignal out;
    out.scheme = sub_scheme;
    out.noise_sigma = signal.noise_sigma;
    out.values.reserve(sub_scheme.points.size());
    // The parent is a full row-major grid, so (i1, i2) indexes it directly.
    for (const auto& p : sub_scheme.points)
        out.values.push_back(
            signal.values[static_cast<std::size_t>(p.i1) *
                              static_cast<std::size_t>(signal.scheme.n2) +
                          static_cast<std::size_t>(p.i2)]);
    return out;
}

} // namespace

TrialRecord run_trial(const CampaignConfig& config, int trial_index, double fraction,
                      Method method) {
    const std::uint64_t scene_seed = config.base_seed ^ static_cast<std::uint64_t>(trial_index);
    const auto scene =
        draw_random_scene(config.k, config.freq_range, config.damp_range, scene_seed);
    return run_trial_scene(config, scene, trial_index, fraction, method);
}

TrialRecord run_trial_scene(const CampaignConfig& config, const ComponentSet& scene,
                            int trial_index, double fraction, Method method) {
    const std::uint64_t trial_seed = config.base_seed ^ static_cast<std::uint64_t>(trial_index);
    const auto [n1, n2] = config.grid_shape;
    const auto grid = make_uniform_grid(n1, n2);

    auto signal = synthesize(scene, grid);
    if (config.fwhm_ratio > 0.0)
        signal = add_noise(signal, {config.fwhm_ratio, mix_seed(trial_seed ^ kNoiseStreamTag)},
                           max_amplitude(scene));

    const auto total = static_cast<double>(grid.points.size());
    const auto count = static_cast<std::size_t>(std::clamp(
        std::llround(fraction * total), static_cast<long long>(1),
        static_cast<long long>(grid.points.size())));
    const std::uint64_t sample_seed =
        mix_seed(trial_seed ^ kSampleStreamTag ^ std::bit_cast<std::uint64_t>(fraction));
    const auto subsampled = subsample_signal(signal, count, sample_seed);

    TrialRecord record;
    try {
        ComponentSet estimate;
        switch (method) {
            case Method::fourier:
                estimate = estimate_fourier(subsampled, config.k);
                break;
            case Method::lasso: {
                const auto dict = build_grid(config.dictionary_size.first,
                                             config.dictionary_size.second, config.freq_range);
                SolverOptions opts;
                opts.lambda = config.lambda;
                estimate = estimate_lasso(subsampled, dict, config.k, opts);
                break;
            }
            case Method::sema: {
                const auto dict = build_grid(config.dictionary_size.first,
                                             config.dictionary_size.second, config.freq_range);
                SemaOptions opts;
                opts.lambda = config.lambda;
                estimate = estimate_sema(subsampled, dict, config.k, opts);
                break;
            }
        }
        record.outcome = make_trial_outcome(scene, estimate);
    } catch (const std::exception& e) {
        record.failed = true;
        record.failure_reason = e.what();
    }
    return record;
}

CampaignResult run_campaign(const CampaignConfig& config, int workers) {
    if (config.trials < 1)
        throw std::invalid_argument("campaign needs at least one trial");
    for (std::size_t i = 1; i < config.sampling_fractions.size(); ++i)
        if (config.sampling_fractions[i] <= config.sampling_fractions[i - 1])
            throw std::invalid_argument("sampling fractions must be sorted ascending");
    for (double f : config.sampling_fractions)
        if (!(f > 0.0) || f > 1.0)
            throw std::invalid_argument("sampling fractions must lie in (0, 1]");

    if (workers <= 0)
        workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(workers, 1);

    CampaignResult result;
    for (const Method method : config.methods) {
        for (const double fraction : config.sampling_fractions) {
            const auto start = std::chrono::steady_clock::now();

            std::vector<TrialRecord> records(static_cast<std::size_t>(config.trials));
            std::atomic<int> next{0};
            std::exception_ptr first_error;
            std::mutex error_mutex;

            const auto worker = [&]() {
                for (;;) {
                    const int t = next.fetch_add(1);
                    if (t >= config.trials) return;
                    try {
                        records[static_cast<std::size_t>(t)] =
                            run_trial(config, t, fraction, method);
                    } catch (...) {
                        const std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                }
            };

            if (workers == 1) {
                worker();
            } else {
                std::vector<std::thread> pool;
                pool.reserve(static_cast<std::size_t>(workers));
                for (int w = 0; w < workers; ++w)
                    pool.emplace_back(worker);
                for (auto& th : pool)
                    th.join();
            }
            if (first_error) std::rethrow_exception(first_error);

            // Deterministic aggregation in trial order.
            CellResult cell;
            cell.method = method;
            cell.fraction = fraction;
            cell.trials = config.trials;
            std::vector<TrialOutcome> ok;
            for (const auto& r : records) {
                if (r.failed)
                    ++cell.failures;
                else
                    ok.push_back(r.outcome);
            }
            if (!ok.empty()) {
                cell.rmse_freq = rmse_frequency(ok);
                cell.rmse_damp = rmse_damping(ok);
            } else {
                cell.rmse_freq = std::nan("");
                cell.rmse_damp = std::nan("");
            }
            cell.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            result.cells.push_back(cell);
            result.outcomes.push_back(std::move(ok));
        }
    }
    return result;
}

} // namespace sparsespec
