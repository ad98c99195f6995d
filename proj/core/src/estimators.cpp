#include "sparsespec/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "sparsespec/fourier.hpp"

namespace sparsespec {

ComponentSet estimate_fourier(const SampledSignal& signal, int k, std::size_t axes_n) {
    const auto axis1 = default_axes(axes_n, signal.scheme.dt1);
    const auto axis2 = default_axes(axes_n, signal.scheme.dt2);
    const auto spectrum = dtft2(signal, axis1, axis2);
    const auto peaks = pick_peaks(spectrum, k);

    ComponentSet comps;
    comps.components.reserve(peaks.size());
    const double m = static_cast<double>(signal.values.size());
    for (const auto& [w1, w2] : peaks) {
        const auto widths = fwhm(spectrum, {w1, w2});
        const auto a1 = static_cast<std::size_t>(
            std::lower_bound(axis1.begin(), axis1.end(), w1) - axis1.begin());
        const auto a2 = static_cast<std::size_t>(
            std::lower_bound(axis2.begin(), axis2.end(), w2) - axis2.begin());
        comps.components.push_back(
            {w1, w2, widths.width1 / 2.0, widths.width2 / 2.0, spectrum.at(a1, a2) / m});
    }
    return comps;
}

ComponentSet estimate_lasso(const SampledSignal& signal, const DictionaryGrid& grid, int k,
                            const SolverOptions& opts, int pad) {
    double scale = 0.0;
    for (const auto& v : signal.values)
        scale = std::max(scale, std::abs(v));
    SampledSignal xn = signal;
    if (scale > 0.0)
        for (auto& v : xn.values)
            v /= scale;

    const SparseSolution sol = solve(xn, grid, opts);
    auto peaks = select_components(sol, k);

    std::vector<std::pair<double, double>> freqs;
    freqs.reserve(peaks.size());
    for (const auto& p : peaks)
        freqs.emplace_back(p.omega1, p.omega2);
    // Debias against the raw data; least squares is scale-equivariant.
    const auto amps = debias_amplitudes(signal, freqs);
    for (std::size_t i = 0; i < peaks.size(); ++i)
        peaks[i].amplitude = amps[i];

    const auto recon = reconstruct_uniform(peaks, {signal.scheme.n1, signal.scheme.n2},
                                           {signal.scheme.dt1, signal.scheme.dt2});
    const auto betas = estimate_damping(recon, freqs, pad);

    ComponentSet comps;
    comps.components.reserve(peaks.size());
    for (std::size_t i = 0; i < peaks.size(); ++i)
        comps.components.push_back({peaks[i].omega1, peaks[i].omega2, betas[i].first,
                                    betas[i].second, peaks[i].amplitude});
    return comps;
}

ComponentSet estimate_sema(const SampledSignal& signal, const DictionaryGrid& grid, int k,
                           const SemaOptions& opts) {
    return sema_estimate(signal, grid, k, opts).first;
}

} // namespace sparsespec
