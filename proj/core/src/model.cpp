#include "sparsespec/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "sparsespec/rng.hpp"

namespace sparsespec {

void validate_scheme(const SamplingScheme& scheme) {
    std::set<std::pair<int, int>> seen;
    for (const auto& p : scheme.points) {
        if (p.i1 < 0 || p.i2 < 0)
            throw std::invalid_argument("sampling point has negative grid index");
        if (p.i1 >= scheme.n1 || p.i2 >= scheme.n2)
            throw std::invalid_argument("sampling point (" + std::to_string(p.i1) + "," +
                                        std::to_string(p.i2) + ") outside grid shape");
        if (!seen.insert({p.i1, p.i2}).second)
            throw std::invalid_argument("duplicate sampling point (" + std::to_string(p.i1) +
                                        "," + std::to_string(p.i2) + ")");
    }
}

SamplingScheme make_uniform_grid(int n1, int n2, double dt1, double dt2) {
    if (n1 < 1 || n2 < 1)
        throw std::invalid_argument("grid dimensions must be >= 1");
    if (dt1 <= 0.0 || dt2 <= 0.0)
        throw std::invalid_argument("grid spacings must be > 0");

    SamplingScheme scheme;
    scheme.n1 = n1;
    scheme.n2 = n2;
    scheme.dt1 = dt1;
    scheme.dt2 = dt2;
    scheme.points.reserve(static_cast<std::size_t>(n1) * n2);
    for (int i1 = 0; i1 < n1; ++i1)
        for (int i2 = 0; i2 < n2; ++i2)
            scheme.points.push_back({i1, i2, i1 * dt1, i2 * dt2});
    return scheme;
}

SamplingScheme subsample_random(const SamplingScheme& grid, std::size_t count,
                                std::optional<std::pair<int, int>> corner,
                                std::uint64_t seed) {
    if (corner && (corner->first > grid.n1 || corner->second > grid.n2))
        throw std::invalid_argument("corner exceeds grid shape");

    std::vector<std::size_t> eligible;
    eligible.reserve(grid.points.size());
    for (std::size_t idx = 0; idx < grid.points.size(); ++idx) {
        const auto& p = grid.points[idx];
        if (!corner || (p.i1 < corner->first && p.i2 < corner->second))
            eligible.push_back(idx);
    }
    if (count > eligible.size())
        throw std::invalid_argument("requested " + std::to_string(count) + " samples but only " +
                                    std::to_string(eligible.size()) + " points are eligible");

    // Partial Fisher-Yates: the first `count` slots end up holding a
    // uniform draw without replacement.
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + rng.uniform_index(eligible.size() - i);
        std::swap(eligible[i], eligible[j]);
    }
    eligible.resize(count);
    std::sort(eligible.begin(), eligible.end());

    SamplingScheme out;
    out.n1 = grid.n1;
    out.n2 = grid.n2;
    out.dt1 = grid.dt1;
    out.dt2 = grid.dt2;
    out.points.reserve(count);
    for (std::size_t idx : eligible)
        out.points.push_back(grid.points[idx]);
    std::sort(out.points.begin(), out.points.end(), [](const auto& a, const auto& b) {
        return std::pair{a.i1, a.i2} < std::pair{b.i1, b.i2};
    });
    return out;
}

SampledSignal synthesize(const ComponentSet& components, const SamplingScheme& scheme) {
    for (const auto& c : components.components)
        if (c.beta1 < 0.0 || c.beta2 < 0.0)
            throw std::invalid_argument("component dampings must be >= 0");

    SampledSignal signal;
    signal.scheme = scheme;
    signal.values.assign(scheme.points.size(), Complex{0.0, 0.0});
    for (const auto& c : components.components) {
        for (std::size_t n = 0; n < scheme.points.size(); ++n) {
            const auto& p = scheme.points[n];
            const Complex e1 = std::exp(Complex{-c.beta1 * p.t1, c.omega1 * p.t1});
            const Complex e2 = std::exp(Complex{-c.beta2 * p.t2, c.omega2 * p.t2});
            signal.values[n] += c.amplitude * e1 * e2;
        }
    }
    return signal;
}

SampledSignal add_noise(const SampledSignal& signal, const NoiseSpec& spec, double max_amp) {
    if (spec.fwhm_ratio < 0.0)
        throw std::invalid_argument("noise fwhm_ratio must be >= 0");
    if (spec.fwhm_ratio == 0.0)
        return signal;
    if (max_amp <= 0.0)
        throw std::invalid_argument("max_amp must be > 0 when noise is requested");

    // FWHM -> standard deviation of a Gaussian density.
    const double sigma = spec.fwhm_ratio * max_amp / (2.0 * std::sqrt(2.0 * std::log(2.0)));

    SampledSignal out = signal;
    out.noise_sigma = sigma;
    Rng rng(spec.seed);
    for (auto& v : out.values) {
        const double re = sigma * rng.gaussian();
        const double im = sigma * rng.gaussian();
        v += Complex{re, im};
    }
    return out;
}

ComponentSet draw_random_scene(int k, std::pair<double, double> freq_range,
                               std::pair<double, double> damp_range, std::uint64_t seed) {
    if (k < 1)
        throw std::invalid_argument("scene must have k >= 1 components");
    if (!(freq_range.first < freq_range.second))
        throw std::invalid_argument("invalid frequency range");
    if (!(damp_range.first < damp_range.second))
        throw std::invalid_argument("invalid damping range");

    Rng rng(seed);
    ComponentSet set;
    set.components.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        Component c;
        c.omega1 = rng.uniform(freq_range.first, freq_range.second);
        c.omega2 = rng.uniform(freq_range.first, freq_range.second);
        c.beta1 = rng.uniform(damp_range.first, damp_range.second);
        c.beta2 = rng.uniform(damp_range.first, damp_range.second);
        c.amplitude = Complex{1.0, 0.0};
        set.components.push_back(c);
    }
    return set;
}

double max_amplitude(const ComponentSet& components) {
    double m = 0.0;
    for (const auto& c : components.components)
        m = std::max(m, std::abs(c.amplitude));
    return m;
}

} // namespace sparsespec
