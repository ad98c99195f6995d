#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace sparsespec {

using Complex = std::complex<double>;

/// One 2D sampling time. For grid-originated points t1 = i1*dt1 and
/// t2 = i2*dt2; indices are always >= 0.
struct SamplingPoint {
    int i1 = 0;
    int i2 = 0;
    double t1 = 0.0;
    double t2 = 0.0;
};

/// An ordered set of distinct sampling points inside an enclosing
/// uniform grid of shape (n1, n2) with spacings (dt1, dt2).
struct SamplingScheme {
    std::vector<SamplingPoint> points;
    int n1 = 0;
    int n2 = 0;
    double dt1 = 1.0;
    double dt2 = 1.0;

    std::size_t size() const { return points.size(); }
};

/// One 2D spectral band: x(t1,t2) = amplitude * e^{(i*omega1-beta1)t1} * e^{(i*omega2-beta2)t2}.
/// Frequencies are rad per sample unit, dampings 1 per sample unit (>= 0).
struct Component {
    double omega1 = 0.0;
    double omega2 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    Complex amplitude{1.0, 0.0};
};

struct ComponentSet {
    std::vector<Component> components;

    std::size_t k() const { return components.size(); }
};

/// Complex measurements attached to a sampling scheme. noise_sigma is the
/// per-quadrature standard deviation that was actually applied (0 when clean).
struct SampledSignal {
    SamplingScheme scheme;
    std::vector<Complex> values;
    double noise_sigma = 0.0;
};

/// Additive Gaussian noise, parameterized the way the simulation protocol
/// states it: FWHM of the per-quadrature density relative to the largest
/// component amplitude. sigma = fwhm_ratio * max_amp / (2*sqrt(2*ln 2)).
struct NoiseSpec {
    double fwhm_ratio = 0.0;
    std::uint64_t seed = 0;
};

/// Throws std::invalid_argument when points are duplicated, carry negative
/// indices, or fall outside grid_shape.
void validate_scheme(const SamplingScheme& scheme);

/// Full uniform grid, row-major over (i1, i2), t = (i1*dt1, i2*dt2).
SamplingScheme make_uniform_grid(int n1, int n2, double dt1 = 1.0, double dt2 = 1.0);

/// Draws `count` points uniformly without replacement from `grid`,
/// restricted to i1 < corner.first && i2 < corner.second when a corner is
/// given. The result keeps the parent grid_shape and spacings; points are
/// returned sorted by (i1, i2).
SamplingScheme subsample_random(const SamplingScheme& grid, std::size_t count,
                                std::optional<std::pair<int, int>> corner,
                                std::uint64_t seed);

/// Noise-free evaluation of the damped-exponential sum at every scheme point.
SampledSignal synthesize(const ComponentSet& components, const SamplingScheme& scheme);

/// Adds independent Gaussian noise to both quadratures of every sample.
/// max_amp is the reference amplitude (largest |g_k| of the scene).
SampledSignal add_noise(const SampledSignal& signal, const NoiseSpec& spec, double max_amp);

/// K random components: per component the draw order is omega1, omega2,
/// beta1, beta2, all uniform in their ranges; amplitudes are 1+0i.
ComponentSet draw_random_scene(int k, std::pair<double, double> freq_range,
                               std::pair<double, double> damp_range, std::uint64_t seed);

/// Largest |amplitude| over the set; 0 for an empty set.
double max_amplitude(const ComponentSet& components);

} // namespace sparsespec
