#include "sparsespec/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

#include "internal/gridded.hpp"

namespace sparsespec {

namespace {

void check_axis(const std::vector<double>& axis, const char* name) {
    if (axis.empty())
        throw std::invalid_argument(std::string(name) + " axis must be non-empty");
    for (std::size_t i = 1; i < axis.size(); ++i)
        if (axis[i] <= axis[i - 1])
            throw std::invalid_argument(std::string(name) + " axis must be strictly increasing");
}

} // namespace

SpectrumGrid dtft2(const SampledSignal& signal, const std::vector<double>& omega1_axis,
                   const std::vector<double>& omega2_axis) {
    if (signal.values.empty())
        throw std::invalid_argument("dtft2 requires a non-empty signal");
    if (signal.values.size() != signal.scheme.points.size())
        throw std::invalid_argument("signal value count does not match its scheme");
    check_axis(omega1_axis, "omega1");
    check_axis(omega2_axis, "omega2");

    SpectrumGrid spec;
    spec.omega1_axis = omega1_axis;
    spec.omega2_axis = omega2_axis;
    spec.values.resize(omega1_axis.size() * omega2_axis.size());

    const auto axes = internal::extract_axis_times(signal.scheme);
    if (axes) {
        // Separable fast path over the zero-filled grid.
        const Eigen::MatrixXcd grid = internal::zero_fill(signal.scheme, signal.values);
        const Eigen::MatrixXcd e1 = internal::phase_matrix(omega1_axis, axes->t1, -1.0);
        const Eigen::MatrixXcd e2 = internal::phase_matrix(omega2_axis, axes->t2, -1.0);
        const Eigen::MatrixXcd out = internal::transform2d(e1, grid, e2);
        for (std::size_t a1 = 0; a1 < omega1_axis.size(); ++a1)
            for (std::size_t a2 = 0; a2 < omega2_axis.size(); ++a2)
                spec.values[a1 * omega2_axis.size() + a2] =
                    out(static_cast<Eigen::Index>(a1), static_cast<Eigen::Index>(a2));
        return spec;
    }

    // Direct summation for schemes without per-axis time tables.
    for (std::size_t a1 = 0; a1 < omega1_axis.size(); ++a1)
        for (std::size_t a2 = 0; a2 < omega2_axis.size(); ++a2) {
            Complex acc{0.0, 0.0};
            for (std::size_t n = 0; n < signal.values.size(); ++n) {
                const auto& p = signal.scheme.points[n];
                const double phase = -omega1_axis[a1] * p.t1 - omega2_axis[a2] * p.t2;
                acc += signal.values[n] * Complex{std::cos(phase), std::sin(phase)};
            }
            spec.values[a1 * omega2_axis.size() + a2] = acc;
        }
    return spec;
}

std::vector<double> default_axes(std::size_t n, double dt) {
    if (n == 0 || dt <= 0.0)
        throw std::invalid_argument("default_axes needs n >= 1 and dt > 0");
    std::vector<double> axis(n);
    const double step = 2.0 * M_PI / (static_cast<double>(n) * dt);
    for (std::size_t i = 0; i < n; ++i)
        axis[i] = static_cast<double>(i) * step;
    return axis;
}

std::vector<std::pair<double, double>> pick_peaks(const SpectrumGrid& spectrum, int k) {
    if (k < 1)
        throw std::invalid_argument("pick_peaks requires k >= 1");

    const std::size_t n1 = spectrum.omega1_axis.size();
    const std::size_t n2 = spectrum.omega2_axis.size();
    std::vector<double> mag(spectrum.values.size());
    for (std::size_t i = 0; i < mag.size(); ++i)
        mag[i] = std::abs(spectrum.values[i]);

    // (magnitude, a1, a2) for every 8-neighborhood local maximum.
    std::vector<std::tuple<double, std::size_t, std::size_t>> maxima;
    for (std::size_t a1 = 0; a1 < n1; ++a1)
        for (std::size_t a2 = 0; a2 < n2; ++a2) {
            const double m = mag[a1 * n2 + a2];
            if (m <= 0.0) continue;
            bool is_max = true;
            for (int d1 = -1; d1 <= 1 && is_max; ++d1)
                for (int d2 = -1; d2 <= 1 && is_max; ++d2) {
                    if (d1 == 0 && d2 == 0) continue;
                    const auto b1 = static_cast<long>(a1) + d1;
                    const auto b2 = static_cast<long>(a2) + d2;
                    if (b1 < 0 || b2 < 0 || b1 >= static_cast<long>(n1) ||
                        b2 >= static_cast<long>(n2))
                        continue;
                    if (mag[static_cast<std::size_t>(b1) * n2 + static_cast<std::size_t>(b2)] > m)
                        is_max = false;
                }
            if (is_max) maxima.emplace_back(m, a1, a2);
        }

    if (maxima.size() < static_cast<std::size_t>(k))
        throw std::runtime_error("pick_peaks: found " + std::to_string(maxima.size()) +
                                 " local maxima, need " + std::to_string(k));

    std::sort(maxima.begin(), maxima.end(), [&](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        const double aw1 = spectrum.omega1_axis[std::get<1>(a)];
        const double bw1 = spectrum.omega1_axis[std::get<1>(b)];
        if (aw1 != bw1) return aw1 < bw1;
        return spectrum.omega2_axis[std::get<2>(a)] < spectrum.omega2_axis[std::get<2>(b)];
    });

    std::vector<std::pair<double, double>> peaks;
    peaks.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        peaks.emplace_back(spectrum.omega1_axis[std::get<1>(maxima[static_cast<std::size_t>(i)])],
                           spectrum.omega2_axis[std::get<2>(maxima[static_cast<std::size_t>(i)])]);
    return peaks;
}

std::pair<double, bool> fwhm_from_power_slice(const std::vector<double>& power,
                                              const std::vector<double>& axis,
                                              std::size_t center_idx) {
    const double half = power[center_idx] / 2.0;
    bool clamped = false;

    // Walk outward until the profile drops below half max, then place the
    // crossing by linear interpolation between the bracketing samples.
    double left = axis.front();
    {
        std::size_t i = center_idx;
        bool found = false;
        while (i > 0) {
            --i;
            if (power[i] < half) {
                const double f1 = power[i], f2 = power[i + 1];
                left = axis[i] + (axis[i + 1] - axis[i]) * (half - f1) / (f2 - f1);
                found = true;
                break;
            }
        }
        if (!found) clamped = true;
    }

    double right = axis.back();
    {
        bool found = false;
        for (std::size_t i = center_idx + 1; i < power.size(); ++i) {
            if (power[i] < half) {
                const double f1 = power[i - 1], f2 = power[i];
                right = axis[i - 1] + (axis[i] - axis[i - 1]) * (f1 - half) / (f1 - f2);
                found = true;
                break;
            }
        }
        if (!found) clamped = true;
    }

    return {right - left, clamped};
}

FwhmResult fwhm(const SpectrumGrid& spectrum, std::pair<double, double> peak) {
    const std::size_t n1 = spectrum.omega1_axis.size();
    const std::size_t n2 = spectrum.omega2_axis.size();

    const auto nearest = [](const std::vector<double>& axis, double w) {
        const auto it = std::lower_bound(axis.begin(), axis.end(), w);
        if (it == axis.begin()) return std::size_t{0};
        if (it == axis.end()) return axis.size() - 1;
        const auto hi = static_cast<std::size_t>(it - axis.begin());
        return (w - axis[hi - 1] <= axis[hi] - w) ? hi - 1 : hi;
    };
    const std::size_t a1 = nearest(spectrum.omega1_axis, peak.first);
    const std::size_t a2 = nearest(spectrum.omega2_axis, peak.second);

    std::vector<double> pow1(n1), pow2(n2);
    for (std::size_t i = 0; i < n1; ++i)
        pow1[i] = std::norm(spectrum.at(i, a2));
    for (std::size_t j = 0; j < n2; ++j)
        pow2[j] = std::norm(spectrum.at(a1, j));

    const double center = std::norm(spectrum.at(a1, a2));
    if (center <= 0.0)
        throw std::invalid_argument("fwhm: peak has zero power");
    for (int d1 = -1; d1 <= 1; ++d1)
        for (int d2 = -1; d2 <= 1; ++d2) {
            const auto b1 = static_cast<long>(a1) + d1;
            const auto b2 = static_cast<long>(a2) + d2;
            if (b1 < 0 || b2 < 0 || b1 >= static_cast<long>(n1) || b2 >= static_cast<long>(n2))
                continue;
            if (std::norm(spectrum.at(static_cast<std::size_t>(b1),
                                      static_cast<std::size_t>(b2))) > center)
                throw std::invalid_argument("fwhm: given peak is not a local maximum");
        }

    FwhmResult result;
    std::tie(result.width1, result.clamped1) =
        fwhm_from_power_slice(pow1, spectrum.omega1_axis, a1);
    std::tie(result.width2, result.clamped2) =
        fwhm_from_power_slice(pow2, spectrum.omega2_axis, a2);
    return result;
}

} // namespace sparsespec
