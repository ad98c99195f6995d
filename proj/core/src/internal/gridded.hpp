#pragma once

// Internal helpers shared by the spectral transform and the sparse solvers.
// A scheme whose points satisfy t1 = tau1[i1] and t2 = tau2[i2] for per-axis
// time tables admits a separable evaluation: zero-fill the samples onto the
// enclosing grid and apply one phase matrix per axis. This turns "correlate
// every dictionary atom with the residual" into two small matrix products.

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sparsespec/model.hpp"

namespace sparsespec::internal {

struct AxisTimes {
    std::vector<double> t1; // indexed by i1, size n1
    std::vector<double> t2; // indexed by i2, size n2
};

/// Per-axis time tables, or nullopt when two points disagree about the
/// time of a shared index (then only direct summation is valid).
/// Indices never seen in the scheme get the uniform default i*dt.
inline std::optional<AxisTimes> extract_axis_times(const SamplingScheme& scheme) {
    AxisTimes axes;
    axes.t1.resize(static_cast<std::size_t>(scheme.n1));
    axes.t2.resize(static_cast<std::size_t>(scheme.n2));
    std::vector<bool> seen1(static_cast<std::size_t>(scheme.n1), false);
    std::vector<bool> seen2(static_cast<std::size_t>(scheme.n2), false);
    for (const auto& p : scheme.points) {
        const auto k1 = static_cast<std::size_t>(p.i1);
        const auto k2 = static_cast<std::size_t>(p.i2);
        if (seen1[k1] && axes.t1[k1] != p.t1) return std::nullopt;
        if (seen2[k2] && axes.t2[k2] != p.t2) return std::nullopt;
        axes.t1[k1] = p.t1;
        axes.t2[k2] = p.t2;
        seen1[k1] = true;
        seen2[k2] = true;
    }
    for (int i = 0; i < scheme.n1; ++i)
        if (!seen1[static_cast<std::size_t>(i)]) axes.t1[static_cast<std::size_t>(i)] = i * scheme.dt1;
    for (int i = 0; i < scheme.n2; ++i)
        if (!seen2[static_cast<std::size_t>(i)]) axes.t2[static_cast<std::size_t>(i)] = i * scheme.dt2;
    return axes;
}

/// n1 x n2 matrix holding `values` at each point's (i1, i2); zeros elsewhere.
inline Eigen::MatrixXcd zero_fill(const SamplingScheme& scheme,
                                  const std::vector<Complex>& values) {
    Eigen::MatrixXcd grid = Eigen::MatrixXcd::Zero(scheme.n1, scheme.n2);
    for (std::size_t n = 0; n < scheme.points.size(); ++n)
        grid(scheme.points[n].i1, scheme.points[n].i2) = values[n];
    return grid;
}

/// E(p, i) = exp(sign * 1i * freqs[p] * times[i]).
inline Eigen::MatrixXcd phase_matrix(const std::vector<double>& freqs,
                                     const std::vector<double>& times, double sign) {
    Eigen::MatrixXcd e(static_cast<Eigen::Index>(freqs.size()),
                       static_cast<Eigen::Index>(times.size()));
    for (std::size_t p = 0; p < freqs.size(); ++p)
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double phase = sign * freqs[p] * times[i];
            e(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(i)) =
                Complex{std::cos(phase), std::sin(phase)};
        }
    return e;
}

/// Separable 2D transform: out(p1, p2) = sum_{i1,i2} E1(p1,i1) G(i1,i2) E2(p2,i2).
inline Eigen::MatrixXcd transform2d(const Eigen::MatrixXcd& e1, const Eigen::MatrixXcd& grid,
                                    const Eigen::MatrixXcd& e2) {
    return e1 * grid * e2.transpose();
}

/// Direct 1D sum: out[p] = sum_n values[n] * exp(sign * 1i * freqs[p] * times[n]).
inline std::vector<Complex> dtft1(const std::vector<Complex>& values,
                                  const std::vector<double>& times,
                                  const std::vector<double>& freqs, double sign) {
    std::vector<Complex> out(freqs.size(), Complex{0.0, 0.0});
    for (std::size_t p = 0; p < freqs.size(); ++p) {
        Complex acc{0.0, 0.0};
        for (std::size_t n = 0; n < values.size(); ++n) {
            const double phase = sign * freqs[p] * times[n];
            acc += values[n] * Complex{std::cos(phase), std::sin(phase)};
        }
        out[p] = acc;
    }
    return out;
}

} // namespace sparsespec::internal
