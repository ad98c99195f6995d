#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "sparsespec/model.hpp"

namespace sparsespec {

/// Complex spectrum evaluated on a rectangular frequency grid.
/// values are row-major: index = a1 * omega2_axis.size() + a2.
struct SpectrumGrid {
    std::vector<double> omega1_axis;
    std::vector<double> omega2_axis;
    std::vector<Complex> values;

    const Complex& at(std::size_t a1, std::size_t a2) const {
        return values[a1 * omega2_axis.size() + a2];
    }
};

/// Per-axis full width at half of the power maximum through a peak.
/// A clamped flag marks a half-max crossing that ran off the axis.
struct FwhmResult {
    double width1 = 0.0;
    double width2 = 0.0;
    bool clamped1 = false;
    bool clamped2 = false;
};

/// Direct (non-uniform) transform: value(w1,w2) = sum_s x(s) e^{-i w1 t1 - i w2 t2}.
/// On a full uniform grid with axes at FFT bin frequencies this equals the
/// 2D FFT. Missing grid points contribute nothing (zero filling).
SpectrumGrid dtft2(const SampledSignal& signal, const std::vector<double>& omega1_axis,
                   const std::vector<double>& omega2_axis);

/// n equispaced frequencies over [0, 2*pi/dt).
std::vector<double> default_axes(std::size_t n, double dt);

/// The k largest local maxima of |value| (8-neighborhood), in descending
/// magnitude; exact ties broken toward lower (omega1, omega2). Throws when
/// fewer than k local maxima exist.
std::vector<std::pair<double, double>> pick_peaks(const SpectrumGrid& spectrum, int k);

/// FWHM of the power |value|^2 along the two axis-aligned slices through
/// the peak cell, crossings located by linear interpolation. The peak must
/// be a local maximum of the grid. beta estimates follow as width/2.
FwhmResult fwhm(const SpectrumGrid& spectrum, std::pair<double, double> peak);

/// Shared slice measurement: full width at half of the slice maximum at
/// `center_idx`, for a power profile sampled on `axis`. Returns the width
/// and whether either crossing was clamped to the axis range.
std::pair<double, bool> fwhm_from_power_slice(const std::vector<double>& power,
                                              const std::vector<double>& axis,
                                              std::size_t center_idx);

} // namespace sparsespec
