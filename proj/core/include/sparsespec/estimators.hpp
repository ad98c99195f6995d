#pragma once

#include "sparsespec/dictionary.hpp"
#include "sparsespec/lasso.hpp"
#include "sparsespec/model.hpp"
#include "sparsespec/sema.hpp"

namespace sparsespec {

/// Fourier baseline: direct transform magnitude on axes_n x axes_n default
/// axes, peak picking, dampings as half the power FWHM, amplitudes as the
/// peak value over the sample count.
ComponentSet estimate_fourier(const SampledSignal& signal, int k, std::size_t axes_n = 1024);

/// Two-stage LASSO: undamped l1 solve (data normalized to unit maximum
/// modulus so lambda keeps its calibration), top-k selection, least-squares
/// debiasing, uniform-grid reconstruction, dampings from the padded power
/// spectrum. grid_shape/dt of the reconstruction come from the signal.
ComponentSet estimate_lasso(const SampledSignal& signal, const DictionaryGrid& grid, int k,
                            const SolverOptions& opts = {}, int pad = 1024);

/// SEMA (sema_estimate with the trace dropped).
ComponentSet estimate_sema(const SampledSignal& signal, const DictionaryGrid& grid, int k,
                           const SemaOptions& opts = {});

} // namespace sparsespec
