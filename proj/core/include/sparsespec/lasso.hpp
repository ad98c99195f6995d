#pragma once

#include <utility>
#include <vector>

#include "sparsespec/dictionary.hpp"
#include "sparsespec/model.hpp"

namespace sparsespec {

/// Options for the l1-penalized solver. The objective is
///   ||x - A g||_2^2 + lambda * sum_m |g_m|
/// over complex g, with A holding unit-norm atoms, so the complex
/// soft-threshold level is lambda/2. lambda = 0.4 is calibrated for data
/// normalized to unit maximum modulus (the estimator pipelines apply that
/// normalization before solving).
struct SolverOptions {
    double lambda = 0.4;
    int max_iterations = 2000;  // coordinate-descent sweeps
    double tolerance = 1e-10;   // relative objective change per sweep
    double kkt_tolerance = 1e-6; // accepted violation, relative to lambda
};

/// Result of one solve. `amplitudes` are rescaled to the raw-atom
/// convention of the signal model (they multiply un-normalized atoms), in
/// the dictionary's frequency layout m = p1 * P2 + p2. `objective`,
/// `sweep_objectives` and `kkt_violation` refer to the solved objective
/// (unit-norm atoms, original data scale).
struct SparseSolution {
    std::vector<Complex> amplitudes;
    DictionaryGrid grid;
    double objective = 0.0;
    int iterations = 0;
    double kkt_violation = 0.0;
    std::vector<double> sweep_objectives;
};

/// A selected spectral band: frequencies plus the solver (or debiased) amplitude.
struct SelectedPeak {
    double omega1 = 0.0;
    double omega2 = 0.0;
    Complex amplitude{0.0, 0.0};
};

/// Cyclic coordinate descent with complex soft-thresholding over the
/// undamped frequency dictionary. Sweeps continue until the relative
/// objective change drops below `tolerance` and the KKT violation is at
/// most kkt_tolerance * lambda, or max_iterations sweeps have run.
/// The sampling times must be grid-consistent (t a function of the grid
/// index per axis), which every scheme produced by this library is.
SparseSolution solve(const SampledSignal& signal, const DictionaryGrid& grid,
                     const SolverOptions& opts);

/// The k largest 2D local maxima of |amplitude| over the frequency grid,
/// descending |amplitude|, exact ties toward lower (omega1, omega2).
/// Throws when fewer than k local maxima exist, naming the deficit.
std::vector<SelectedPeak> select_components(const SparseSolution& solution, int k);

/// Least-squares amplitudes of the undamped atoms at `frequencies`
/// against the data. Throws on a rank-deficient atom set.
std::vector<Complex> debias_amplitudes(const SampledSignal& signal,
                                       const std::vector<std::pair<double, double>>& frequencies);

/// Synthesizes the selected undamped components over a full uniform grid.
SampledSignal reconstruct_uniform(const std::vector<SelectedPeak>& selected,
                                  std::pair<int, int> grid_shape,
                                  std::pair<double, double> dt);

/// Per-peak dampings from the zero-padded power spectrum of a uniformly
/// reconstructed signal: each axis slice through the peak bin is measured
/// at half of the power maximum and beta = FWHM/2. `pad` is the padded
/// transform length per axis (>= the grid size). Throws when a requested
/// peak is not a local maximum of the padded spectrum.
std::vector<std::pair<double, double>> estimate_damping(
    const SampledSignal& reconstructed, const std::vector<std::pair<double, double>>& peaks,
    int pad);

} // namespace sparsespec
