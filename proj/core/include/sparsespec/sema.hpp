#pragma once

#include <utility>
#include <vector>

#include "sparsespec/dictionary.hpp"
#include "sparsespec/lasso.hpp"
#include "sparsespec/model.hpp"

namespace sparsespec {

/// Sparse exponential mode analysis: frequencies and dampings estimated
/// directly from the non-uniform samples, no uniform-grid reconstruction.
struct SemaOptions {
    double lambda = 0.4;        // inner l1 solve, same calibration as lasso
    int outer_iterations = 20;
    int zoom_levels = 6;        // local-grid halvings per frequency refinement
    int local_points = 5;       // odd, >= 3; candidates per axis and level
    double beta_max = 0.2;      // damping search bracket (0, beta_max]
    double residual_tolerance = 1e-10; // relative residual change stop rule
    SolverOptions solver;       // inner solve controls (lambda above wins)
};

/// Per-iteration diagnostics. Entry 0 is the state right after the initial
/// undamped selection; one entry follows per outer iteration.
struct SemaTrace {
    std::vector<double> residual_norms;
    std::vector<ComponentSet> iterates;
};

/// Full SEMA pipeline: undamped l1 selection of k bands, then alternating
/// per-component refinement (dampings by golden-section least squares,
/// frequencies by zoomed local grids) with joint least-squares amplitude
/// re-estimation, until the residual settles.
std::pair<ComponentSet, SemaTrace> sema_estimate(const SampledSignal& signal,
                                                 const DictionaryGrid& grid, int k,
                                                 const SemaOptions& opts = {});

/// Re-fits one component's frequencies against the data with the other
/// components' contributions subtracted, by successive local-grid zooming
/// across +-span (halved zoom_levels times); dampings and amplitude are
/// re-fit after each accepted move. The returned component never fits
/// worse than the input.
Component refine_frequency(const Component& component, const SampledSignal& signal,
                           const ComponentSet& others, std::pair<double, double> span,
                           const SemaOptions& opts = {});

/// Per-axis damping by golden-section search on [0, beta_max] of the
/// single-atom least-squares residual (others subtracted), to 1e-8
/// absolute; bracket edges win when they fit best. Amplitude is re-fit.
Component refine_damping(const Component& component, const SampledSignal& signal,
                         const ComponentSet& others, const SemaOptions& opts = {});

} // namespace sparsespec
