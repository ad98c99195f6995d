#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sparsespec/model.hpp"

namespace sparsespec {

/// Candidate parameter values defining the dictionary atoms. Frequency
/// lists are strictly increasing; the default damping lists are the single
/// value 0 (the undamped dictionary used by the LASSO path).
struct DictionaryGrid {
    std::vector<double> omega1_vals;
    std::vector<double> omega2_vals;
    std::vector<double> beta1_vals{0.0};
    std::vector<double> beta2_vals{0.0};

    bool undamped() const {
        return beta1_vals.size() == 1 && beta2_vals.size() == 1 &&
               beta1_vals[0] == 0.0 && beta2_vals[0] == 0.0;
    }
    std::size_t p1() const { return omega1_vals.size(); }
    std::size_t p2() const { return omega2_vals.size(); }
    /// Frequency-atom index layout: m = p1 * P2 + p2.
    std::size_t freq_atoms() const { return p1() * p2(); }
    double spacing1() const;
    double spacing2() const;
};

/// One dictionary atom evaluated on a sampling scheme. When normalized,
/// values have unit Euclidean norm and `scale` stores the pre-normalization
/// norm; otherwise scale is 1.
struct Atom {
    double omega1 = 0.0;
    double omega2 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    std::vector<Complex> values;
    double scale = 1.0;
};

struct AtomParams {
    double omega1 = 0.0;
    double omega2 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
};

/// Equispaced frequency candidates over freq_range, endpoints included.
/// beta_vals defaults to {0} on both axes (the undamped grid).
DictionaryGrid build_grid(int p1, int p2, std::pair<double, double> freq_range,
                          std::optional<std::vector<double>> beta_vals = std::nullopt);

/// Atom values at every scheme point:
/// a(s) = e^{(i*omega1-beta1)t1} * e^{(i*omega2-beta2)t2}.
Atom make_atom(const AtomParams& params, const SamplingScheme& scheme, bool normalize);

} // namespace sparsespec
