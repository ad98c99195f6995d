#include "sparsespec/dictionary.hpp"

#include <cmath>
#include <stdexcept>

namespace sparsespec {

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> vals(static_cast<std::size_t>(n));
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i)
        vals[static_cast<std::size_t>(i)] = lo + i * step;
    vals.back() = hi; // endpoint exact
    return vals;
}

} // namespace

double DictionaryGrid::spacing1() const {
    return p1() > 1 ? (omega1_vals.back() - omega1_vals.front()) / static_cast<double>(p1() - 1)
                    : 0.0;
}

double DictionaryGrid::spacing2() const {
    return p2() > 1 ? (omega2_vals.back() - omega2_vals.front()) / static_cast<double>(p2() - 1)
                    : 0.0;
}

DictionaryGrid build_grid(int p1, int p2, std::pair<double, double> freq_range,
                          std::optional<std::vector<double>> beta_vals) {
    if (p1 < 2 || p2 < 2)
        throw std::invalid_argument("dictionary needs at least 2 candidates per frequency axis");
    if (!(freq_range.first < freq_range.second))
        throw std::invalid_argument("degenerate dictionary frequency range");

    DictionaryGrid grid;
    grid.omega1_vals = linspace(freq_range.first, freq_range.second, p1);
    grid.omega2_vals = linspace(freq_range.first, freq_range.second, p2);
    if (beta_vals) {
        if (beta_vals->empty())
            throw std::invalid_argument("beta candidate list must not be empty");
        for (std::size_t i = 0; i < beta_vals->size(); ++i) {
            if ((*beta_vals)[i] < 0.0)
                throw std::invalid_argument("beta candidates must be >= 0");
            if (i > 0 && (*beta_vals)[i] <= (*beta_vals)[i - 1])
                throw std::invalid_argument("beta candidates must be strictly increasing");
        }
        grid.beta1_vals = *beta_vals;
        grid.beta2_vals = *beta_vals;
    }
    return grid;
}

Atom make_atom(const AtomParams& params, const SamplingScheme& scheme, bool normalize) {
    if (scheme.points.empty())
        throw std::invalid_argument("cannot evaluate an atom on an empty scheme");
    if (params.beta1 < 0.0 || params.beta2 < 0.0)
        throw std::invalid_argument("atom dampings must be >= 0");

    Atom atom;
    atom.omega1 = params.omega1;
    atom.omega2 = params.omega2;
    atom.beta1 = params.beta1;
    atom.beta2 = params.beta2;
    atom.values.resize(scheme.points.size());

    double norm_sq = 0.0;
    for (std::size_t n = 0; n < scheme.points.size(); ++n) {
        const auto& p = scheme.points[n];
        const Complex e1 = std::exp(Complex{-params.beta1 * p.t1, params.omega1 * p.t1});
        const Complex e2 = std::exp(Complex{-params.beta2 * p.t2, params.omega2 * p.t2});
        atom.values[n] = e1 * e2;
        norm_sq += std::norm(atom.values[n]);
    }

    if (normalize) {
        atom.scale = std::sqrt(norm_sq);
        for (auto& v : atom.values)
            v /= atom.scale;
    }
    return atom;
}

} // namespace sparsespec
