#include "sparsespec/sema.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "internal/golden.hpp"
#include "internal/gridded.hpp"

namespace sparsespec {

namespace {

constexpr double kBetaSearchTol = 1e-8;

// Damped-exponential evaluation over a fixed scheme; per-axis factor
// tables when the scheme is grid-consistent, pointwise otherwise.
class AtomEval {
public:
    explicit AtomEval(const SamplingScheme& scheme)
        : scheme_(scheme), axes_(internal::extract_axis_times(scheme)) {
        if (axes_) {
            f1_.resize(axes_->t1.size());
            f2_.resize(axes_->t2.size());
        }
    }

    void values(const Component& c, std::vector<Complex>& out) const {
        out.resize(scheme_.points.size());
        if (axes_) {
            for (std::size_t i = 0; i < f1_.size(); ++i)
                f1_[i] = std::exp(Complex{-c.beta1 * axes_->t1[i], c.omega1 * axes_->t1[i]});
            for (std::size_t i = 0; i < f2_.size(); ++i)
                f2_[i] = std::exp(Complex{-c.beta2 * axes_->t2[i], c.omega2 * axes_->t2[i]});
            for (std::size_t n = 0; n < scheme_.points.size(); ++n)
                out[n] = f1_[static_cast<std::size_t>(scheme_.points[n].i1)] *
                         f2_[static_cast<std::size_t>(scheme_.points[n].i2)];
        } else {
            for (std::size_t n = 0; n < scheme_.points.size(); ++n) {
                const auto& p = scheme_.points[n];
                out[n] = std::exp(Complex{-c.beta1 * p.t1, c.omega1 * p.t1}) *
                         std::exp(Complex{-c.beta2 * p.t2, c.omega2 * p.t2});
            }
        }
    }

    /// Model values of a whole component set (amplitudes applied).
    std::vector<Complex> model(const ComponentSet& comps) const {
        std::vector<Complex> acc(scheme_.points.size(), Complex{0.0, 0.0});
        std::vector<Complex> tmp;
        for (const auto& c : comps.components) {
            values(c, tmp);
            for (std::size_t n = 0; n < acc.size(); ++n)
                acc[n] += c.amplitude * tmp[n];
        }
        return acc;
    }

private:
    const SamplingScheme& scheme_;
    std::optional<internal::AxisTimes> axes_;
    mutable std::vector<Complex> f1_, f2_;
};

struct SingleFit {
    double resid_sq = 0.0;
    Complex amplitude{0.0, 0.0};
};

// Least-squares fit of one atom against y: amplitude = <a,y>/||a||^2,
// residual^2 = ||y||^2 - |<a,y>|^2/||a||^2.
SingleFit fit_single(const std::vector<Complex>& atom, const std::vector<Complex>& y,
                     double y_norm_sq) {
    Complex inner{0.0, 0.0};
    double a_norm_sq = 0.0;
    for (std::size_t n = 0; n < atom.size(); ++n) {
        inner += std::conj(atom[n]) * y[n];
        a_norm_sq += std::norm(atom[n]);
    }
    SingleFit fit;
    if (a_norm_sq <= 0.0) return {y_norm_sq, Complex{0.0, 0.0}};
    fit.amplitude = inner / a_norm_sq;
    fit.resid_sq = std::max(0.0, y_norm_sq - std::norm(inner) / a_norm_sq);
    return fit;
}

double norm_sq(const std::vector<Complex>& v) {
    double s = 0.0;
    for (const auto& x : v)
        s += std::norm(x);
    return s;
}

std::vector<Complex> subtract_others(const SampledSignal& signal, const ComponentSet& others,
                                     const AtomEval& eval) {
    if (signal.values.size() != signal.scheme.points.size())
        throw std::invalid_argument("signal value count does not match its scheme");
    std::vector<Complex> y = signal.values;
    if (!others.components.empty()) {
        const auto contribution = eval.model(others);
        for (std::size_t n = 0; n < y.size(); ++n)
            y[n] -= contribution[n];
    }
    return y;
}

// Shared engine for the two refinement entry points. `work` carries the
// evolving parameters; every accepted change strictly reduces the fit
// residual against y.
class Refiner {
public:
    Refiner(const AtomEval& eval, const std::vector<Complex>& y)
        : eval_(eval), y_(y), y_norm_sq_(norm_sq(y)) {}

    SingleFit fit(const Component& c) const {
        eval_.values(c, scratch_);
        return fit_single(scratch_, y_, y_norm_sq_);
    }

    // Golden-section pass over one damping axis; keeps the best of the
    // interior optimum, both bracket edges, and the current value.
    void refine_beta_axis(Component& work, double& best_resid, int axis, double beta_max) const {
        const auto resid_at = [&](double b) {
            Component c = work;
            (axis == 1 ? c.beta1 : c.beta2) = b;
            return fit(c).resid_sq;
        };
        const auto [gx, gf] = internal::golden_min(resid_at, 0.0, beta_max, kBetaSearchTol);

        double cand_x = axis == 1 ? work.beta1 : work.beta2;
        double cand_f = best_resid;
        const auto consider = [&](double x, double f) {
            if (f < cand_f || (f == cand_f && x < cand_x)) {
                cand_f = f;
                cand_x = x;
            }
        };
        consider(gx, gf);
        consider(0.0, resid_at(0.0));
        consider(beta_max, resid_at(beta_max));

        if (cand_x != (axis == 1 ? work.beta1 : work.beta2) || cand_f < best_resid) {
            (axis == 1 ? work.beta1 : work.beta2) = cand_x;
            const auto f = fit(work);
            work.amplitude = f.amplitude;
            best_resid = f.resid_sq;
        }
    }

    void refine_betas(Component& work, double& best_resid, double beta_max) const {
        refine_beta_axis(work, best_resid, 1, beta_max);
        refine_beta_axis(work, best_resid, 2, beta_max);
    }

    // One zoom schedule over the frequency plane, followed by a per-axis
    // parabolic polish at the finest step.
    void refine_freqs(Component& work, double& best_resid, std::pair<double, double> span,
                      const SemaOptions& opts) const {
        double s1 = span.first, s2 = span.second;
        for (int level = 0; level < opts.zoom_levels; ++level) {
            double cand_f = best_resid;
            double cand_w1 = work.omega1, cand_w2 = work.omega2;
            for (int a = 0; a < opts.local_points; ++a) {
                const double o1 = -s1 + 2.0 * s1 * a / (opts.local_points - 1);
                for (int b = 0; b < opts.local_points; ++b) {
                    const double o2 = -s2 + 2.0 * s2 * b / (opts.local_points - 1);
                    if (o1 == 0.0 && o2 == 0.0) continue;
                    Component c = work;
                    c.omega1 += o1;
                    c.omega2 += o2;
                    const double f = fit(c).resid_sq;
                    if (f < cand_f) {
                        cand_f = f;
                        cand_w1 = c.omega1;
                        cand_w2 = c.omega2;
                    }
                }
            }
            if (cand_f < best_resid) {
                work.omega1 = cand_w1;
                work.omega2 = cand_w2;
                const auto f = fit(work);
                work.amplitude = f.amplitude;
                best_resid = f.resid_sq;
                refine_betas(work, best_resid, opts.beta_max);
            }
            s1 /= 2.0;
            s2 /= 2.0;
        }

        bool polished = false;
        polished |= parabolic_axis(work, best_resid, 1, s1);
        polished |= parabolic_axis(work, best_resid, 2, s2);
        if (polished)
            refine_betas(work, best_resid, opts.beta_max);
    }

private:
    // Quadratic interpolation through (w-h, w, w+h); accepted only when the
    // interpolated vertex strictly improves the fit.
    bool parabolic_axis(Component& work, double& best_resid, int axis, double h) const {
        if (h <= 0.0) return false;
        const auto resid_at = [&](double w) {
            Component c = work;
            (axis == 1 ? c.omega1 : c.omega2) = w;
            return fit(c).resid_sq;
        };
        const double w0 = axis == 1 ? work.omega1 : work.omega2;
        const double fm = resid_at(w0 - h);
        const double fp = resid_at(w0 + h);
        const double f0 = best_resid;
        const double denom = fm - 2.0 * f0 + fp;
        if (!(denom > 0.0)) return false;
        const double delta = 0.5 * h * (fm - fp) / denom;
        if (!(std::abs(delta) <= h)) return false;
        Component c = work;
        (axis == 1 ? c.omega1 : c.omega2) = w0 + delta;
        const auto f = fit(c);
        if (f.resid_sq < best_resid) {
            work = c;
            work.amplitude = f.amplitude;
            best_resid = f.resid_sq;
            return true;
        }
        return false;
    }

    const AtomEval& eval_;
    const std::vector<Complex>& y_;
    double y_norm_sq_;
    mutable std::vector<Complex> scratch_;
};

void check_options(const SemaOptions& opts) {
    if (opts.local_points < 3 || opts.local_points % 2 == 0)
        throw std::invalid_argument("local_points must be odd and >= 3");
    if (!(opts.beta_max > 0.0))
        throw std::invalid_argument("beta_max must be > 0");
    if (opts.zoom_levels < 1)
        throw std::invalid_argument("zoom_levels must be >= 1");
}

} // namespace

Component refine_damping(const Component& component, const SampledSignal& signal,
                         const ComponentSet& others, const SemaOptions& opts) {
    check_options(opts);
    const AtomEval eval(signal.scheme);
    const auto y = subtract_others(signal, others, eval);
    const Refiner refiner(eval, y);

    // Residual of the input as handed in, amplitude included: the contract
    // compares against this.
    std::vector<Complex> av;
    eval.values(component, av);
    double input_resid = 0.0;
    for (std::size_t n = 0; n < y.size(); ++n)
        input_resid += std::norm(y[n] - component.amplitude * av[n]);

    Component work = component;
    auto f = refiner.fit(work);
    work.amplitude = f.amplitude;
    double best = f.resid_sq;
    refiner.refine_betas(work, best, opts.beta_max);

    return best <= input_resid ? work : component;
}

Component refine_frequency(const Component& component, const SampledSignal& signal,
                           const ComponentSet& others, std::pair<double, double> span,
                           const SemaOptions& opts) {
    check_options(opts);
    if (!(span.first > 0.0) || !(span.second > 0.0))
        throw std::invalid_argument("frequency refinement span must be positive per axis");
    const AtomEval eval(signal.scheme);
    const auto y = subtract_others(signal, others, eval);
    const Refiner refiner(eval, y);

    std::vector<Complex> av;
    eval.values(component, av);
    double input_resid = 0.0;
    for (std::size_t n = 0; n < y.size(); ++n)
        input_resid += std::norm(y[n] - component.amplitude * av[n]);

    Component work = component;
    auto f = refiner.fit(work);
    work.amplitude = f.amplitude;
    double best = f.resid_sq;
    refiner.refine_freqs(work, best, span, opts);

    return best <= input_resid ? work : component;
}

std::pair<ComponentSet, SemaTrace> sema_estimate(const SampledSignal& signal,
                                                 const DictionaryGrid& grid, int k,
                                                 const SemaOptions& opts) {
    check_options(opts);
    if (k < 1)
        throw std::invalid_argument("sema_estimate requires k >= 1");
    if (!grid.undamped())
        throw std::invalid_argument("sema_estimate starts from the undamped dictionary");
    if (signal.values.empty())
        throw std::invalid_argument("sema_estimate requires a non-empty signal");

    // lambda = 0.4 is calibrated for unit-max data; normalize in, scale out.
    double scale = 0.0;
    for (const auto& v : signal.values)
        scale = std::max(scale, std::abs(v));
    SampledSignal xn = signal;
    if (scale > 0.0)
        for (auto& v : xn.values)
            v /= scale;
    const double out_scale = scale > 0.0 ? scale : 1.0;

    SolverOptions sopts = opts.solver;
    sopts.lambda = opts.lambda;
    const SparseSolution sol = solve(xn, grid, sopts);
    const auto peaks = select_components(sol, k);

    std::vector<std::pair<double, double>> freqs;
    freqs.reserve(peaks.size());
    for (const auto& p : peaks)
        freqs.emplace_back(p.omega1, p.omega2);
    const auto amps = debias_amplitudes(xn, freqs);

    ComponentSet comps;
    comps.components.reserve(peaks.size());
    for (std::size_t i = 0; i < peaks.size(); ++i)
        comps.components.push_back(
            {peaks[i].omega1, peaks[i].omega2, 0.0, 0.0, amps[i]});

    const AtomEval eval(xn.scheme);
    const auto residual_norm = [&]() {
        const auto m = eval.model(comps);
        double s = 0.0;
        for (std::size_t n = 0; n < m.size(); ++n)
            s += std::norm(xn.values[n] - m[n]);
        return std::sqrt(s);
    };

    SemaTrace trace;
    const auto record = [&](double resid) {
        trace.residual_norms.push_back(resid * out_scale);
        ComponentSet snapshot = comps;
        for (auto& c : snapshot.components)
            c.amplitude *= out_scale;
        trace.iterates.push_back(std::move(snapshot));
    };

    double prev_resid = residual_norm();
    record(prev_resid);

    const std::pair<double, double> span{grid.spacing1(), grid.spacing2()};
    const auto joint_amplitude_fit = [&]() {
        const auto m = static_cast<Eigen::Index>(xn.values.size());
        const auto kk = static_cast<Eigen::Index>(comps.components.size());
        Eigen::MatrixXcd a(m, kk);
        std::vector<Complex> av;
        for (Eigen::Index j = 0; j < kk; ++j) {
            eval.values(comps.components[static_cast<std::size_t>(j)], av);
            for (Eigen::Index n = 0; n < m; ++n)
                a(n, j) = av[static_cast<std::size_t>(n)];
        }
        Eigen::Map<const Eigen::VectorXcd> b(xn.values.data(), m);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
        if (qr.rank() < kk) return; // keep current amplitudes
        const Eigen::VectorXcd fitted = qr.solve(b);

        const double before = residual_norm();
        std::vector<Complex> saved(comps.components.size());
        for (std::size_t i = 0; i < comps.components.size(); ++i) {
            saved[i] = comps.components[i].amplitude;
            comps.components[i].amplitude = fitted(static_cast<Eigen::Index>(i));
        }
        // Accept only improvements; rounding must not break monotonicity.
        if (residual_norm() > before)
            for (std::size_t i = 0; i < comps.components.size(); ++i)
                comps.components[i].amplitude = saved[i];
    };

    for (int iter = 0; iter < opts.outer_iterations; ++iter) {
        // Largest current amplitude first.
        std::vector<std::size_t> order(comps.components.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(comps.components[a].amplitude) >
                   std::abs(comps.components[b].amplitude);
        });

        for (std::size_t idx : order) {
            ComponentSet others;
            for (std::size_t j = 0; j < comps.components.size(); ++j)
                if (j != idx) others.components.push_back(comps.components[j]);

            Component c = comps.components[idx];
            if (iter == 0) {
                // First pass: dampings enter the undamped selection, then
                // the frequencies are refined around it.
                c = refine_damping(c, xn, others, opts);
                c = refine_frequency(c, xn, others, span, opts);
            } else {
                c = refine_frequency(c, xn, others, span, opts);
                c = refine_damping(c, xn, others, opts);
            }
            comps.components[idx] = c;
        }

        joint_amplitude_fit();
        const double resid = residual_norm();
        record(resid);
        if (std::abs(prev_resid - resid) <= opts.residual_tolerance * std::max(prev_resid, 1e-300))
            break;
        prev_resid = resid;
    }

    for (auto& c : comps.components)
        c.amplitude *= out_scale;
    return {comps, trace};
}

} // namespace sparsespec
