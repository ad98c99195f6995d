#include "sparsespec/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

#include <Eigen/Dense>

#include "internal/gridded.hpp"
#include "sparsespec/fourier.hpp"

namespace sparsespec {

namespace {

// Complex soft-threshold: argmin_z |z - u|^2 + 2*thr*|z|.
inline Complex soft_threshold(Complex u, double thr) {
    const double au = std::abs(u);
    if (au <= thr) return Complex{0.0, 0.0};
    return u * (1.0 - thr / au);
}

// Working-set cyclic coordinate descent over the undamped frequency
// dictionary. Atoms are unit-normalized (every sample has modulus 1, so
// the norm is sqrt(M) uniformly) and two structure facts keep the problem
// small even at 256x256 candidates:
//   - correlations of every atom against a residual are two matrix
//     products over the zero-filled sample grid;
//   - the Gram matrix depends only on index differences (equispaced
//     frequencies), so one (2P1-1) x (2P2-1) table serves all pairs.
// Sweeps cycle over a screened working set; between rounds the full
// correlation vector is recomputed exactly and violators join the set.
// A short geometric lambda path warm-starts the target problem.
class WorkingSetSolver {
public:
    WorkingSetSolver(const SampledSignal& signal, const DictionaryGrid& grid)
        : scheme_(signal.scheme), grid_(grid) {
        const auto axes = internal::extract_axis_times(scheme_);
        if (!axes)
            throw std::invalid_argument(
                "lasso::solve requires grid-consistent sampling times (t a function of the "
                "grid index per axis)");
        axes_ = *axes;

        m_ = signal.values.size();
        sqrt_m_ = std::sqrt(static_cast<double>(m_));
        p1_ = grid.p1();
        p2_ = grid.p2();
        np_ = p1_ * p2_;

        x_ = signal.values;
        e1_ = internal::phase_matrix(grid.omega1_vals, axes_.t1, -1.0);
        e2_ = internal::phase_matrix(grid.omega2_vals, axes_.t2, -1.0);
        build_difference_table();

        i1_.resize(m_);
        i2_.resize(m_);
        for (std::size_t n = 0; n < m_; ++n) {
            i1_[n] = scheme_.points[n].i1;
            i2_[n] = scheme_.points[n].i2;
        }

        g_.assign(np_, Complex{0.0, 0.0});
        c_full_.assign(np_, Complex{0.0, 0.0});
        in_w_.assign(np_, 0);
    }

    struct Result {
        int sweeps = 0;
        double objective = 0.0;
        double kkt = 0.0;
        std::vector<double> sweep_objectives;
        std::vector<Complex> coefficients;
        double atom_norm = 1.0;
    };

    Result run(double lambda, const SolverOptions& opts) {
        const double thr_final = lambda / 2.0;
        refresh();

        double cmax = 0.0;
        for (const auto& c : c_full_)
            cmax = std::max(cmax, std::abs(c));

        // Geometric warm-start path down to the target lambda.
        std::vector<double> stages;
        const double lam_max = 2.0 * cmax;
        if (lam_max > lambda) {
            constexpr int kStages = 4;
            const double ratio = std::pow(lam_max / lambda, 1.0 / kStages);
            for (int j = kStages - 1; j >= 1; --j)
                stages.push_back(lambda * std::pow(ratio, j));
        }
        stages.push_back(lambda);

        Result result;
        result.atom_norm = sqrt_m_;
        const double kkt_abs = opts.kkt_tolerance * lambda;

        for (std::size_t si = 0; si < stages.size(); ++si) {
            const bool final_stage = si + 1 == stages.size();
            const double lam_s = stages[si];
            const double thr_s = lam_s / 2.0;
            const double exit_target = final_stage ? kkt_abs : 0.05 * lam_s;
            const double inner_target = final_stage ? 0.5 * kkt_abs : 0.05 * lam_s;

            constexpr int kMaxRounds = 100;
            for (int round = 0; round < kMaxRounds; ++round) {
                // Screen on the fresh correlations.
                std::vector<std::pair<double, std::size_t>> violators;
                for (std::size_t m = 0; m < np_; ++m)
                    if (!in_w_[m] && std::abs(c_full_[m]) > thr_s)
                        violators.emplace_back(std::abs(c_full_[m]), m);

                if (violators.empty() && full_kkt(thr_s) <= exit_target)
                    break;

                std::sort(violators.begin(), violators.end(), [](const auto& a, const auto& b) {
                    if (a.first != b.first) return a.first > b.first;
                    return a.second < b.second;
                });
                constexpr std::size_t kMaxAddPerRound = 256;
                for (std::size_t v = 0; v < std::min(violators.size(), kMaxAddPerRound); ++v) {
                    w_.push_back(violators[v].second);
                    in_w_[violators[v].second] = 1;
                }
                std::sort(w_.begin(), w_.end());
                if (w_.empty()) break;

                build_working_gram();
                cw_.resize(w_.size());
                for (std::size_t i = 0; i < w_.size(); ++i)
                    cw_[i] = c_full_[w_[i]];

                // Cyclic coordinate descent on the working set.
                double prev_obj = q_ + lam_s * l1_;
                int stagnant = 0;
                while (result.sweeps < opts.max_iterations) {
                    sweep(thr_s);
                    ++result.sweeps;
                    if (final_stage)
                        result.sweep_objectives.push_back(q_ + lambda * l1_);
                    const double obj = q_ + lam_s * l1_;
                    if (working_kkt(thr_s) <= inner_target) break;
                    if (std::abs(prev_obj - obj) <=
                        opts.tolerance * std::max(prev_obj, 1e-300)) {
                        if (++stagnant >= 3) break;
                    } else {
                        stagnant = 0;
                    }
                    prev_obj = obj;
                }

                refresh();
                prune_working_set();
                if (result.sweeps >= opts.max_iterations) break;
            }
            if (result.sweeps >= opts.max_iterations && !final_stage)
                continue; // still report against the target lambda below
        }

        result.objective = q_ + lambda * l1_;
        result.kkt = full_kkt(thr_final);
        result.coefficients = g_;
        return result;
    }

private:
    void build_difference_table() {
        std::vector<double> diff1(2 * p1_ - 1), diff2(2 * p2_ - 1);
        const double s1 = grid_.spacing1(), s2 = grid_.spacing2();
        for (std::size_t i = 0; i < diff1.size(); ++i)
            diff1[i] = (static_cast<double>(i) - static_cast<double>(p1_ - 1)) * s1;
        for (std::size_t i = 0; i < diff2.size(); ++i)
            diff2[i] = (static_cast<double>(i) - static_cast<double>(p2_ - 1)) * s2;

        const Eigen::MatrixXcd d1 = internal::phase_matrix(diff1, axes_.t1, 1.0);
        const Eigen::MatrixXcd d2 = internal::phase_matrix(diff2, axes_.t2, 1.0);
        const Eigen::MatrixXcd ones =
            internal::zero_fill(scheme_, std::vector<Complex>(m_, Complex{1.0, 0.0}));
        const Eigen::MatrixXcd t =
            internal::transform2d(d1, ones, d2) / static_cast<double>(m_);

        w2_ = 2 * p2_ - 1;
        tdiff_.resize((2 * p1_ - 1) * w2_);
        for (std::size_t r = 0; r < 2 * p1_ - 1; ++r)
            for (std::size_t c = 0; c < w2_; ++c)
                tdiff_[r * w2_ + c] =
                    t(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }

    // <a_j, a_m> for atom indices j, m (index layout m = m1 * P2 + m2).
    Complex gram_entry(std::size_t j, std::size_t m) const {
        const long d1 = static_cast<long>(m / p2_) - static_cast<long>(j / p2_);
        const long d2 = static_cast<long>(m % p2_) - static_cast<long>(j % p2_);
        const auto r = static_cast<std::size_t>(d1 + static_cast<long>(p1_) - 1);
        const auto c = static_cast<std::size_t>(d2 + static_cast<long>(p2_) - 1);
        return tdiff_[r * w2_ + c];
    }

    void build_working_gram() {
        const auto n = static_cast<Eigen::Index>(w_.size());
        gram_.resize(n, n);
        for (Eigen::Index col = 0; col < n; ++col)
            for (Eigen::Index row = 0; row < n; ++row)
                gram_(row, col) = gram_entry(w_[static_cast<std::size_t>(row)],
                                             w_[static_cast<std::size_t>(col)]);
    }

    // Rebuild the residual from the support and recompute the full
    // correlation vector, ||r||^2 and the l1 mass exactly.
    void refresh() {
        std::vector<Complex> r = x_;
        l1_ = 0.0;
        for (std::size_t m = 0; m < np_; ++m) {
            if (g_[m] == Complex{0.0, 0.0}) continue;
            l1_ += std::abs(g_[m]);
            const auto m1 = static_cast<Eigen::Index>(m / p2_);
            const auto m2 = static_cast<Eigen::Index>(m % p2_);
            for (std::size_t n = 0; n < m_; ++n) {
                const Complex a =
                    std::conj(e1_(m1, i1_[n])) * std::conj(e2_(m2, i2_[n])) / sqrt_m_;
                r[n] -= g_[m] * a;
            }
        }
        q_ = 0.0;
        for (const auto& v : r)
            q_ += std::norm(v);

        const Eigen::MatrixXcd rg = internal::zero_fill(scheme_, r);
        const Eigen::MatrixXcd out = internal::transform2d(e1_, rg, e2_) / sqrt_m_;
        for (std::size_t m1 = 0; m1 < p1_; ++m1)
            for (std::size_t m2 = 0; m2 < p2_; ++m2)
                c_full_[m1 * p2_ + m2] =
                    out(static_cast<Eigen::Index>(m1), static_cast<Eigen::Index>(m2));
    }

    void prune_working_set() {
        for (std::size_t m : w_)
            in_w_[m] = 0;
        w_.erase(std::remove_if(w_.begin(), w_.end(),
                                [&](std::size_t m) { return g_[m] == Complex{0.0, 0.0}; }),
                 w_.end());
        for (std::size_t m : w_)
            in_w_[m] = 1;
    }

    // One exact cyclic pass over the working set (ascending atom index).
    void sweep(double thr) {
        const auto na = w_.size();
        for (std::size_t pos = 0; pos < na; ++pos) {
            const std::size_t m = w_[pos];
            const Complex u = g_[m] + cw_[pos];
            const Complex gn = soft_threshold(u, thr);
            if (gn == g_[m]) continue;
            const Complex delta = gn - g_[m];
            q_ += -2.0 * (std::conj(delta) * cw_[pos]).real() + std::norm(delta);
            l1_ += std::abs(gn) - std::abs(g_[m]);
            g_[m] = gn;
            const Complex* col = gram_.data() + static_cast<std::ptrdiff_t>(pos * na);
            for (std::size_t i = 0; i < na; ++i)
                cw_[i] -= delta * col[i];
        }
    }

    double working_kkt(double thr) const {
        double viol = 0.0;
        for (std::size_t pos = 0; pos < w_.size(); ++pos) {
            const std::size_t m = w_[pos];
            if (g_[m] == Complex{0.0, 0.0}) {
                viol = std::max(viol, std::abs(cw_[pos]) - thr);
            } else {
                const Complex target = thr * g_[m] / std::abs(g_[m]);
                viol = std::max(viol, std::abs(cw_[pos] - target));
            }
        }
        return std::max(viol, 0.0);
    }

    // Violation over every atom, from the fresh full correlations.
    double full_kkt(double thr) const {
        double viol = 0.0;
        for (std::size_t m = 0; m < np_; ++m) {
            if (g_[m] == Complex{0.0, 0.0}) {
                viol = std::max(viol, std::abs(c_full_[m]) - thr);
            } else {
                const Complex target = thr * g_[m] / std::abs(g_[m]);
                viol = std::max(viol, std::abs(c_full_[m] - target));
            }
        }
        return std::max(viol, 0.0);
    }

    SamplingScheme scheme_;
    DictionaryGrid grid_;
    internal::AxisTimes axes_;

    std::size_t m_ = 0;
    double sqrt_m_ = 0.0;
    std::size_t p1_ = 0, p2_ = 0, np_ = 0;

    std::vector<Complex> x_;
    Eigen::MatrixXcd e1_, e2_;
    std::vector<Complex> tdiff_;
    std::size_t w2_ = 0;
    std::vector<int> i1_, i2_;

    std::vector<Complex> g_;
    std::vector<Complex> c_full_;
    std::vector<std::size_t> w_;
    std::vector<std::uint8_t> in_w_;
    std::vector<Complex> cw_;
    Eigen::MatrixXcd gram_;
    double q_ = 0.0;
    double l1_ = 0.0;
};

} // namespace

SparseSolution solve(const SampledSignal& signal, const DictionaryGrid& grid,
                     const SolverOptions& opts) {
    if (signal.values.empty())
        throw std::invalid_argument("lasso::solve requires a non-empty signal");
    if (signal.values.size() != signal.scheme.points.size())
        throw std::invalid_argument("signal value count does not match its scheme");
    if (!(opts.lambda > 0.0))
        throw std::invalid_argument("lambda must be > 0");
    if (!(opts.tolerance > 0.0))
        throw std::invalid_argument("tolerance must be > 0");
    if (!grid.undamped())
        throw std::invalid_argument(
            "lasso::solve works on the undamped dictionary; damped atoms are never "
            "materialized");

    SparseSolution sol;
    sol.grid = grid;

    double scale = 0.0;
    for (const auto& v : signal.values)
        scale = std::max(scale, std::abs(v));
    if (scale == 0.0) {
        sol.amplitudes.assign(grid.freq_atoms(), Complex{0.0, 0.0});
        return sol;
    }

    // Work on x/scale with lambda/scale: the same argmin up to the output
    // rescaling below, but conditioned independently of the data scale.
    SampledSignal scaled = signal;
    for (auto& v : scaled.values)
        v /= scale;
    const double lam = opts.lambda / scale;

    WorkingSetSolver solver(scaled, grid);
    const auto result = solver.run(lam, opts);

    sol.iterations = result.sweeps;
    sol.objective = result.objective * scale * scale;
    sol.kkt_violation = result.kkt * scale;
    sol.sweep_objectives.reserve(result.sweep_objectives.size());
    for (double v : result.sweep_objectives)
        sol.sweep_objectives.push_back(v * scale * scale);

    // Amplitudes back in the raw-atom convention of the signal model.
    sol.amplitudes.resize(grid.freq_atoms());
    for (std::size_t m = 0; m < result.coefficients.size(); ++m)
        sol.amplitudes[m] = result.coefficients[m] * scale / result.atom_norm;
    return sol;
}

std::vector<SelectedPeak> select_components(const SparseSolution& solution, int k) {
    if (k < 1)
        throw std::invalid_argument("select_components requires k >= 1");
    const std::size_t p1 = solution.grid.p1();
    const std::size_t p2 = solution.grid.p2();
    if (solution.amplitudes.size() != p1 * p2)
        throw std::invalid_argument("solution amplitude layout does not match its grid");

    std::vector<double> mag(solution.amplitudes.size());
    for (std::size_t i = 0; i < mag.size(); ++i)
        mag[i] = std::abs(solution.amplitudes[i]);

    std::vector<std::tuple<double, std::size_t, std::size_t>> maxima;
    for (std::size_t m1 = 0; m1 < p1; ++m1)
        for (std::size_t m2 = 0; m2 < p2; ++m2) {
            const double v = mag[m1 * p2 + m2];
            if (v <= 0.0) continue;
            bool is_max = true;
            for (int d1 = -1; d1 <= 1 && is_max; ++d1)
                for (int d2 = -1; d2 <= 1 && is_max; ++d2) {
                    if (d1 == 0 && d2 == 0) continue;
                    const auto b1 = static_cast<long>(m1) + d1;
                    const auto b2 = static_cast<long>(m2) + d2;
                    if (b1 < 0 || b2 < 0 || b1 >= static_cast<long>(p1) ||
                        b2 >= static_cast<long>(p2))
                        continue;
                    if (mag[static_cast<std::size_t>(b1) * p2 + static_cast<std::size_t>(b2)] > v)
                        is_max = false;
                }
            if (is_max) maxima.emplace_back(v, m1, m2);
        }

    if (maxima.size() < static_cast<std::size_t>(k))
        throw std::runtime_error("select_components: found " + std::to_string(maxima.size()) +
                                 " local maxima, need " + std::to_string(k));

    std::sort(maxima.begin(), maxima.end(), [&](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        const double aw1 = solution.grid.omega1_vals[std::get<1>(a)];
        const double bw1 = solution.grid.omega1_vals[std::get<1>(b)];
        if (aw1 != bw1) return aw1 < bw1;
        return solution.grid.omega2_vals[std::get<2>(a)] <
               solution.grid.omega2_vals[std::get<2>(b)];
    });

    std::vector<SelectedPeak> peaks;
    peaks.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const auto& [v, m1, m2] = maxima[static_cast<std::size_t>(i)];
        peaks.push_back({solution.grid.omega1_vals[m1], solution.grid.omega2_vals[m2],
                         solution.amplitudes[m1 * p2 + m2]});
    }
    return peaks;
}

std::vector<Complex> debias_amplitudes(const SampledSignal& signal,
                                       const std::vector<std::pair<double, double>>& frequencies) {
    if (frequencies.empty())
        return {};
    const auto m = static_cast<Eigen::Index>(signal.values.size());
    const auto k = static_cast<Eigen::Index>(frequencies.size());

    Eigen::MatrixXcd a(m, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const auto& [w1, w2] = frequencies[static_cast<std::size_t>(j)];
        for (Eigen::Index n = 0; n < m; ++n) {
            const auto& p = signal.scheme.points[static_cast<std::size_t>(n)];
            a(n, j) = std::exp(Complex{0.0, w1 * p.t1 + w2 * p.t2});
        }
    }
    Eigen::Map<const Eigen::VectorXcd> b(signal.values.data(), m);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
    if (qr.rank() < k)
        throw std::invalid_argument("debias_amplitudes: selected atoms are rank-deficient on "
                                    "this sampling scheme");
    const Eigen::VectorXcd amps = qr.solve(b);
    return {amps.data(), amps.data() + k};
}

SampledSignal reconstruct_uniform(const std::vector<SelectedPeak>& selected,
                                  std::pair<int, int> grid_shape,
                                  std::pair<double, double> dt) {
    if (selected.empty())
        throw std::invalid_argument("reconstruct_uniform requires a non-empty selection");
    ComponentSet comps;
    comps.components.reserve(selected.size());
    for (const auto& s : selected)
        comps.components.push_back({s.omega1, s.omega2, 0.0, 0.0, s.amplitude});
    return synthesize(comps,
                      make_uniform_grid(grid_shape.first, grid_shape.second, dt.first, dt.second));
}

std::vector<std::pair<double, double>> estimate_damping(
    const SampledSignal& reconstructed, const std::vector<std::pair<double, double>>& peaks,
    int pad) {
    const auto& scheme = reconstructed.scheme;
    if (reconstructed.values.empty())
        throw std::invalid_argument("estimate_damping requires a non-empty signal");
    if (pad < std::max(scheme.n1, scheme.n2))
        throw std::invalid_argument("pad must be at least the grid size");
    const auto axes = internal::extract_axis_times(scheme);
    if (!axes)
        throw std::invalid_argument("estimate_damping requires grid-consistent sampling times");

    const std::size_t npad = static_cast<std::size_t>(pad);
    const double step1 = 2.0 * M_PI / (static_cast<double>(pad) * scheme.dt1);
    const double step2 = 2.0 * M_PI / (static_cast<double>(pad) * scheme.dt2);

    const auto dtft_point = [&](double w1, double w2) {
        Complex acc{0.0, 0.0};
        for (std::size_t n = 0; n < reconstructed.values.size(); ++n) {
            const auto& p = scheme.points[n];
            const double phase = -w1 * p.t1 - w2 * p.t2;
            acc += reconstructed.values[n] * Complex{std::cos(phase), std::sin(phase)};
        }
        return acc;
    };

    // Full padded-FFT slice along one axis with the other frequency fixed:
    // collapse the fixed axis once, then a 1D transform at all pad bins.
    const auto slice_power = [&](int along_axis, double fixed_w) {
        std::vector<Complex> collapsed(
            static_cast<std::size_t>(along_axis == 1 ? scheme.n1 : scheme.n2),
            Complex{0.0, 0.0});
        for (std::size_t n = 0; n < reconstructed.values.size(); ++n) {
            const auto& p = scheme.points[n];
            const double t_fixed = along_axis == 1 ? p.t2 : p.t1;
            const double phase = -fixed_w * t_fixed;
            collapsed[static_cast<std::size_t>(along_axis == 1 ? p.i1 : p.i2)] +=
                reconstructed.values[n] * Complex{std::cos(phase), std::sin(phase)};
        }
        const auto& times = along_axis == 1 ? axes->t1 : axes->t2;
        const double step = along_axis == 1 ? step1 : step2;
        std::vector<double> bins(npad);
        for (std::size_t j = 0; j < npad; ++j)
            bins[j] = static_cast<double>(j) * step;
        const auto vals = internal::dtft1(collapsed, times, bins, -1.0);
        std::vector<double> power(npad);
        for (std::size_t j = 0; j < npad; ++j)
            power[j] = std::norm(vals[j]);
        return power;
    };

    std::vector<std::pair<double, double>> betas;
    betas.reserve(peaks.size());
    const double two_pi = 2.0 * M_PI;

    for (const auto& [w1, w2] : peaks) {
        const auto wrap = [&](long j) {
            const long r = j % pad;
            return static_cast<std::size_t>(r < 0 ? r + pad : r);
        };
        const long j1 = static_cast<long>(std::llround(w1 / step1));
        const long j2 = static_cast<long>(std::llround(w2 / step2));
        const double bw1 = std::fmod(static_cast<double>(wrap(j1)) * step1, two_pi);
        const double bw2 = std::fmod(static_cast<double>(wrap(j2)) * step2, two_pi);

        const double center = std::norm(dtft_point(bw1, bw2));
        if (center <= 0.0)
            throw std::invalid_argument("estimate_damping: peak power is zero");
        for (int d1 = -1; d1 <= 1; ++d1)
            for (int d2 = -1; d2 <= 1; ++d2) {
                if (d1 == 0 && d2 == 0) continue;
                const double nb1 = static_cast<double>(wrap(j1 + d1)) * step1;
                const double nb2 = static_cast<double>(wrap(j2 + d2)) * step2;
                if (std::norm(dtft_point(nb1, nb2)) > center)
                    throw std::invalid_argument(
                        "estimate_damping: peak is not a local maximum of the padded spectrum");
            }

        // Recentre each periodic slice on the peak bin so the half-max
        // search never crosses the wrap point.
        const auto measure = [&](int axis, long jpeak, double fixed_w, double step) {
            const auto power = slice_power(axis, fixed_w);
            const std::size_t half = npad / 2;
            std::vector<double> window(npad), waxis(npad);
            for (std::size_t n = 0; n < npad; ++n) {
                window[n] = power[wrap(jpeak - static_cast<long>(half) + static_cast<long>(n))];
                waxis[n] = (static_cast<double>(jpeak) +
                            (static_cast<double>(n) - static_cast<double>(half))) *
                           step;
            }
            return fwhm_from_power_slice(window, waxis, half).first;
        };

        const double width1 = measure(1, j1, bw2, step1);
        const double width2 = measure(2, j2, bw1, step2);
        betas.emplace_back(width1 / 2.0, width2 / 2.0);
    }
    return betas;
}

} // namespace sparsespec
