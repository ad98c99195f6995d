#include "sparsespec/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sparsespec/bench.hpp"
#include "sparsespec/errors.hpp"
#include "sparsespec/estimators.hpp"
#include "sparsespec/fourier.hpp"
#include "sparsespec/io.hpp"
#include "sparsespec/rng.hpp"
#include "sparsespec/version.hpp"

namespace sparsespec {

namespace {

struct UsageError {
    std::string message;
};

std::pair<double, double> parse_range(const std::string& s, const char* flag) {
    const auto pos = s.find(':');
    if (pos == std::string::npos || pos == 0 || pos + 1 == s.size())
        throw UsageError{std::string(flag) + " expects lo:hi, got '" + s + "'"};
    try {
        return {std::stod(s.substr(0, pos)), std::stod(s.substr(pos + 1))};
    } catch (const std::exception&) {
        throw UsageError{std::string(flag) + " expects numeric lo:hi, got '" + s + "'"};
    }
}

std::pair<int, int> parse_shape(const std::string& s, const char* flag) {
    const auto pos = s.find('x');
    if (pos == std::string::npos || pos == 0 || pos + 1 == s.size())
        throw UsageError{std::string(flag) + " expects AxB, got '" + s + "'"};
    try {
        return {std::stoi(s.substr(0, pos)), std::stoi(s.substr(pos + 1))};
    } catch (const std::exception&) {
        throw UsageError{std::string(flag) + " expects integer AxB, got '" + s + "'"};
    }
}

SampledSignal subsample_file_signal(const SampledSignal& signal, std::size_t count,
                                    std::optional<std::pair<int, int>> corner,
                                    std::uint64_t seed) {
    std::map<std::pair<int, int>, std::size_t> index;
    for (std::size_t n = 0; n < signal.scheme.points.size(); ++n)
        index[{signal.scheme.points[n].i1, signal.scheme.points[n].i2}] = n;

    SampledSignal out;
    out.scheme = subsample_random(signal.scheme, count, corner, seed);
    out.noise_sigma = signal.noise_sigma;
    out.values.reserve(out.scheme.points.size());
    for (const auto& p : out.scheme.points)
        out.values.push_back(signal.values[index.at({p.i1, p.i2})]);
    return out;
}

} // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"sparse spectral estimation of 2D damped exponentials"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "synthesize a (noisy) signal on a full grid");
    int sim_k = 0;
    std::string sim_components_in;
    int sim_n1 = 40, sim_n2 = 40;
    double sim_dt1 = 1.0, sim_dt2 = 1.0;
    std::string sim_freq_range = "0.1:0.97", sim_damp_range = "0.019:0.035";
    double sim_noise = 0.0;
    std::uint64_t sim_seed = 0;
    std::string sim_out, sim_scene_out;
    sim->add_option("--k", sim_k, "draw a random scene with k components");
    sim->add_option("--components-in", sim_components_in, "synthesize this component CSV");
    sim->add_option("--n1", sim_n1, "grid points, dimension 1")->capture_default_str();
    sim->add_option("--n2", sim_n2, "grid points, dimension 2")->capture_default_str();
    sim->add_option("--dt1", sim_dt1, "sample spacing, dimension 1")->capture_default_str();
    sim->add_option("--dt2", sim_dt2, "sample spacing, dimension 2")->capture_default_str();
    sim->add_option("--freq-range", sim_freq_range, "random scene frequency range lo:hi")
        ->capture_default_str();
    sim->add_option("--damp-range", sim_damp_range, "random scene damping range lo:hi")
        ->capture_default_str();
    sim->add_option("--noise-fwhm", sim_noise,
                    "noise FWHM as a fraction of the largest amplitude")
        ->capture_default_str();
    sim->add_option("--seed", sim_seed, "random seed (scene and noise)")->required();
    sim->add_option("--out", sim_out, "output sample CSV")->required();
    sim->add_option("--scene-out", sim_scene_out, "write the true components here");

    // sample
    auto* smp = app.add_subcommand("sample", "subsample a full-grid CSV");
    std::string smp_in, smp_out, smp_corner;
    std::size_t smp_count = 0;
    std::uint64_t smp_seed = 0;
    smp->add_option("input", smp_in, "input sample CSV")->required();
    smp->add_option("--count", smp_count, "number of points to keep")->required();
    smp->add_option("--corner", smp_corner, "restrict draws to i1<c1 and i2<c2 (c1xc2)");
    smp->add_option("--seed", smp_seed, "random seed")->required();
    smp->add_option("--out", smp_out, "output sample CSV")->required();

    // reconstruct
    auto* rec = app.add_subcommand("reconstruct", "estimate spectral components from samples");
    std::string rec_in, rec_method, rec_grid, rec_components_out, rec_spectrum_out;
    std::string rec_freq_grid = "256x256", rec_freq_range = "0.1:0.97";
    int rec_k = 4, rec_pad = 1024, rec_axes = 1024;
    double rec_lambda = 0.4;
    rec->add_option("input", rec_in, "input sample CSV")->required();
    rec->add_option("--method", rec_method, "fourier, lasso, or sema")->required();
    rec->add_option("--k", rec_k, "number of components to recover")->required();
    rec->add_option("--lambda", rec_lambda, "l1 penalty (lasso/sema)")->capture_default_str();
    rec->add_option("--freq-grid", rec_freq_grid, "dictionary size P1xP2")
        ->capture_default_str();
    rec->add_option("--freq-range", rec_freq_range, "dictionary frequency range lo:hi")
        ->capture_default_str();
    rec->add_option("--grid", rec_grid, "reconstruction grid shape n1xn2 (default: from file)");
    rec->add_option("--pad", rec_pad, "padded transform length for damping estimates")
        ->capture_default_str();
    rec->add_option("--axes", rec_axes, "fourier evaluation axis length")->capture_default_str();
    rec->add_option("--components-out", rec_components_out, "output component CSV")->required();
    rec->add_option("--spectrum-out", rec_spectrum_out, "optional spectrum CSV");

    // bench
    auto* ben = app.add_subcommand("bench", "run a Monte-Carlo campaign");
    std::string ben_config, ben_out, ben_audit_dir;
    int ben_workers = 0;
    ben->add_option("--config", ben_config, "campaign config JSON")->required();
    ben->add_option("--out", ben_out, "results CSV")->required();
    ben->add_option("--workers", ben_workers, "worker threads (0 = all cores)")
        ->capture_default_str();
    ben->add_option("--audit-dir", ben_audit_dir, "write per-cell trial audit CSVs here");

    // version
    auto* ver = app.add_subcommand("version", "print the version");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("sparsespec");
    for (const auto& a : args)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(ver)) {
            std::cout << "sparsespec " << kVersion << "\n";
            return 0;
        }

        if (app.got_subcommand(sim)) {
            if ((sim_k > 0) == !sim_components_in.empty())
                throw UsageError{"simulate needs exactly one of --k or --components-in"};
            ComponentSet scene;
            if (sim_k > 0)
                scene = draw_random_scene(sim_k, parse_range(sim_freq_range, "--freq-range"),
                                          parse_range(sim_damp_range, "--damp-range"), sim_seed);
            else
                scene = read_components_csv(std::filesystem::path(sim_components_in));

            auto signal =
                synthesize(scene, make_uniform_grid(sim_n1, sim_n2, sim_dt1, sim_dt2));
            if (sim_noise > 0.0)
                signal = add_noise(signal, {sim_noise, mix_seed(sim_seed ^ kNoiseStreamTag)},
                                   max_amplitude(scene));
            write_samples_csv(std::filesystem::path(sim_out), signal);
            if (!sim_scene_out.empty())
                write_components_csv(std::filesystem::path(sim_scene_out), scene);
            return 0;
        }

        if (app.got_subcommand(smp)) {
            std::optional<std::pair<int, int>> corner;
            if (!smp_corner.empty()) corner = parse_shape(smp_corner, "--corner");
            const auto signal = read_samples_csv(std::filesystem::path(smp_in));
            write_samples_csv(std::filesystem::path(smp_out),
                              subsample_file_signal(signal, smp_count, corner, smp_seed));
            return 0;
        }

        if (app.got_subcommand(rec)) {
            const auto method = [&]() -> Method {
                try {
                    return method_from_name(rec_method);
                } catch (const std::invalid_argument&) {
                    throw UsageError{"--method must be fourier, lasso, or sema"};
                }
            }();
            auto signal = read_samples_csv(std::filesystem::path(rec_in));
            if (!rec_grid.empty()) {
                const auto [n1, n2] = parse_shape(rec_grid, "--grid");
                if (n1 < signal.scheme.n1 || n2 < signal.scheme.n2)
                    throw DataError("--grid is smaller than the sampled index range");
                signal.scheme.n1 = n1;
                signal.scheme.n2 = n2;
            }

            ComponentSet estimate;
            if (method == Method::fourier) {
                estimate = estimate_fourier(signal, rec_k, static_cast<std::size_t>(rec_axes));
            } else {
                const auto [p1, p2] = parse_shape(rec_freq_grid, "--freq-grid");
                const auto dict = build_grid(p1, p2, parse_range(rec_freq_range, "--freq-range"));
                if (method == Method::lasso) {
                    SolverOptions opts;
                    opts.lambda = rec_lambda;
                    estimate = estimate_lasso(signal, dict, rec_k, opts, rec_pad);
                } else {
                    SemaOptions opts;
                    opts.lambda = rec_lambda;
                    estimate = estimate_sema(signal, dict, rec_k, opts);
                }
            }
            write_components_csv(std::filesystem::path(rec_components_out), estimate);

            if (!rec_spectrum_out.empty()) {
                const auto axis1 =
                    default_axes(static_cast<std::size_t>(rec_axes), signal.scheme.dt1);
                const auto axis2 =
                    default_axes(static_cast<std::size_t>(rec_axes), signal.scheme.dt2);
                SampledSignal shown = signal;
                if (method != Method::fourier) {
                    // Display spectrum of the fitted model on the full grid.
                    ComponentSet model = estimate;
                    if (method == Method::lasso)
                        for (auto& c : model.components)
                            c.beta1 = c.beta2 = 0.0; // the lasso reconstruction is undamped
                    shown = synthesize(model,
                                       make_uniform_grid(signal.scheme.n1, signal.scheme.n2,
                                                         signal.scheme.dt1, signal.scheme.dt2));
                }
                write_spectrum_csv(std::filesystem::path(rec_spectrum_out),
                                   dtft2(shown, axis1, axis2));
            }
            return 0;
        }

        if (app.got_subcommand(ben)) {
            const auto config = read_campaign_config(std::filesystem::path(ben_config));
            const auto result = run_campaign(config, ben_workers);
            write_results_csv(std::filesystem::path(ben_out), result);
            if (!ben_audit_dir.empty()) {
                const std::filesystem::path dir(ben_audit_dir);
                std::filesystem::create_directories(dir);
                for (std::size_t i = 0; i < result.cells.size(); ++i) {
                    const auto& cell = result.cells[i];
                    char frac[32];
                    std::snprintf(frac, sizeof frac, "%g", cell.fraction);
                    std::ofstream out(dir / (std::string("audit_") + method_name(cell.method) +
                                             "_" + frac + ".csv"));
                    write_trial_outcomes_csv(out, result.outcomes[i]);
                }
            }
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.message << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace sparsespec
