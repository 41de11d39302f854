// ricdyn: scenario-driven front end for the Gaussian wave-packet library.
//
// Exit codes: 0 success, 1 parse error, 2 validation error, 3 numerical
// failure or (for `check`) a violated invariant.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "ricdyn/app/io.hpp"
#include "ricdyn/app/scenario.hpp"
#include "ricdyn/app/simulation.hpp"
#include "ricdyn/app/svg.hpp"
#include "ricdyn/ermakov.hpp"
#include "ricdyn/riccati.hpp"
#include "ricdyn/uncertainty.hpp"
#include "ricdyn/wigner.hpp"

namespace fs = std::filesystem;
using namespace ricdyn;
using namespace ricdyn::app;

namespace {

constexpr int kExitParse = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

fs::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Validation, "cannot create output directory " + dir);
    return fs::path(dir);
}

int cmd_evolve(const std::string& file, const std::string& out_dir, bool plots) {
    const Scenario sc = load_scenario(file);
    const Simulation sim = simulate(sc);
    const Summary sum = summarize(sc, sim);
    const fs::path dir = prepare_dir(out_dir);

    std::ostringstream csv;
    write_timeseries_csv(csv, sc, sim);
    write_file_atomic(dir / (sc.name + ".csv"), csv.str());
    write_file_atomic(dir / (sc.name + "_summary.json"), summary_json(sc, sum));

    if (plots) {
        LinePlot unc{sc.name + ": uncertainties", "t", "variance", {}, {}};
        std::vector<double> sx, sp, sxp, cor;
        for (const auto& u : sim.moments) {
            sx.push_back(u.sigma_xx);
            sp.push_back(u.sigma_pp);
            sxp.push_back(u.sigma_xp);
            cor.push_back(correlation_coefficient(u));
        }
        unc.series = {{"sigma_x^2", sim.times, sx, "#1f77b4"}, {"sigma_p^2", sim.times, sp, "#d62728"}};
        if (sc.omega_ref() > 0.0) {
            unc.lines = {{sum.position_squeezing_level, "hbar/(2 m omega0)", "#1f77b4"},
                         {sum.momentum_squeezing_level, "hbar m omega0/2", "#d62728"}};
        }
        write_file_atomic(dir / (sc.name + "_uncertainty.svg"), render_line_plot(unc));

        LinePlot cp{sc.name + ": correlation", "t", "Cor", {{"Cor", sim.times, cor, "#2ca02c"}}, {}};
        write_file_atomic(dir / (sc.name + "_correlation.svg"), render_line_plot(cp));
        LinePlot xp{sc.name + ": covariance", "t", "sigma_xp", {{"sigma_xp", sim.times, sxp, "#9467bd"}}, {}};
        write_file_atomic(dir / (sc.name + "_covariance.svg"), render_line_plot(xp));
    }
    std::cout << sc.name << ": " << sim.times.size() << " samples, max SR defect " << sum.max_sr_defect
              << ", invariant drift " << sum.invariant_drift << ", Cor max " << sum.correlation.max << "\n";
    return 0;
}

int cmd_vector_field(const std::string& kind, double omega0, std::size_t n, const std::string& out) {
    if (!(omega0 > 0.0)) throw Error(ErrorKind::Validation, "--omega0 must be > 0");
    if (n < 2) throw Error(ErrorKind::Validation, "--n must be >= 2");
    FieldPlot plot;
    const double period = std::numbers::pi / omega0;
    const auto grid = uniform_grid(0.0, period, 240);
    if (kind == "riccati") {
        plot.title = fmt::format("Riccati field, omega0 = {:g}", omega0);
        plot.x_label = "C_R";
        plot.y_label = "C_I";
        plot.field = riccati_vector_field(omega0, {-2.0 * omega0, 2.0 * omega0}, {-2.0 * omega0, 2.0 * omega0}, n);
        plot.fixed_points = {{0.0, omega0, "(0, +omega0)"}, {0.0, -omega0, "(0, -omega0)"}};
        for (double k : {0.3, 0.5, 0.7, 1.4, 2.0}) {
            std::vector<std::array<double, 2>> up, down;
            for (double t : grid) {
                const auto c = riccati_closed_form(omega0, {0.0, k * omega0}, t);
                up.push_back({c.c_r, c.c_i});
                down.push_back({c.c_r, -c.c_i});
            }
            plot.orbits.push_back(up);
            plot.orbits.push_back(down);
        }
    } else {
        const double a_star = 1.0 / std::sqrt(omega0);
        plot.title = fmt::format("Ermakov field, omega0 = {:g}", omega0);
        plot.x_label = "alpha";
        plot.y_label = "alpha'";
        plot.field = ermakov_vector_field(omega0, {0.1 * a_star, 3.0 * a_star}, {-1.5 * std::sqrt(omega0), 1.5 * std::sqrt(omega0)}, n);
        plot.fixed_points = {{a_star, 0.0, "(1/sqrt(omega0), 0)"}};
        const SystemSpec s{1.0, 1.0, FrequencyProfile::constant(omega0)};
        for (double k : {0.4, 0.6, 0.8, 1.3, 1.8}) {
            std::vector<std::array<double, 2>> orbit;
            for (const auto& e : integrate_ermakov(s, {k * a_star, 0.0}, grid)) orbit.push_back({e.alpha, e.alpha_dot});
            plot.orbits.push_back(orbit);
        }
    }
    const fs::path path = out.empty() ? fs::path(kind + "_field.svg") : fs::path(out);
    if (path.has_parent_path()) prepare_dir(path.parent_path().string());
    write_file_atomic(path, render_vector_field(plot));
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_wigner(const std::string& file, const std::string& times_text, const std::string& out_dir, bool csv) {
    const Scenario sc = load_scenario(file);
    const std::vector<double> times = times_text.empty() ? sc.wigner.times : parse_time_list(times_text);
    if (times.empty()) throw Error(ErrorKind::Validation, "no snapshot times: pass --times or set wigner.times");
    const SystemSpec& s = sc.system;
    const auto samples = phase_space_samples(sc, times);
    const fs::path dir = prepare_dir(out_dir);
    const double w_ref = sc.omega_ref();
    const double e0 = classical_energy(s, w_ref, sc.centroid);

    nlohmann::ordered_json report;
    report["scenario"] = sc.name;
    report["classical_energy"] = e0;
    report["snapshots"] = nlohmann::ordered_json::array();
    WignerFigure fig;
    fig.title = sc.name + ": Wigner function";
    fig.system = s;
    fig.omega_ref = w_ref;
    fig.energy = e0;
    double x_lo = HUGE_VAL, x_hi = -HUGE_VAL, p_lo = HUGE_VAL, p_hi = -HUGE_VAL;

    for (std::size_t k = 0; k < samples.size(); ++k) {
        const auto& smp = samples[k];
        const auto spec = default_grid_spec(s, smp.centroid, smp.moments, sc.wigner.n_sigma, sc.wigner.n);
        const auto grid = wigner_grid(s, smp.centroid, smp.moments, spec);
        const auto peak = grid.peak();
        const auto mg = marginals(grid);
        const auto mx = density_moments(mg.position, spec.x.lo, spec.dx());
        const auto mp = density_moments(mg.momentum, spec.p.lo, spec.dp());
        const double energy = classical_energy(s, w_ref, smp.centroid);

        std::ostringstream bin(std::ios::binary);
        write_grid_binary(bin, grid);
        const std::string stem = fmt::format("{}_wigner_{:02d}", sc.name, k);
        write_file_atomic(dir / (stem + ".rdwg"), bin.str());
        if (csv) {
            std::ostringstream text;
            write_grid_csv(text, grid);
            write_file_atomic(dir / (stem + ".csv"), text.str());
        }
        report["snapshots"].push_back({
            {"t", smp.t},
            {"grid", stem + ".rdwg"},
            {"centroid", {{"x", smp.centroid.eta}, {"p", smp.centroid.momentum(s.mass)}}},
            {"grid_peak", {{"x", peak.x}, {"p", peak.p}, {"value", peak.value}}},
            {"classical_energy", energy},
            {"normalization", grid.normalization()},
            {"marginal_variance", {{"x", mx.variance}, {"p", mp.variance}}},
            {"moments", {{"sigma_xx", smp.moments.sigma_xx}, {"sigma_pp", smp.moments.sigma_pp},
                         {"sigma_xp", smp.moments.sigma_xp}}},
        });
        fig.panels.push_back({smp.t, smp.centroid, smp.moments});
        x_lo = std::min(x_lo, smp.centroid.eta - 4.0 * std::sqrt(smp.moments.sigma_xx));
        x_hi = std::max(x_hi, smp.centroid.eta + 4.0 * std::sqrt(smp.moments.sigma_xx));
        p_lo = std::min(p_lo, smp.centroid.momentum(s.mass) - 4.0 * std::sqrt(smp.moments.sigma_pp));
        p_hi = std::max(p_hi, smp.centroid.momentum(s.mass) + 4.0 * std::sqrt(smp.moments.sigma_pp));
    }
    const double t_last = *std::max_element(times.begin(), times.end());
    if (t_last > 0.0) {
        const auto grid = uniform_grid(0.0, t_last, 1000);
        const auto path = integrate_centroid(s, sc.centroid, grid, sc.integrator);
        for (std::size_t i = 0; i < grid.size(); ++i) fig.trajectory.push_back({grid[i], path[i].eta, path[i].momentum(s.mass)});
    }
    fig.x = {x_lo, x_hi};
    fig.p = {p_lo, p_hi};
    write_file_atomic(dir / (sc.name + "_wigner.svg"), render_wigner_figure(fig));
    write_file_atomic(dir / (sc.name + "_wigner.json"), report.dump(2) + "\n");
    std::cout << sc.name << ": " << samples.size() << " Wigner snapshots written to " << dir.string() << "\n";
    return 0;
}

int cmd_propagate(const std::string& file, const std::string& out_dir) {
    const Scenario sc = load_scenario(file);
    const Simulation sim = simulate(sc);
    const auto k = compare_kernel(sc, sim);
    const fs::path dir = prepare_dir(out_dir);
    write_file_atomic(dir / (sc.name + "_kernel.json"), kernel_report_json(sc, k));
    std::cout << sc.name << ": kernel vs direct over " << k.compared << " times (" << k.focal_skipped
              << " near caustics skipped): max C error " << k.max_c_error << ", max eta error " << k.max_eta_error
              << ", TDSE residual " << k.tdse_residual << "\n";
    return 0;
}

int cmd_check(const std::string& file) {
    const Scenario sc = load_scenario(file);
    const Simulation sim = simulate(sc);
    int failed = 0;
    for (const auto& r : run_checks(sc, sim)) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " " << r.value << " (limit " << r.threshold << ")\n";
        if (!r.pass) ++failed;
    }
    if (failed > 0) {
        std::cerr << "ricdyn: " << sc.name << ": " << failed << " check(s) failed\n";
        return kExitNumerical;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian wave packets in time-dependent harmonic potentials"};
    app.require_subcommand(1);

    std::string scenario_file, out_dir = ".", times, field_kind, field_out;
    bool no_plots = false, csv = false;
    double omega0 = 1.0;
    std::size_t n_field = 21;

    auto* evolve = app.add_subcommand("evolve", "time series CSV, summary JSON and trace plots");
    evolve->add_option("scenario", scenario_file, "scenario file (.toml or .json)")->required();
    evolve->add_option("-o,--out", out_dir, "output directory");
    evolve->add_flag("--no-plots", no_plots, "skip the SVG traces");

    auto* field = app.add_subcommand("vector-field", "phase-space vector field as SVG");
    field->add_option("kind", field_kind, "riccati or ermakov")
        ->required()
        ->check(CLI::IsMember({"riccati", "ermakov"}));
    field->add_option("--omega0", omega0, "constant frequency");
    field->add_option("--n", n_field, "arrows per axis");
    field->add_option("-o,--out", field_out, "output SVG path");

    auto* wig = app.add_subcommand("wigner", "Wigner grids and heatmaps at chosen times");
    wig->add_option("scenario", scenario_file, "scenario file")->required();
    wig->add_option("--times", times, "comma-separated times, e.g. 0,pi/4,pi/2");
    wig->add_option("-o,--out", out_dir, "output directory");
    wig->add_flag("--csv", csv, "also write each grid as CSV");

    auto* prop = app.add_subcommand("propagate", "kernel-evolved packet against direct evolution");
    prop->add_option("scenario", scenario_file, "scenario file")->required();
    prop->add_option("-o,--out", out_dir, "output directory");

    auto* check = app.add_subcommand("check", "run the invariant suite; exit 3 on violation");
    check->add_option("scenario", scenario_file, "scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "ricdyn: " << e.what() << "\n";
        return kExitParse;
    }

    try {
        if (*evolve) return cmd_evolve(scenario_file, out_dir, !no_plots);
        if (*field) return cmd_vector_field(field_kind, omega0, n_field, field_out);
        if (*wig) return cmd_wigner(scenario_file, times, out_dir, csv);
        if (*prop) return cmd_propagate(scenario_file, out_dir);
        if (*check) return cmd_check(scenario_file);
    } catch (const Error& e) {
        std::cerr << "ricdyn: " << to_string(e.kind()) << ": " << e.what() << "\n";
        if (e.kind() == ErrorKind::Parse) return kExitParse;
        return e.is_numerical() ? kExitNumerical : kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "ricdyn: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
