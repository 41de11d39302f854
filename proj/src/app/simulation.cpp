#include "ricdyn/app/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "ricdyn/complex_newton.hpp"
#include "ricdyn/ermakov.hpp"
#include "ricdyn/propagator.hpp"
#include "ricdyn/riccati.hpp"
#include "ricdyn/uncertainty.hpp"

namespace ricdyn::app {
namespace {

using ojson = nlohmann::ordered_json;

double sigma_xx_from_alpha(const SystemSpec& s, double alpha) { return s.hbar * alpha * alpha / (2.0 * s.mass); }

void track(Extrema& e, double v, bool first) {
    if (first) {
        e = {v, v};
    } else {
        e.min = std::min(e.min, v);
        e.max = std::max(e.max, v);
    }
}

ojson extrema_json(const Extrema& e) { return ojson{{"min", e.min}, {"max", e.max}}; }

// JSON has no NaN; unavailable numbers become null.
ojson number_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

}  // namespace

Simulation simulate(const Scenario& sc, std::span<const double> times) {
    if (times.empty() || times.front() != 0.0) throw Error(ErrorKind::Domain, "simulation grids start at t = 0");
    const SystemSpec& s = sc.system;
    const auto& cfg = sc.integrator;
    Simulation sim;
    sim.times.assign(times.begin(), times.end());
    sim.centroid = integrate_centroid(s, sc.centroid, times, cfg);
    sim.ermakov = integrate_ermakov(s, sc.ermakov, times, cfg);
    sim.riccati = integrate_riccati(s, sc.riccati, times, cfg);
    sim.lambda = integrate_lambda(s, lambda_from_ermakov(sc.ermakov), times, cfg);
    sim.moments = integrate_uncertainty_system(s, sc.moments, times, cfg);
    sim.invariant0 = ermakov_invariant(s, sc.centroid, sc.ermakov);
    return sim;
}

void write_timeseries_csv(std::ostream& out, const Scenario& sc, const Simulation& sim) {
    const SystemSpec& s = sc.system;
    out << "t,eta,eta_dot,alpha,alpha_dot,C_R,C_I,sigma_xx,sigma_pp,sigma_xp,Cor,I_ermakov,SR_defect,wronskian_defect\n";
    for (std::size_t i = 0; i < sim.times.size(); ++i) {
        const auto& c = sim.centroid[i];
        const auto& e = sim.ermakov[i];
        const auto& r = sim.riccati[i];
        const auto& u = sim.moments[i];
        out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},"
                           "{:.17g},{:.17g}\n",
                           sim.times[i], c.eta, c.eta_dot, e.alpha, e.alpha_dot, r.c_r, r.c_i, u.sigma_xx, u.sigma_pp,
                           u.sigma_xp, correlation_coefficient(u), ermakov_invariant(s, c, e),
                           u.robertson_defect(s.hbar), sim.lambda[i].wronskian() - 1.0);
    }
}

Summary summarize(const Scenario& sc, const Simulation& sim) {
    const SystemSpec& s = sc.system;
    Summary out;
    out.samples = sim.times.size();
    out.t_end = sim.times.back();
    out.invariant0 = sim.invariant0;
    const double w = sc.omega_ref();
    if (w > 0.0) {
        out.position_squeezing_level = position_squeezing_level(s, w);
        out.momentum_squeezing_level = momentum_squeezing_level(s, w);
    }
    for (std::size_t i = 0; i < sim.times.size(); ++i) {
        const auto& u = sim.moments[i];
        const bool first = (i == 0);
        out.max_sr_defect = std::max(out.max_sr_defect, std::abs(u.robertson_defect(s.hbar)));
        const double inv = ermakov_invariant(s, sim.centroid[i], sim.ermakov[i]);
        const double drift = sim.invariant0 > 0.0 ? std::abs(inv - sim.invariant0) / sim.invariant0 : std::abs(inv);
        out.invariant_drift = std::max(out.invariant_drift, drift);
        out.max_wronskian_drift = std::max(out.max_wronskian_drift, std::abs(sim.lambda[i].wronskian() - 1.0));

        const double routes[4] = {u.sigma_xx, sigma_xx_from_alpha(s, sim.ermakov[i].alpha),
                                  s.hbar / (2.0 * s.mass * sim.riccati[i].c_i),
                                  s.hbar * std::norm(sim.lambda[i].lambda()) / (2.0 * s.mass)};
        const auto [lo, hi] = std::minmax_element(std::begin(routes), std::end(routes));
        out.route_spread = std::max(out.route_spread, *hi - *lo);

        track(out.sigma_xx, u.sigma_xx, first);
        track(out.sigma_pp, u.sigma_pp, first);
        track(out.sigma_xp, u.sigma_xp, first);
        const double cor = correlation_coefficient(u);
        if (first || cor > out.correlation.max) out.t_correlation_max = sim.times[i];
        track(out.correlation, cor, first);
    }
    return out;
}

std::string summary_json(const Scenario& sc, const Summary& s) {
    ojson j;
    j["scenario"] = sc.name;
    j["samples"] = s.samples;
    j["t_end"] = s.t_end;
    j["max_sr_defect"] = s.max_sr_defect;
    j["invariant"] = ojson{{"initial", s.invariant0}, {"max_drift", s.invariant_drift}};
    j["max_wronskian_drift"] = s.max_wronskian_drift;
    j["route_spread_sigma_xx"] = s.route_spread;
    j["moments"] = ojson{{"sigma_xx", extrema_json(s.sigma_xx)},
                         {"sigma_pp", extrema_json(s.sigma_pp)},
                         {"sigma_xp", extrema_json(s.sigma_xp)}};
    j["correlation"] = ojson{{"min", s.correlation.min}, {"max", s.correlation.max}, {"t_at_max", s.t_correlation_max}};
    if (sc.omega_ref() > 0.0) {
        j["squeezing"] = ojson{{"position_level", s.position_squeezing_level},
                               {"momentum_level", s.momentum_squeezing_level},
                               {"position_squeezed", s.sigma_xx.min < s.position_squeezing_level},
                               {"momentum_squeezed", s.sigma_pp.min < s.momentum_squeezing_level}};
    }
    return j.dump(2) + "\n";
}

KernelComparison compare_kernel(const Scenario& sc, const Simulation& sim) {
    const SystemSpec& s = sc.system;
    const auto init = InitialGaussian::from(s, sc.centroid, sc.ermakov);
    const auto kl = integrate_lambda(s, kernel_lambda_initial(init.alpha0), sim.times, sc.integrator);
    KernelComparison out;
    for (std::size_t i = 1; i < sim.times.size(); ++i) {
        if (std::abs(kl[i].lambda_i) < 1e-3 * std::abs(kl[i].lambda())) {
            ++out.focal_skipped;
            continue;
        }
        const auto g = apply_kernel(s, init, kl[i]);
        const auto p = g.packet(s);
        const Complex c = sim.riccati[i].value();
        const double eta = sim.centroid[i].eta;
        out.max_c_error = std::max(out.max_c_error, std::abs(p.riccati.value() - c) / std::max(1.0, std::abs(c)));
        out.max_eta_error = std::max(out.max_eta_error, std::abs(p.centroid.eta - eta) / std::max(1.0, std::abs(eta)));
        out.max_norm_error = std::max(out.max_norm_error, std::abs(g.norm() - 1.0));
        ++out.compared;
    }

    // Dense window where the kernel is far from a caustic.
    constexpr double kDt = 1e-3;
    constexpr std::size_t kSamples = 201;
    const double window = kDt * static_cast<double>(kSamples - 1);
    out.tdse_residual = std::numeric_limits<double>::quiet_NaN();
    double best = -1.0;
    const auto breaks = s.omega.breakpoints();
    for (std::size_t i = 1; i < sim.times.size(); ++i) {
        const double t = sim.times[i];
        if (t < std::min(0.5, 0.5 * sim.times.back()) || t + window > sim.times.back()) continue;
        // The stencil needs a smooth omega across the whole window.
        const bool straddles = std::any_of(breaks.begin(), breaks.end(),
                                           [&](double b) { return b >= t - kDt && b <= t + window + kDt; });
        if (straddles) continue;
        const double q = std::abs(kl[i].lambda_i) / std::abs(kl[i].lambda());
        if (q > best) {
            best = q;
            out.tdse_window_start = t;
        }
    }
    if (best > 0.0) {
        std::vector<double> dense{0.0};
        for (std::size_t k = 0; k < kSamples; ++k) dense.push_back(out.tdse_window_start + kDt * static_cast<double>(k));
        auto traj = integrate_lambda(s, kernel_lambda_initial(init.alpha0), dense, sc.integrator);
        traj.erase(traj.begin());
        KernelResidualGrid grid;
        grid.t0 = out.tdse_window_start;
        grid.dt = kDt;
        grid.alpha0 = init.alpha0;
        try {
            out.tdse_residual = verify_kernel_satisfies_tdse(s, traj, grid);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::GridTooCoarse) throw;
        }
    }
    return out;
}

std::string kernel_report_json(const Scenario& sc, const KernelComparison& k) {
    ojson j;
    j["scenario"] = sc.name;
    j["compared_times"] = k.compared;
    j["focal_times_skipped"] = k.focal_skipped;
    j["max_c_error"] = k.max_c_error;
    j["max_eta_error"] = k.max_eta_error;
    j["max_norm_error"] = k.max_norm_error;
    j["tdse"] = ojson{{"window_start", k.tdse_window_start}, {"max_relative_residual", number_or_null(k.tdse_residual)}};
    return j.dump(2) + "\n";
}

std::vector<PhaseSpaceSample> phase_space_samples(const Scenario& sc, std::span<const double> times) {
    std::vector<double> grid{0.0};
    for (double t : times) {
        if (!(t >= 0.0)) throw Error(ErrorKind::Domain, "sample times must be >= 0");
        grid.push_back(t);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::vector<Centroid> cs;
    std::vector<UncertaintyTriple> us;
    if (grid.size() == 1) {
        cs = {sc.centroid};
        us = {sc.moments};
    } else {
        cs = integrate_centroid(sc.system, sc.centroid, grid, sc.integrator);
        us = integrate_uncertainty_system(sc.system, sc.moments, grid, sc.integrator);
    }
    std::vector<PhaseSpaceSample> out;
    for (double t : times) {
        const auto k = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), t) - grid.begin());
        out.push_back({t, cs[k], us[k]});
    }
    return out;
}

std::vector<CheckResult> run_checks(const Scenario& sc, const Simulation& sim) {
    const SystemSpec& s = sc.system;
    const auto& th = sc.check;
    const Summary sum = summarize(sc, sim);
    std::vector<CheckResult> out;
    auto add = [&](std::string name, double value, double threshold) {
        out.push_back({std::move(name), value, threshold, value <= threshold});
    };
    add("robertson_drift", sum.max_sr_defect, th.sr_drift);
    add("ermakov_invariant_drift", sum.invariant_drift, th.invariant_drift);
    add("wronskian_drift", sum.max_wronskian_drift, th.wronskian_drift);
    add("route_agreement_sigma_xx", sum.route_spread, th.route_agreement);

    const auto k = compare_kernel(sc, sim);
    add("kernel_vs_direct", std::max(k.max_c_error, k.max_eta_error), th.kernel_agreement);
    if (std::isfinite(k.tdse_residual)) add("kernel_tdse_residual", k.tdse_residual, th.kernel_tdse);

    // Wigner identity and normalization at the final state.
    const Centroid& c = sim.centroid.back();
    const UncertaintyTriple& u = sim.moments.back();
    const auto spec = default_grid_spec(s, c, u, sc.wigner.n_sigma, sc.wigner.n);
    const auto grid = wigner_grid(s, c, u, spec);
    double identity = 0.0;
    for (std::size_t i = 0; i < spec.n_x; ++i) {
        for (std::size_t j = 0; j < spec.n_p; ++j) {
            const double w = wigner_from_invariant(s, c, u, spec.x_at(i), spec.p_at(j));
            identity = std::max(identity, std::abs(grid.at(i, j) - w) * std::numbers::pi * s.hbar);
        }
    }
    add("wigner_invariant_identity", identity, th.wigner_identity);
    add("wigner_normalization", std::abs(grid.normalization() - 1.0), th.wigner_normalization);

    if (s.omega.is_constant()) {
        const double w0 = s.omega.constant_value();
        const double e0 = classical_energy(s, w0, sim.centroid.front());
        double drift = 0.0;
        for (const auto& ci : sim.centroid) {
            const double e = classical_energy(s, w0, ci);
            drift = std::max(drift, e0 > 0.0 ? std::abs(e - e0) / e0 : std::abs(e));
        }
        add("classical_energy_drift", drift, th.energy_drift);
    }
    return out;
}

}  // namespace ricdyn::app
