#include "ricdyn/core.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ricdyn/parallel.hpp"

namespace ricdyn {
namespace {

void require_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw Error(ErrorKind::Domain, "alpha must be finite and > 0, got " + std::to_string(alpha));
    }
}

}  // namespace

void SystemSpec::validate() const {
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw Error(ErrorKind::Domain, "mass must be > 0");
    }
    if (!(hbar > 0.0) || !std::isfinite(hbar)) {
        throw Error(ErrorKind::Domain, "hbar must be > 0");
    }
}

void IntegratorConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
        throw Error(ErrorKind::Domain, "integrator tolerances must be > 0");
    }
    if (method == IntegrationMethod::RungeKutta4 && !(fixed_step > 0.0)) {
        throw Error(ErrorKind::Domain, "fixed_step must be > 0 for the fixed-step method");
    }
}

namespace detail {

void require_time_grid(std::span<const double> grid) {
    if (grid.empty()) throw Error(ErrorKind::Domain, "time grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) throw Error(ErrorKind::Domain, "time grid has non-finite entries");
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw Error(ErrorKind::Domain, "time grid must be strictly increasing");
        }
    }
}

std::vector<Stop> merge_stops(std::span<const double> grid, std::span<const double> breakpoints) {
    std::vector<Stop> stops;
    stops.reserve(grid.size() + breakpoints.size());
    std::size_t b = 0;
    while (b < breakpoints.size() && breakpoints[b] <= grid.front()) ++b;
    for (std::size_t g = 1; g < grid.size(); ++g) {
        while (b < breakpoints.size() && breakpoints[b] < grid[g]) {
            stops.push_back({breakpoints[b++], false, true});
        }
        bool is_bp = b < breakpoints.size() && breakpoints[b] == grid[g];
        if (is_bp) ++b;
        stops.push_back({grid[g], true, is_bp});
    }
    return stops;
}

}  // namespace detail

double UncertaintyTriple::robertson_defect(double hbar) const {
    const double floor = 0.25 * hbar * hbar;
    return (determinant() - floor) / floor;
}

double LambdaState::phase() const { return std::atan2(lambda_i, lambda_r); }

RiccatiState riccati_from_ermakov(const ErmakovState& e) {
    require_alpha(e.alpha);
    return {e.alpha_dot / e.alpha, 1.0 / (e.alpha * e.alpha)};
}

ErmakovState ermakov_from_riccati(const RiccatiState& c) {
    if (!(c.c_i > 0.0)) {
        throw Error(ErrorKind::UnphysicalState,
                    "C_I must be > 0 (lower half-plane is not normalizable), got " + std::to_string(c.c_i));
    }
    const double root = std::sqrt(c.c_i);
    return {1.0 / root, c.c_r / root};
}

UncertaintyTriple uncertainties_from_ermakov(const SystemSpec& s, const ErmakovState& e) {
    require_alpha(e.alpha);
    const double a = e.alpha;
    const double ad = e.alpha_dot;
    return {
        0.5 * s.hbar / s.mass * a * a,
        0.5 * s.mass * s.hbar * (ad * ad + 1.0 / (a * a)),
        0.5 * s.hbar * a * ad,
    };
}

UncertaintyTriple uncertainties_from_riccati(const SystemSpec& s, const RiccatiState& c) {
    if (!(c.c_i > 0.0)) throw Error(ErrorKind::UnphysicalState, "C_I must be > 0");
    return {
        0.5 * s.hbar / (s.mass * c.c_i),
        0.5 * s.mass * s.hbar * (c.c_r * c.c_r + c.c_i * c.c_i) / c.c_i,
        0.5 * s.hbar * c.c_r / c.c_i,
    };
}

ErmakovState ermakov_from_uncertainties(const SystemSpec& s, const UncertaintyTriple& u) {
    if (!(u.sigma_xx > 0.0)) throw Error(ErrorKind::UnphysicalState, "sigma_x^2 must be > 0");
    const double sx = std::sqrt(u.sigma_xx);
    return {std::sqrt(2.0 * s.mass / s.hbar) * sx, std::sqrt(2.0 / (s.hbar * s.mass)) * u.sigma_xp / sx};
}

void require_minimum_uncertainty(const UncertaintyTriple& u, double hbar, double tol) {
    if (!(u.sigma_xx > 0.0) || !(u.sigma_pp > 0.0)) {
        throw Error(ErrorKind::UnphysicalState, "variances must be > 0");
    }
    const double defect = u.robertson_defect(hbar);
    if (!(std::abs(defect) <= tol)) {
        throw Error(ErrorKind::UnphysicalState,
                    "moments are not a pure Gaussian state: sigma_xx*sigma_pp - sigma_xp^2 deviates from "
                    "hbar^2/4 by a relative " + std::to_string(defect));
    }
}

std::vector<double> unwrapped_phases(std::span<const LambdaState> traj) {
    std::vector<double> out;
    out.reserve(traj.size());
    double offset = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        double raw = traj[i].phase();
        if (i > 0) {
            double jump = raw - prev;
            if (jump > std::numbers::pi) offset -= 2.0 * std::numbers::pi;
            if (jump < -std::numbers::pi) offset += 2.0 * std::numbers::pi;
        }
        prev = raw;
        out.push_back(raw + offset);
    }
    return out;
}

std::vector<Centroid> integrate_centroid(const SystemSpec& s, const Centroid& c0,
                                         std::span<const double> t_grid, const IntegratorConfig& cfg) {
    s.validate();
    using State = std::array<double, 2>;
    const auto& omega = s.omega;
    auto rhs = [&omega](const State& y, State& dy, double t) {
        const double w = omega(t);
        dy[0] = y[1];
        dy[1] = -w * w * y[0];
    };
    const auto bps = omega.breakpoints();
    auto traj = integrate_ode<2>(rhs, State{c0.eta, c0.eta_dot}, t_grid, cfg, bps, [](double, const State&) {});
    std::vector<Centroid> out;
    out.reserve(traj.size());
    for (const auto& y : traj) out.push_back({y[0], y[1]});
    return out;
}

PlaneField sample_plane_field(Range x_range, Range y_range, std::size_t n,
                              const std::function<std::array<double, 2>(double, double)>& field) {
    if (n < 2) throw Error(ErrorKind::Domain, "vector field grid needs n >= 2");
    if (!(x_range.hi > x_range.lo) || !(y_range.hi > y_range.lo)) {
        throw Error(ErrorKind::Domain, "vector field ranges must have hi > lo");
    }
    PlaneField out;
    out.xs.resize(n);
    out.ys.resize(n);
    const double dx = (x_range.hi - x_range.lo) / static_cast<double>(n - 1);
    const double dy = (y_range.hi - y_range.lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        out.xs[i] = x_range.lo + dx * static_cast<double>(i);
        out.ys[i] = y_range.lo + dy * static_cast<double>(i);
    }
    out.xs.back() = x_range.hi;
    out.ys.back() = y_range.hi;
    out.values.resize(n * n);
    parallel_for(n, [&](std::size_t ix) {
        for (std::size_t iy = 0; iy < n; ++iy) out.values[ix * n + iy] = field(out.xs[ix], out.ys[iy]);
    });
    return out;
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t n_steps) {
    if (n_steps == 0 || !(t1 > t0)) throw Error(ErrorKind::Domain, "uniform_grid needs t1 > t0 and n_steps > 0");
    std::vector<double> g(n_steps + 1);
    const double span = t1 - t0;
    for (std::size_t i = 0; i <= n_steps; ++i) {
        g[i] = t0 + span * static_cast<double>(i) / static_cast<double>(n_steps);
    }
    g.back() = t1;
    return g;
}

}  // namespace ricdyn
