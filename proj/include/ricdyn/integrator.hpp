#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "ricdyn/error.hpp"

namespace ricdyn {

enum class IntegrationMethod {
    RungeKutta4,      // classical fixed-step RK4
    DormandPrince54,  // adaptive embedded 5(4) pair
};

struct IntegratorConfig {
    IntegrationMethod method = IntegrationMethod::DormandPrince54;
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double max_step = 0.1;     // adaptive only; <= 0 means unbounded
    double fixed_step = 1e-3;  // RK4 only
    unsigned max_rejections = 500;

    void validate() const;
};

namespace detail {

void require_time_grid(std::span<const double> grid);

struct Stop {
    double t;
    bool on_grid;
    bool breakpoint;
};

/// Grid points after the first, merged with interior breakpoints.
std::vector<Stop> merge_stops(std::span<const double> grid, std::span<const double> breakpoints);

template <std::size_t N>
bool all_finite(const std::array<double, N>& y) {
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace detail

/// Integrates y' = rhs(y, t) and returns y at every grid point (the first
/// entry is y0 at grid[0]). Steps never cross a breakpoint, so piecewise
/// right-hand sides are integrated one smooth piece at a time.
///
/// `rhs(const State& y, State& dydt, double t)`; `guard(double t, const State& y)`
/// runs after every accepted step and throws to abort. Stage times inside a
/// step that ends on a breakpoint are clamped below it, so rhs sees the
/// left limit there.
template <std::size_t N, class Rhs, class Guard>
std::vector<std::array<double, N>> integrate_ode(Rhs&& rhs, std::array<double, N> y,
                                                 std::span<const double> grid,
                                                 const IntegratorConfig& cfg,
                                                 std::span<const double> breakpoints, Guard&& guard) {
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, N>;

    cfg.validate();
    detail::require_time_grid(grid);

    std::vector<State> out;
    out.reserve(grid.size());
    out.push_back(y);
    guard(grid.front(), y);

    auto check = [&](double t, const State& s) {
        if (!detail::all_finite(s)) {
            throw Error(ErrorKind::BlowUp, "state became non-finite at t = " + std::to_string(t));
        }
        guard(t, s);
    };

    const std::vector<detail::Stop> stops = detail::merge_stops(grid, breakpoints);
    double t = grid.front();
    double stage_limit = HUGE_VAL;
    auto sys = [&](const State& x, State& dxdt, double tt) { rhs(x, dxdt, std::min(tt, stage_limit)); };

    if (cfg.method == IntegrationMethod::RungeKutta4) {
        odeint::runge_kutta4<State> stepper;
        for (const auto& [stop, on_grid, breakpoint] : stops) {
            while (t < stop) {
                const double remaining = stop - t;
                const bool last = cfg.fixed_step >= remaining;
                stage_limit = last && breakpoint ? std::nextafter(stop, -HUGE_VAL) : HUGE_VAL;
                stepper.do_step(sys, y, t, last ? remaining : cfg.fixed_step);
                t = last ? stop : t + cfg.fixed_step;
                check(t, y);
            }
            if (on_grid) out.push_back(y);
        }
        return out;
    }

    auto stepper = odeint::make_controlled(cfg.abs_tol, cfg.rel_tol, odeint::runge_kutta_dopri5<State>());
    double dt_proposal = stops.empty() ? 1e-3 : std::min(1e-3, stops.front().t - t);
    for (const auto& [stop, on_grid, breakpoint] : stops) {
        unsigned rejections = 0;
        while (t < stop) {
            double dt = dt_proposal;
            if (cfg.max_step > 0.0) dt = std::min(dt, cfg.max_step);
            const double remaining = stop - t;
            const bool last = dt >= remaining;
            if (last) dt = remaining;
            stage_limit = last && breakpoint ? std::nextafter(stop, -HUGE_VAL) : HUGE_VAL;
            double t_try = t;
            if (stepper.try_step(sys, y, t_try, dt) == odeint::success) {
                t = last ? stop : t_try;
                if (!last || dt > dt_proposal) dt_proposal = dt;
                rejections = 0;
                check(t, y);
            } else {
                dt_proposal = dt;
                if (++rejections > cfg.max_rejections || !(dt > 0.0) || t + dt == t) {
                    throw Error(ErrorKind::Integration,
                                "step size control failed at t = " + std::to_string(t));
                }
            }
        }
        if (on_grid) out.push_back(y);
        // The cached first-same-as-last derivative was taken with the left limit.
        if (breakpoint) stepper.reset();
    }
    return out;
}

}  // namespace ricdyn
