#include "ricdyn/uncertainty.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/interpolators/barycentric_rational.hpp>

namespace ricdyn {

UncertaintyTriple ho_uncertainty_closed_form(const SystemSpec& s, const UncertaintyTriple& u0, double omega0,
                                             double t) {
    s.validate();
    if (!(omega0 > 0.0)) throw Error(ErrorKind::Domain, "ho_uncertainty_closed_form needs omega0 > 0");
    const double m = s.mass;
    const double w = omega0;
    const double sn = std::sin(w * t);
    const double cs = std::cos(w * t);
    return {
        u0.sigma_pp / (m * m * w * w) * sn * sn + u0.sigma_xx * cs * cs + 2.0 * u0.sigma_xp / (m * w) * sn * cs,
        u0.sigma_pp * cs * cs + m * m * w * w * u0.sigma_xx * sn * sn - 2.0 * m * w * u0.sigma_xp * sn * cs,
        (u0.sigma_pp / (2.0 * m * w) - 0.5 * m * w * u0.sigma_xx) * std::sin(2.0 * w * t) +
            u0.sigma_xp * std::cos(2.0 * w * t),
    };
}

UncertaintyTriple free_motion_uncertainties(const SystemSpec& s, const UncertaintyTriple& u0, double t) {
    s.validate();
    const double m = s.mass;
    return {
        u0.sigma_pp * t * t / (m * m) + u0.sigma_xx + 2.0 * u0.sigma_xp * t / m,
        u0.sigma_pp,
        u0.sigma_pp * t / m + u0.sigma_xp,
    };
}

std::vector<UncertaintyTriple> integrate_uncertainty_system(const SystemSpec& s, const UncertaintyTriple& u0,
                                                            std::span<const double> t_grid,
                                                            const IntegratorConfig& cfg) {
    s.validate();
    using State = std::array<double, 3>;
    const auto& omega = s.omega;
    const double m = s.mass;
    auto rhs = [&omega, m](const State& y, State& dy, double t) {
        const double w2 = omega(t) * omega(t);
        dy[0] = 2.0 * y[2] / m;
        dy[1] = -2.0 * m * w2 * y[2];
        dy[2] = y[1] / m - m * w2 * y[0];
    };
    const auto bps = omega.breakpoints();
    auto traj = integrate_ode<3>(rhs, State{u0.sigma_xx, u0.sigma_pp, u0.sigma_xp}, t_grid, cfg, bps,
                                 [](double, const State&) {});
    std::vector<UncertaintyTriple> out;
    out.reserve(traj.size());
    for (const auto& y : traj) out.push_back({y[0], y[1], y[2]});
    return out;
}

double ThirdOrderResidual::max_abs() const {
    double m = 0.0;
    for (double r : residual) m = std::max(m, std::abs(r));
    return m;
}

ThirdOrderResidual third_order_residual(std::span<const double> times, std::span<const double> sigma_xx,
                                        const FrequencyProfile& omega) {
    if (times.size() != sigma_xx.size()) {
        throw Error(ErrorKind::Domain, "third_order_residual: times and samples differ in length");
    }
    const std::size_t n = times.size();
    if (n < 7) throw Error(ErrorKind::GridTooCoarse, "third_order_residual needs at least 7 samples");
    detail::require_time_grid(times);

    const double h = (times.back() - times.front()) / static_cast<double>(n - 1);
    bool uniform = true;
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs((times[i] - times[i - 1]) - h) > 1e-9 * h) {
            uniform = false;
            break;
        }
    }

    std::vector<double> t(times.begin(), times.end());
    std::vector<double> f(sigma_xx.begin(), sigma_xx.end());
    if (!uniform) {
        // Local degree-5 interpolation through the 6 nearest samples. Its
        // O(h^6) value error survives the 1/h^3 of the third difference.
        constexpr std::size_t kWindow = 6;
        for (std::size_t i = 0; i < n; ++i) {
            const double ti = times.front() + h * static_cast<double>(i);
            const auto it = std::lower_bound(times.begin(), times.end(), ti);
            const auto center = static_cast<std::size_t>(it - times.begin());
            const std::size_t lo = std::min(center > kWindow / 2 ? center - kWindow / 2 : 0, n - kWindow);
            std::vector<double> wx(times.begin() + lo, times.begin() + lo + kWindow);
            std::vector<double> wy(sigma_xx.begin() + lo, sigma_xx.begin() + lo + kWindow);
            boost::math::barycentric_rational<double> local(std::move(wx), std::move(wy), kWindow - 1);
            t[i] = ti;
            f[i] = local(ti);
        }
        t.back() = times.back();
        f.back() = sigma_xx.back();
    }

    ThirdOrderResidual out;
    out.times.reserve(n - 4);
    out.residual.reserve(n - 4);
    const double h3 = h * h * h;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const double d3 = (f[i + 2] - 2.0 * f[i + 1] + 2.0 * f[i - 1] - f[i - 2]) / (2.0 * h3);
        const double d1 = (f[i + 1] - f[i - 1]) / (2.0 * h);
        const double w = omega(t[i]);
        const double wd = omega.derivative(t[i]);
        out.times.push_back(t[i]);
        out.residual.push_back(d3 + 4.0 * w * w * d1 + 4.0 * w * wd * f[i]);
    }
    return out;
}

double correlation_coefficient(const UncertaintyTriple& u) {
    if (!(u.sigma_xx > 0.0) || !(u.sigma_pp > 0.0)) {
        throw Error(ErrorKind::Domain, "correlation coefficient needs positive variances");
    }
    return std::abs(u.sigma_xp) / std::sqrt(u.sigma_xx * u.sigma_pp);
}

VelocityFieldSample velocity_field(const Centroid& c, const ErmakovState& e, double x, double t) {
    if (!(e.alpha > 0.0)) throw Error(ErrorKind::Domain, "alpha must be > 0");
    return {x, t, c.eta_dot + e.alpha_dot / e.alpha * (x - c.eta)};
}

double position_squeezing_level(const SystemSpec& s, double omega0) {
    if (!(omega0 > 0.0)) throw Error(ErrorKind::Domain, "squeezing level needs omega0 > 0");
    return s.hbar / (2.0 * s.mass * omega0);
}

double momentum_squeezing_level(const SystemSpec& s, double omega0) {
    if (!(omega0 > 0.0)) throw Error(ErrorKind::Domain, "squeezing level needs omega0 > 0");
    return 0.5 * s.hbar * s.mass * omega0;
}

}  // namespace ricdyn
