#include "ricdyn/ermakov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/interpolators/quintic_hermite.hpp>

namespace ricdyn {

// One quintic Hermite interpolant per smooth piece of omega, so no
// interpolant spans a frequency switch.
struct FundamentalPair::Tabulated {
    struct Piece {
        double t_lo;
        double t_hi;
        boost::math::interpolators::quintic_hermite<std::vector<double>> eta1;
        boost::math::interpolators::quintic_hermite<std::vector<double>> eta2;
    };
    std::vector<Piece> pieces;
};

namespace {

double sign_of(SignBranch branch) { return branch == SignBranch::Physical ? 1.0 : -1.0; }

double checked_sqrt(double radicand) {
    if (radicand < 0.0 || !std::isfinite(radicand)) {
        throw Error(ErrorKind::Domain,
                    "negative radicand for alpha (" + std::to_string(radicand) +
                        "); initial moments violate the Robertson equality");
    }
    return std::sqrt(radicand);
}

}  // namespace

FundamentalPair FundamentalPair::closed_form(double mass, double omega0, double t0) {
    if (!(mass > 0.0)) throw Error(ErrorKind::Domain, "mass must be > 0");
    if (!(omega0 >= 0.0)) throw Error(ErrorKind::Domain, "omega0 must be >= 0");
    FundamentalPair p;
    p.mass_ = mass;
    p.omega0_ = omega0;
    p.t0_ = t0;
    return p;
}

FundamentalPair FundamentalPair::integrate(const SystemSpec& s, std::span<const double> t_grid,
                                           const IntegratorConfig& cfg) {
    detail::require_time_grid(t_grid);
    if (s.omega.is_constant()) return closed_form(s.mass, s.omega.constant_value(), t_grid.front());
    if (t_grid.size() < 2) throw Error(ErrorKind::Domain, "fundamental pair needs at least two grid points");

    // Tabulate on the grid plus every interior breakpoint.
    std::vector<double> knots(t_grid.begin(), t_grid.end());
    std::vector<double> cuts;
    for (double b : s.omega.breakpoints()) {
        if (b > t_grid.front() && b < t_grid.back()) {
            cuts.push_back(b);
            knots.push_back(b);
        }
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    const auto first = integrate_centroid(s, Centroid{0.0, -1.0 / s.mass}, knots, cfg);
    const auto second = integrate_centroid(s, Centroid{1.0, 0.0}, knots, cfg);

    // omega^2 on [lo, hi], taking the limit from inside the piece at its ends.
    auto omega_sq = [&](double t, double lo, double hi) {
        const double tt = t >= hi ? std::nextafter(hi, lo) : (t <= lo ? std::nextafter(lo, hi) : t);
        const double w = s.omega(tt);
        return w * w;
    };
    auto build = [&](const std::vector<Centroid>& traj, std::size_t i0, std::size_t i1) {
        const double lo = knots[i0];
        const double hi = knots[i1];
        std::vector<double> x, y, dy, ddy;
        for (std::size_t i = i0; i <= i1; ++i) {
            x.push_back(knots[i]);
            y.push_back(traj[i].eta);
            dy.push_back(traj[i].eta_dot);
            ddy.push_back(-omega_sq(knots[i], lo, hi) * traj[i].eta);
        }
        return boost::math::interpolators::quintic_hermite<std::vector<double>>(std::move(x), std::move(y),
                                                                               std::move(dy), std::move(ddy));
    };

    auto table = std::make_shared<Tabulated>();
    std::size_t start = 0;
    std::size_t c = 0;
    for (std::size_t i = 1; i < knots.size(); ++i) {
        const bool cut = c < cuts.size() && knots[i] == cuts[c];
        if (cut || i + 1 == knots.size()) {
            table->pieces.push_back({knots[start], knots[i], build(first, start, i), build(second, start, i)});
            start = i;
            if (cut) ++c;
        }
    }

    FundamentalPair p;
    p.mass_ = s.mass;
    p.t0_ = t_grid.front();
    p.table_ = std::move(table);
    return p;
}

FundamentalPair::Values FundamentalPair::at(double t) const {
    if (table_) {
        const auto& pieces = table_->pieces;
        if (t < pieces.front().t_lo || t > pieces.back().t_hi) {
            throw Error(ErrorKind::Domain, "fundamental pair evaluated outside its grid at t = " + std::to_string(t));
        }
        auto it = std::upper_bound(pieces.begin(), pieces.end(), t,
                                   [](double v, const Tabulated::Piece& pc) { return v < pc.t_lo; });
        const auto& pc = it == pieces.begin() ? pieces.front() : *std::prev(it);
        return {pc.eta1(t), pc.eta1.prime(t), pc.eta2(t), pc.eta2.prime(t)};
    }
    const double tau = t - t0_;
    if (omega0_ == 0.0) return {-tau / mass_, -1.0 / mass_, 1.0, 0.0};
    const double sn = std::sin(omega0_ * tau);
    const double cs = std::cos(omega0_ * tau);
    return {-sn / (mass_ * omega0_), -cs / mass_, cs, -omega0_ * sn};
}

std::vector<ErmakovState> integrate_ermakov(const SystemSpec& s, const ErmakovState& e0,
                                            std::span<const double> t_grid, const IntegratorConfig& cfg,
                                            double alpha_floor) {
    s.validate();
    if (!(e0.alpha > 0.0)) throw Error(ErrorKind::Domain, "alpha0 must be > 0");
    using State = std::array<double, 2>;
    const auto& omega = s.omega;
    auto rhs = [&omega](const State& y, State& dy, double t) {
        const double w = omega(t);
        const double a = y[0];
        dy[0] = y[1];
        dy[1] = -w * w * a + 1.0 / (a * a * a);
    };
    auto guard = [alpha_floor](double t, const State& y) {
        if (!(y[0] > alpha_floor)) {
            throw Error(ErrorKind::Singularity,
                        "alpha fell below " + std::to_string(alpha_floor) + " at t = " + std::to_string(t));
        }
    };
    const auto bps = omega.breakpoints();
    auto traj = integrate_ode<2>(rhs, State{e0.alpha, e0.alpha_dot}, t_grid, cfg, bps, guard);
    std::vector<ErmakovState> out;
    out.reserve(traj.size());
    for (const auto& y : traj) out.push_back({y[0], y[1]});
    return out;
}

double ermakov_from_fundamental(const SystemSpec& s, const UncertaintyTriple& u0, const FundamentalPair& pair,
                                double t, SignBranch branch) {
    return ermakov_state_from_fundamental(s, u0, pair, t, branch).alpha;
}

ErmakovState ermakov_state_from_fundamental(const SystemSpec& s, const UncertaintyTriple& u0,
                                            const FundamentalPair& pair, double t, SignBranch branch) {
    s.validate();
    const auto f = pair.at(t);
    const double k = 2.0 * s.mass / s.hbar;
    const double b = sign_of(branch);
    const double radicand =
        k * (u0.sigma_pp * f.eta1 * f.eta1 + u0.sigma_xx * f.eta2 * f.eta2 - 2.0 * b * u0.sigma_xp * f.eta1 * f.eta2);
    const double alpha = checked_sqrt(radicand);
    // d(alpha^2)/dt / (2 alpha)
    const double half_rate = k * (u0.sigma_pp * f.eta1 * f.eta1_dot + u0.sigma_xx * f.eta2 * f.eta2_dot -
                                  b * u0.sigma_xp * (f.eta1_dot * f.eta2 + f.eta1 * f.eta2_dot));
    return {alpha, half_rate / alpha};
}

double ermakov_closed_form_ho(const SystemSpec& s, const UncertaintyTriple& u0, double omega0, double t,
                              SignBranch branch) {
    s.validate();
    if (!(omega0 > 0.0)) throw Error(ErrorKind::Domain, "ermakov_closed_form_ho needs omega0 > 0");
    const double m = s.mass;
    const double sn = std::sin(omega0 * t);
    const double cs = std::cos(omega0 * t);
    const double radicand =
        (2.0 * m / s.hbar) * (u0.sigma_pp / (m * m * omega0 * omega0) * sn * sn + u0.sigma_xx * cs * cs +
                              sign_of(branch) * 2.0 * u0.sigma_xp / (m * omega0) * sn * cs);
    return checked_sqrt(radicand);
}

double ermakov_free_motion(const SystemSpec& s, const UncertaintyTriple& u0, double t, SignBranch branch) {
    s.validate();
    const double m = s.mass;
    const double radicand = (2.0 * m / s.hbar) * (u0.sigma_pp * t * t / (m * m) + u0.sigma_xx +
                                                  sign_of(branch) * 2.0 * u0.sigma_xp * t / m);
    return checked_sqrt(radicand);
}

double ermakov_invariant(const SystemSpec& s, const Centroid& c, const ErmakovState& e) {
    if (!(e.alpha > 0.0)) throw Error(ErrorKind::Domain, "alpha must be > 0");
    const double w = c.eta_dot * e.alpha - c.eta * e.alpha_dot;
    const double r = c.eta / e.alpha;
    return 0.5 * s.mass / s.hbar * (w * w + r * r);
}

QuadraticInvariantCoefficients invariant_coefficients_from_initial(const SystemSpec& s,
                                                                   const UncertaintyTriple& u0) {
    s.validate();
    const double k = 2.0 / (s.hbar * s.hbar);
    return {k * u0.sigma_pp, k * u0.sigma_xx, k * u0.sigma_xp};
}

double alpha_from_invariant_coefficients(const SystemSpec& s, const QuadraticInvariantCoefficients& k,
                                         const FundamentalPair& pair, double t, SignBranch branch) {
    s.validate();
    const auto f = pair.at(t);
    const double inner =
        k.a * f.eta1 * f.eta1 + k.b * f.eta2 * f.eta2 - sign_of(branch) * 2.0 * k.cross * f.eta1 * f.eta2;
    return std::sqrt(s.mass * s.hbar) * checked_sqrt(inner);
}

std::array<double, 2> ermakov_field(double omega0, double alpha, double alpha_dot) {
    return {alpha_dot, -omega0 * omega0 * alpha + 1.0 / (alpha * alpha * alpha)};
}

PlaneField ermakov_vector_field(double omega0, Range alpha_range, Range alpha_dot_range, std::size_t n_grid) {
    if (!(alpha_range.lo > 0.0)) throw Error(ErrorKind::Domain, "alpha range must lie in alpha > 0");
    return sample_plane_field(alpha_range, alpha_dot_range, n_grid,
                              [omega0](double a, double ad) { return ermakov_field(omega0, a, ad); });
}

}  // namespace ricdyn
