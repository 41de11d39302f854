#include "ricdyn/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ricdyn {
namespace {

// (1 - e^{-z}) / z, continuous through z = 0.
Complex one_minus_exp_over(Complex z) {
    if (std::abs(z) < 1e-3) {
        return 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0 + z * z * z * z / 120.0;
    }
    return (1.0 - std::exp(-z)) / z;
}

}  // namespace

std::pair<ParticularSolution, ParticularSolution> particular_solutions(double omega0) {
    if (!(omega0 >= 0.0)) throw Error(ErrorKind::Domain, "omega0 must be >= 0");
    return {ParticularSolution{Complex(0.0, omega0), Branch::Plus},
            ParticularSolution{Complex(0.0, -omega0), Branch::Minus}};
}

BernoulliInitial BernoulliInitial::from_v0(Complex v0) { return BernoulliInitial(V0{v0}); }

BernoulliInitial BernoulliInitial::from_kappa0(Complex kappa0) {
    if (kappa0 == Complex(0.0, 0.0)) throw Error(ErrorKind::Domain, "kappa0 must be nonzero");
    return BernoulliInitial(Kappa0{kappa0});
}

Complex BernoulliInitial::v0() const {
    if (const auto* k = std::get_if<Kappa0>(&rep_)) return 1.0 / k->value;
    return std::get<V0>(rep_).value;
}

std::optional<Complex> BernoulliInitial::kappa0() const {
    if (const auto* k = std::get_if<Kappa0>(&rep_)) return k->value;
    const Complex v0 = std::get<V0>(rep_).value;
    if (v0 == Complex(0.0, 0.0)) return std::nullopt;
    return 1.0 / v0;
}

Complex bernoulli_solution(const ParticularSolution& ctilde, const BernoulliInitial& init, double t) {
    if (!(t >= 0.0)) throw Error(ErrorKind::Domain, "bernoulli_solution needs t >= 0");
    const Complex two_c = 2.0 * ctilde.value;
    const Complex decay = std::exp(-two_c * t);
    // (1 - e^{-2 C~ t}) / (2 C~), which is t when C~ = 0.
    const Complex growth = t * one_minus_exp_over(two_c * t);

    // Work with V0 = 1/kappa0 so that V0 = 0 needs no special case:
    // V = V0 e / (1 + V0 * growth).
    const Complex v0 = init.v0();
    const Complex denom = 1.0 + v0 * growth;
    if (std::abs(denom) <= 1e-13 * (1.0 + std::abs(v0 * growth))) {
        throw Error(ErrorKind::Singularity,
                    "Bernoulli solution is singular at t = " + std::to_string(t));
    }
    return v0 * decay / denom;
}

RiccatiState riccati_closed_form(double omega0, const RiccatiState& c0, double t) {
    const auto [plus, minus] = particular_solutions(omega0);
    (void)minus;
    const Complex v = bernoulli_solution(plus, BernoulliInitial::from_v0(c0.value() - plus.value), t);
    return RiccatiState::from(plus.value + v);
}

Complex kappa0_from_initial_moments(const SystemSpec& s, double omega0, const UncertaintyTriple& u) {
    s.validate();
    const double m = s.mass;
    const double hbar = s.hbar;
    const Complex num(0.5 * u.sigma_xp, -(0.25 * hbar - 0.5 * m * omega0 * u.sigma_xx));
    const double den = 0.5 * u.sigma_pp / m + 0.5 * m * omega0 * omega0 * u.sigma_xx - 0.5 * hbar * omega0;
    const double scale = 0.5 * u.sigma_pp / m + 0.5 * m * omega0 * omega0 * u.sigma_xx + 0.5 * hbar * omega0;
    if (std::abs(den) <= 1e-14 * scale) {
        throw Error(ErrorKind::Degeneracy,
                    "initial state is the coherent state of omega0: V0 = 0 and kappa0 is undefined");
    }
    return num / den;
}

double default_blowup_bound(const SystemSpec& s) { return 1e6 * std::max(s.omega.max_value(), 1.0); }

std::vector<RiccatiState> integrate_riccati(const SystemSpec& s, const RiccatiState& c0,
                                            std::span<const double> t_grid, const IntegratorConfig& cfg,
                                            double blowup_bound) {
    s.validate();
    if (!std::isfinite(c0.c_r) || !std::isfinite(c0.c_i)) {
        throw Error(ErrorKind::Domain, "initial Riccati state must be finite");
    }
    const double bound = blowup_bound > 0.0 ? blowup_bound : default_blowup_bound(s);
    using State = std::array<double, 2>;
    const auto& omega = s.omega;
    auto rhs = [&omega](const State& y, State& dy, double t) {
        const double w = omega(t);
        dy[0] = -(y[0] * y[0] - y[1] * y[1]) - w * w;
        dy[1] = -2.0 * y[0] * y[1];
    };
    auto guard = [bound](double t, const State& y) {
        if (std::hypot(y[0], y[1]) > bound) {
            throw Error(ErrorKind::BlowUp, "|C| exceeded " + std::to_string(bound) + " at t = " + std::to_string(t));
        }
    };
    const auto bps = omega.breakpoints();
    auto traj = integrate_ode<2>(rhs, State{c0.c_r, c0.c_i}, t_grid, cfg, bps, guard);
    std::vector<RiccatiState> out;
    out.reserve(traj.size());
    for (const auto& y : traj) out.push_back({y[0], y[1]});
    return out;
}

std::array<double, 2> riccati_field(double omega0, double c_r, double c_i) {
    return {-c_r * c_r + c_i * c_i - omega0 * omega0, -2.0 * c_r * c_i};
}

PlaneField riccati_vector_field(double omega0, Range c_r_range, Range c_i_range, std::size_t n_grid) {
    return sample_plane_field(c_r_range, c_i_range, n_grid,
                              [omega0](double x, double y) { return riccati_field(omega0, x, y); });
}

}  // namespace ricdyn
