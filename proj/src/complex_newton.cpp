#include "ricdyn/complex_newton.hpp"

#include <cmath>
#include <string>

namespace ricdyn {

double InvariantObservableForm::scale(const SystemSpec& s) const { return lambda_scale(s, value); }

std::vector<LambdaState> integrate_lambda(const SystemSpec& s, const LambdaState& l0,
                                          std::span<const double> t_grid, const IntegratorConfig& cfg) {
    s.validate();
    const double w0 = l0.wronskian();
    if (!(std::abs(w0 - 1.0) <= 1e-10)) {
        throw Error(ErrorKind::WronskianViolation,
                    "initial lambda has Wronskian " + std::to_string(w0) + ", expected 1");
    }
    using State = std::array<double, 4>;
    const auto& omega = s.omega;
    auto rhs = [&omega](const State& y, State& dy, double t) {
        const double w2 = omega(t) * omega(t);
        dy[0] = y[2];
        dy[1] = y[3];
        dy[2] = -w2 * y[0];
        dy[3] = -w2 * y[1];
    };
    const auto bps = omega.breakpoints();
    auto traj = integrate_ode<4>(rhs, State{l0.lambda_r, l0.lambda_i, l0.lambda_r_dot, l0.lambda_i_dot}, t_grid, cfg,
                                 bps, [](double, const State&) {});
    std::vector<LambdaState> out;
    out.reserve(traj.size());
    for (const auto& y : traj) out.push_back({y[0], y[1], y[2], y[3]});
    return out;
}

LambdaState lambda_from_ermakov(const ErmakovState& e) {
    if (!(e.alpha > 0.0)) throw Error(ErrorKind::Domain, "alpha must be > 0");
    return {e.alpha, 0.0, e.alpha_dot, 1.0 / e.alpha};
}

double lambda_scale(const SystemSpec& s, double invariant) {
    if (!(invariant > 0.0)) {
        throw Error(ErrorKind::ZeroCentroid, "invariant is zero (centroid at rest at the origin); c is undefined");
    }
    return std::sqrt(s.mass / (2.0 * s.hbar * invariant));
}

double lambda_r_from_eta_alpha(const SystemSpec& s, const Centroid& c, const ErmakovState& e, double invariant,
                               LambdaSign sign) {
    if (!(e.alpha > 0.0)) throw Error(ErrorKind::Domain, "alpha must be > 0");
    const double scale = lambda_scale(s, invariant);
    const double sg = sign == LambdaSign::Plus ? 1.0 : -1.0;
    return sg * scale * e.alpha * e.alpha * (c.eta_dot - e.alpha_dot / e.alpha * c.eta);
}

LambdaState lambda_from_observables(const SystemSpec& s, const Centroid& c, const UncertaintyTriple& u,
                                   double invariant, LambdaSign sign) {
    s.validate();
    const double k = lambda_scale(s, invariant);
    const double sg = sign == LambdaSign::Plus ? 1.0 : -1.0;
    const double x = c.position();
    const double p = c.momentum(s.mass);
    LambdaState l{
        sg * 2.0 * k / s.hbar * (u.sigma_xx * p - u.sigma_xp * x),
        k * x,
        sg * 2.0 * k / (s.mass * s.hbar) * (u.sigma_xp * p - u.sigma_pp * x),
        k * p / s.mass,
    };
    const double w = l.wronskian();
    if (!(std::abs(w - 1.0) <= 1e-8)) {
        throw Error(ErrorKind::WronskianViolation,
                    "lambda from observables has Wronskian " + std::to_string(w) +
                        " (wrong sign branch or invariant inconsistent with the moments)");
    }
    return l;
}

InvariantObservableForm invariant_observable_form(const SystemSpec& s, const Centroid& c,
                                                  const UncertaintyTriple& u) {
    s.validate();
    const double x = c.position();
    const double p = c.momentum(s.mass);
    InvariantObservableForm f;
    f.position_term = u.sigma_pp * x * x;
    f.cross_term = -2.0 * u.sigma_xp * x * p;
    f.momentum_term = u.sigma_xx * p * p;
    f.value = (f.position_term + f.cross_term + f.momentum_term) / (s.hbar * s.hbar);
    return f;
}

}  // namespace ricdyn
