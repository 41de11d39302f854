#pragma once

#include <span>
#include <vector>

#include "ricdyn/core.hpp"

namespace ricdyn {

// Linearization C = lambda'/lambda, turning the Riccati equation into
//     lambda'' + omega(t)^2 lambda = 0,
// with Wronskian lambda_I' lambda_R - lambda_I lambda_R' = 1 and
// |lambda| = alpha, arg(lambda)' = 1/alpha^2.

/// Sign in front of lambda_R. Plus gives Wronskian +1; Minus gives -1.
enum class LambdaSign { Plus, Minus };

/// I = (1/hbar^2) [ sp <x>^2 - 2 sxp <x><p> + sx <p>^2 ].
struct InvariantObservableForm {
    double value = 0.0;
    double position_term = 0.0;  // sp <x>^2
    double cross_term = 0.0;     // -2 sxp <x><p>
    double momentum_term = 0.0;  // sx <p>^2

    /// c = sqrt(m / (2 hbar I)). Throws ErrorKind::ZeroCentroid when I <= 0.
    double scale(const SystemSpec& s) const;
};

/// Throws ErrorKind::WronskianViolation unless |W(l0) - 1| <= 1e-10.
std::vector<LambdaState> integrate_lambda(const SystemSpec& s, const LambdaState& l0,
                                          std::span<const double> t_grid, const IntegratorConfig& cfg = {});

/// lambda(t0) = alpha0 (zero phase), lambda'(t0) = C0 alpha0.
LambdaState lambda_from_ermakov(const ErmakovState& e);

/// c = sqrt(m / (2 hbar I)); throws ErrorKind::ZeroCentroid for I <= 0.
double lambda_scale(const SystemSpec& s, double invariant);

/// lambda_R = sign * c alpha^2 (eta' - (alpha'/alpha) eta), paired with lambda_I = c eta.
double lambda_r_from_eta_alpha(const SystemSpec& s, const Centroid& c, const ErmakovState& e, double invariant,
                               LambdaSign sign = LambdaSign::Plus);

/// Full lambda state with lambda_I = c <x>:
///     lambda_R  = (2c/hbar) (sx <p> - sxp <x>),
///     lambda_R' = (2c/(m hbar)) (sxp <p> - sp <x>),   lambda_I' = c <p>/m.
/// Only LambdaSign::Plus yields a unit Wronskian; Minus throws
/// ErrorKind::WronskianViolation.
LambdaState lambda_from_observables(const SystemSpec& s, const Centroid& c, const UncertaintyTriple& u,
                                   double invariant, LambdaSign sign = LambdaSign::Plus);

InvariantObservableForm invariant_observable_form(const SystemSpec& s, const Centroid& c,
                                                  const UncertaintyTriple& u);

}  // namespace ricdyn
