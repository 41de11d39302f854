#pragma once

#include <span>
#include <vector>

#include "ricdyn/core.hpp"

namespace ricdyn {

struct VelocityFieldSample {
    double x = 0.0;
    double t = 0.0;
    double v = 0.0;
};

/// Moments for constant omega0 > 0, periodic with period pi/omega0.
UncertaintyTriple ho_uncertainty_closed_form(const SystemSpec& s, const UncertaintyTriple& u0, double omega0,
                                             double t);

/// Free spreading: sx = sp0 t^2/m^2 + sx0 + 2 sxp0 t/m, sp = sp0, sxp = sp0 t/m + sxp0.
UncertaintyTriple free_motion_uncertainties(const SystemSpec& s, const UncertaintyTriple& u0, double t);

/// Integrates the closed moment system
///     sx' = 2 sxp/m,   sp' = -2 m omega^2 sxp,   sxp' = sp/m - m omega^2 sx,
/// which conserves sx*sp - sxp^2.
std::vector<UncertaintyTriple> integrate_uncertainty_system(const SystemSpec& s, const UncertaintyTriple& u0,
                                                            std::span<const double> t_grid,
                                                            const IntegratorConfig& cfg = {});

/// Residual of  f''' + 4 omega^2 f' + 4 omega omega' f = 0  for samples f of
/// sigma_x^2, using second-order centered differences. Non-uniform grids are
/// first resampled onto a uniform grid of the same size by local quintic
/// interpolation.
struct ThirdOrderResidual {
    std::vector<double> times;     // interior points where the stencil fits
    std::vector<double> residual;

    double max_abs() const;
};

/// Throws ErrorKind::GridTooCoarse for fewer than 7 samples.
ThirdOrderResidual third_order_residual(std::span<const double> times, std::span<const double> sigma_xx,
                                        const FrequencyProfile& omega);

/// |sigma_xp| / (sigma_x sigma_p), in [0, 1).
double correlation_coefficient(const UncertaintyTriple& u);

/// Phase velocity v(x) = eta' + (alpha'/alpha)(x - eta). Its slope in x is C_R.
VelocityFieldSample velocity_field(const Centroid& c, const ErmakovState& e, double x, double t = 0.0);

/// Coherent-state reference levels: position hbar/(2 m omega0), momentum
/// hbar m omega0 / 2. A variance below its level means squeezing.
double position_squeezing_level(const SystemSpec& s, double omega0);
double momentum_squeezing_level(const SystemSpec& s, double omega0);

}  // namespace ricdyn
