#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "ricdyn/frequency_profile.hpp"
#include "ricdyn/integrator.hpp"

namespace ricdyn {

using Complex = std::complex<double>;

/// Parameters of H = p^2/2m + m omega(t)^2 x^2 / 2.
struct SystemSpec {
    double mass = 1.0;
    double hbar = 1.0;
    FrequencyProfile omega = FrequencyProfile::constant(1.0);

    /// Throws ErrorKind::Domain unless mass > 0 and hbar > 0.
    void validate() const;
};

/// Complex width parameter C = C_R + i C_I of the Gaussian exponent.
/// Normalizable packets need C_I > 0.
struct RiccatiState {
    double c_r = 0.0;
    double c_i = 1.0;

    Complex value() const { return {c_r, c_i}; }
    static RiccatiState from(Complex c) { return {c.real(), c.imag()}; }
};

/// Real width variable alpha = sqrt(2 m sigma_x^2 / hbar) and its rate.
struct ErmakovState {
    double alpha = 1.0;
    double alpha_dot = 0.0;
};

/// Packet maximum: <x> = eta, <p> = m * eta_dot.
struct Centroid {
    double eta = 0.0;
    double eta_dot = 0.0;

    double position() const { return eta; }
    double momentum(double mass) const { return mass * eta_dot; }
    static Centroid from_observables(double x, double p, double mass) { return {x, p / mass}; }
};

/// Second moments (sigma_x^2, sigma_p^2, sigma_xp) of a Gaussian state.
struct UncertaintyTriple {
    double sigma_xx = 0.5;
    double sigma_pp = 0.5;
    double sigma_xp = 0.0;

    /// sigma_xx * sigma_pp - sigma_xp^2.
    double determinant() const { return sigma_xx * sigma_pp - sigma_xp * sigma_xp; }
    /// Relative distance of the determinant from hbar^2/4.
    double robertson_defect(double hbar) const;
};

/// lambda = lambda_R + i lambda_I solving lambda'' + omega^2 lambda = 0.
struct LambdaState {
    double lambda_r = 1.0;
    double lambda_i = 0.0;
    double lambda_r_dot = 0.0;
    double lambda_i_dot = 1.0;

    Complex lambda() const { return {lambda_r, lambda_i}; }
    Complex lambda_dot() const { return {lambda_r_dot, lambda_i_dot}; }
    /// lambda_I' lambda_R - lambda_I lambda_R'; equals 1 for physical data.
    double wronskian() const { return lambda_i_dot * lambda_r - lambda_i * lambda_r_dot; }
    /// C = lambda' / lambda.
    Complex riccati() const { return lambda_dot() / lambda(); }
    /// Polar angle atan2(lambda_I, lambda_R).
    double phase() const;
};

struct GaussianWavePacket {
    Centroid centroid;
    RiccatiState riccati;
};

// State-representation maps. All carry m and hbar explicitly where needed.

RiccatiState riccati_from_ermakov(const ErmakovState& e);
ErmakovState ermakov_from_riccati(const RiccatiState& c);
UncertaintyTriple uncertainties_from_ermakov(const SystemSpec& s, const ErmakovState& e);
UncertaintyTriple uncertainties_from_riccati(const SystemSpec& s, const RiccatiState& c);
/// alpha0 = sqrt(2m/hbar) sigma_x, alpha_dot0 = sqrt(2/(hbar m)) sigma_xp / sigma_x.
ErmakovState ermakov_from_uncertainties(const SystemSpec& s, const UncertaintyTriple& u);

/// Throws unless both variances are positive and the Robertson defect is
/// below `tol`.
void require_minimum_uncertainty(const UncertaintyTriple& u, double hbar, double tol = 1e-9);

/// Unwrapped polar angles of a lambda trajectory.
std::vector<double> unwrapped_phases(std::span<const LambdaState> traj);

/// Classical equation eta'' + omega(t)^2 eta = 0.
std::vector<Centroid> integrate_centroid(const SystemSpec& s, const Centroid& c0,
                                         std::span<const double> t_grid,
                                         const IntegratorConfig& cfg = {});

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

/// Planar vector field sampled on an nx-by-ny lattice; values[ix * ny + iy]
/// is the field at (xs[ix], ys[iy]).
struct PlaneField {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<std::array<double, 2>> values;

    const std::array<double, 2>& at(std::size_t ix, std::size_t iy) const { return values[ix * ys.size() + iy]; }
};

/// Samples field(x, y) on an n-by-n lattice spanning the two ranges (n >= 2).
PlaneField sample_plane_field(Range x_range, Range y_range, std::size_t n,
                              const std::function<std::array<double, 2>(double, double)>& field);

/// n+1 evenly spaced points on [t0, t1].
std::vector<double> uniform_grid(double t0, double t1, std::size_t n_steps);

}  // namespace ricdyn
