#pragma once

#include <span>

#include "ricdyn/core.hpp"

namespace ricdyn {

// Gaussian Feynman kernel of the quadratic Hamiltonian, written with the
// kernel lambda: lambda(0) = alpha0, lambda'(0) = i/alpha0, so that
// lambda_I(0) = 0 and lambda_R'(0) = 0.
//
//   G(x, x'; t, 0) = (m / (2 pi i hbar alpha0 lambda_I))^{1/2}
//       exp{ (i m / 2 hbar) [ (lambda_I'/lambda_I) x^2 - 2 x x' / (lambda_I alpha0)
//                             + (lambda_R/lambda_I) (x'/alpha0)^2 ] }

struct GaussianKernelParams {
    Complex prefactor;
    Complex a_xx;    // coefficient of x^2
    Complex a_xpxp;  // coefficient of x'^2
    Complex a_xxp;   // coefficient of x x'

    Complex operator()(double x, double x_prime) const;
};

/// Initial packet
///   psi0(x') = (m / (pi hbar alpha0^2))^{1/4}
///              exp{ (i m / 2 hbar) [ C0 (x' - x_center)^2 + 2 (p0/m) (x' - x_center) ] }
/// with C0 = c_r0 + i/alpha0^2. c_r0 = alpha0'/alpha0 is zero for the
/// plain Gaussian; nonzero values give an initially spreading or focusing packet.
struct InitialGaussian {
    double alpha0 = 1.0;
    double p0 = 0.0;
    double x_center = 0.0;
    double c_r0 = 0.0;

    Complex c0() const { return {c_r0, 1.0 / (alpha0 * alpha0)}; }
    Complex psi(const SystemSpec& s, double x) const;
    static InitialGaussian from(const SystemSpec& s, const Centroid& c, const ErmakovState& e);
};

/// psi(x) = amplitude * exp(quadratic x^2 + linear x + constant).
struct EvolvedGaussian {
    Complex amplitude;
    Complex quadratic;
    Complex linear;
    Complex constant;

    Complex psi(double x) const;
    /// Closed-form integral of |psi|^2 over the real line.
    double norm() const;
    /// Reads (C, eta, eta') back out of the exponent.
    GaussianWavePacket packet(const SystemSpec& s) const;
};

/// lambda(0) = alpha0, lambda'(0) = i/alpha0.
LambdaState kernel_lambda_initial(double alpha0);

/// Throws ErrorKind::FocalPoint when |lambda_I| < 1e-9 |lambda| (caustic).
GaussianKernelParams kernel_params(const SystemSpec& s, const LambdaState& l, double alpha0);

/// Kernel applied to the initial packet by completing the square.
EvolvedGaussian apply_kernel(const SystemSpec& s, const InitialGaussian& init, const LambdaState& l);

GaussianWavePacket evolve_via_kernel(const SystemSpec& s, const InitialGaussian& init, const LambdaState& l);

struct KernelResidualGrid {
    double t0 = 0.0;          // time of l_traj[0]
    double dt = 1e-3;         // uniform spacing of l_traj
    Range x{-2.0, 2.0};
    std::size_t n_x = 21;
    Range x_prime{-2.0, 2.0};
    std::size_t n_x_prime = 9;
    double alpha0 = 1.0;
    double fd_step = 1e-3;    // spatial finite-difference step
    double focal_margin = 0.05;  // skip times with |lambda_I| < margin * |lambda|
};

/// max |i hbar dG/dt - H G| / |G| over the space grid and every interior
/// time of l_traj, with both derivatives taken by fourth-order centered
/// differences. Throws ErrorKind::GridTooCoarse for fewer than 5 samples or when every
/// interior time is near a caustic.
double verify_kernel_satisfies_tdse(const SystemSpec& s, std::span<const LambdaState> l_traj,
                                    const KernelResidualGrid& grid);

}  // namespace ricdyn
