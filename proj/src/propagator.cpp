#include "ricdyn/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ricdyn {
namespace {

constexpr Complex kI(0.0, 1.0);
constexpr double kPi = std::numbers::pi;

}  // namespace

Complex GaussianKernelParams::operator()(double x, double x_prime) const {
    return prefactor * std::exp(a_xx * x * x + a_xxp * x * x_prime + a_xpxp * x_prime * x_prime);
}

Complex InitialGaussian::psi(const SystemSpec& s, double x) const {
    const double norm = std::pow(s.mass / (kPi * s.hbar * alpha0 * alpha0), 0.25);
    const double u = x - x_center;
    return norm * std::exp(kI * s.mass / (2.0 * s.hbar) * (c0() * u * u + 2.0 * p0 / s.mass * u));
}

InitialGaussian InitialGaussian::from(const SystemSpec& s, const Centroid& c, const ErmakovState& e) {
    if (!(e.alpha > 0.0)) throw Error(ErrorKind::Domain, "alpha0 must be > 0");
    return {e.alpha, c.momentum(s.mass), c.eta, e.alpha_dot / e.alpha};
}

Complex EvolvedGaussian::psi(double x) const { return amplitude * std::exp(quadratic * x * x + linear * x + constant); }

double EvolvedGaussian::norm() const {
    const double q = 2.0 * quadratic.real();
    const double l = 2.0 * linear.real();
    if (!(q < 0.0)) throw Error(ErrorKind::UnphysicalState, "evolved packet is not normalizable");
    return std::norm(amplitude) * std::exp(2.0 * constant.real()) * std::sqrt(kPi / -q) * std::exp(-l * l / (4.0 * q));
}

GaussianWavePacket EvolvedGaussian::packet(const SystemSpec& s) const {
    // quadratic = (i m / 2 hbar) C,  linear = (i/hbar) p - (i m/hbar) C eta.
    const Complex c = -2.0 * kI * s.hbar / s.mass * quadratic;
    if (!(c.imag() > 0.0)) throw Error(ErrorKind::UnphysicalState, "evolved packet has C_I <= 0");
    const double eta = s.hbar * linear.real() / (s.mass * c.imag());
    const double p = s.hbar * linear.imag() + s.mass * c.real() * eta;
    return {Centroid{eta, p / s.mass}, RiccatiState::from(c)};
}

LambdaState kernel_lambda_initial(double alpha0) {
    if (!(alpha0 > 0.0)) throw Error(ErrorKind::Domain, "alpha0 must be > 0");
    return {alpha0, 0.0, 0.0, 1.0 / alpha0};
}

GaussianKernelParams kernel_params(const SystemSpec& s, const LambdaState& l, double alpha0) {
    s.validate();
    if (!(alpha0 > 0.0)) throw Error(ErrorKind::Domain, "alpha0 must be > 0");
    if (!(std::abs(l.lambda_i) >= 1e-9 * std::abs(l.lambda()))) {
        throw Error(ErrorKind::FocalPoint, "kernel is singular: lambda_I = " + std::to_string(l.lambda_i));
    }
    const double m = s.mass;
    const double hbar = s.hbar;
    const Complex phase = kI * m / (2.0 * hbar);
    GaussianKernelParams k;
    k.prefactor = std::sqrt(Complex(m) / (2.0 * kPi * kI * hbar * alpha0 * l.lambda_i));
    k.a_xx = phase * (l.lambda_i_dot / l.lambda_i);
    k.a_xxp = phase * (-2.0 / (l.lambda_i * alpha0));
    k.a_xpxp = phase * (l.lambda_r / (l.lambda_i * alpha0 * alpha0));
    return k;
}

EvolvedGaussian apply_kernel(const SystemSpec& s, const InitialGaussian& init, const LambdaState& l) {
    const auto k = kernel_params(s, l, init.alpha0);
    const double m = s.mass;
    const double hbar = s.hbar;

    // psi0 = n0 exp(a0 x'^2 + b0 x' + g0) after expanding around x_center.
    const Complex a0 = kI * m / (2.0 * hbar) * init.c0();
    const Complex bp = kI * init.p0 / hbar;
    const double xc = init.x_center;
    const Complex b0 = bp - 2.0 * a0 * xc;
    const Complex g0 = a0 * xc * xc - bp * xc;
    const double n0 = std::pow(m / (kPi * hbar * init.alpha0 * init.alpha0), 0.25);

    // int exp(q x'^2 + (B x + b0) x') dx' = sqrt(pi / -q) exp(-(B x + b0)^2 / (4 q)).
    const Complex q = k.a_xpxp + a0;
    if (!(q.real() < 0.0)) throw Error(ErrorKind::UnphysicalState, "initial packet is not normalizable");
    const Complex bx = k.a_xxp;

    EvolvedGaussian out;
    out.amplitude = k.prefactor * n0 * std::sqrt(kPi / -q);
    out.quadratic = k.a_xx - bx * bx / (4.0 * q);
    out.linear = -bx * b0 / (2.0 * q);
    out.constant = g0 - b0 * b0 / (4.0 * q);
    return out;
}

GaussianWavePacket evolve_via_kernel(const SystemSpec& s, const InitialGaussian& init, const LambdaState& l) {
    return apply_kernel(s, init, l).packet(s);
}

double verify_kernel_satisfies_tdse(const SystemSpec& s, std::span<const LambdaState> l_traj,
                                    const KernelResidualGrid& grid) {
    s.validate();
    if (l_traj.size() < 5) throw Error(ErrorKind::GridTooCoarse, "kernel residual needs at least 5 time samples");
    if (grid.n_x < 1 || grid.n_x_prime < 1 || !(grid.dt > 0.0) || !(grid.fd_step > 0.0)) {
        throw Error(ErrorKind::Domain, "invalid kernel residual grid");
    }
    const double m = s.mass;
    const double hbar = s.hbar;
    const double h = grid.fd_step;

    auto coord = [](Range r, std::size_t n, std::size_t i) {
        return n == 1 ? 0.5 * (r.lo + r.hi) : r.lo + (r.hi - r.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    auto near_focal = [&](const LambdaState& l) {
        return std::abs(l.lambda_i) < grid.focal_margin * std::abs(l.lambda());
    };

    double worst = 0.0;
    bool any = false;
    for (std::size_t k = 2; k + 2 < l_traj.size(); ++k) {
        bool skip = false;
        for (std::size_t j = k - 2; j <= k + 2; ++j) skip = skip || near_focal(l_traj[j]);
        if (skip) continue;
        any = true;
        const double t = grid.t0 + grid.dt * static_cast<double>(k);
        const double w = s.omega(t);
        const auto m2 = kernel_params(s, l_traj[k - 2], grid.alpha0);
        const auto m1 = kernel_params(s, l_traj[k - 1], grid.alpha0);
        const auto now = kernel_params(s, l_traj[k], grid.alpha0);
        const auto p1 = kernel_params(s, l_traj[k + 1], grid.alpha0);
        const auto p2 = kernel_params(s, l_traj[k + 2], grid.alpha0);
        for (std::size_t i = 0; i < grid.n_x; ++i) {
            const double x = coord(grid.x, grid.n_x, i);
            for (std::size_t j = 0; j < grid.n_x_prime; ++j) {
                const double xp = coord(grid.x_prime, grid.n_x_prime, j);
                const Complex g = now(x, xp);
                // Fourth-order centered stencils.
                const Complex g_t = (m2(x, xp) - 8.0 * m1(x, xp) + 8.0 * p1(x, xp) - p2(x, xp)) / (12.0 * grid.dt);
                const Complex g_xx = (-now(x + 2.0 * h, xp) + 16.0 * now(x + h, xp) - 30.0 * g + 16.0 * now(x - h, xp) -
                                      now(x - 2.0 * h, xp)) /
                                     (12.0 * h * h);
                const Complex residual = kI * hbar * g_t - (-hbar * hbar / (2.0 * m) * g_xx + 0.5 * m * w * w * x * x * g);
                worst = std::max(worst, std::abs(residual) / std::abs(g));
            }
        }
    }
    if (!any) throw Error(ErrorKind::GridTooCoarse, "every interior time of the kernel trajectory is near a caustic");
    return worst;
}

}  // namespace ricdyn
