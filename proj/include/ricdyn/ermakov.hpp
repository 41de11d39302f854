#pragma once

#include <memory>
#include <span>
#include <vector>

#include "ricdyn/core.hpp"

namespace ricdyn {

// Real-variable twin of the Riccati equation:
//     alpha'' + omega(t)^2 alpha = 1 / alpha^3,
// with C = alpha'/alpha + i/alpha^2. Only alpha > 0 is represented; the
// alpha < 0 orbits are the mirror image under alpha -> -alpha.

/// Which root of the +/- in the closed forms for alpha. Physical reproduces
/// sigma_xp(t0) = sigma_xp0; Reflected flips the sign of the initial
/// correlation and is kept only for comparison.
enum class SignBranch { Physical, Reflected };

/// Two solutions of eta'' + omega(t)^2 eta = 0 with
///     eta1(t0) = 0, eta1'(t0) = -1/m,   eta2(t0) = 1, eta2'(t0) = 0.
/// Closed form for constant omega; otherwise integrated on a grid and
/// interpolated (quintic Hermite, using eta'' = -omega^2 eta).
class FundamentalPair {
public:
    struct Values {
        double eta1;
        double eta1_dot;
        double eta2;
        double eta2_dot;
    };

    static FundamentalPair closed_form(double mass, double omega0, double t0 = 0.0);
    /// Closed form when s.omega is constant, numerical otherwise. The pair
    /// starts at t_grid.front() and can be evaluated on [t_grid.front(), t_grid.back()].
    static FundamentalPair integrate(const SystemSpec& s, std::span<const double> t_grid,
                                     const IntegratorConfig& cfg = {});

    Values at(double t) const;
    double t0() const { return t0_; }

private:
    struct Tabulated;

    FundamentalPair() = default;

    double mass_ = 1.0;
    double omega0_ = 0.0;
    double t0_ = 0.0;
    std::shared_ptr<const Tabulated> table_;
};

struct QuadraticInvariantCoefficients {
    double a = 0.0;      // coefficient of X^2
    double b = 0.0;      // coefficient of P^2
    double cross = 0.0;  // coefficient of (XP + PX); carries the sign of sigma_xp0

    /// a*b - cross^2; equals 1/hbar^2 for minimum-uncertainty data.
    double discriminant() const { return a * b - cross * cross; }
};

std::vector<ErmakovState> integrate_ermakov(const SystemSpec& s, const ErmakovState& e0,
                                            std::span<const double> t_grid, const IntegratorConfig& cfg = {},
                                            double alpha_floor = 1e-8);

/// alpha(t) = sqrt( (2m/hbar) [ sp0 eta1^2 + sx0 eta2^2 - 2 sxp0 eta1 eta2 ] ) on
/// the physical branch. Throws ErrorKind::Domain on a negative radicand,
/// which only Robertson-violating input can produce.
double ermakov_from_fundamental(const SystemSpec& s, const UncertaintyTriple& u0, const FundamentalPair& pair,
                                double t, SignBranch branch = SignBranch::Physical);
/// Same construction, also returning alpha'.
ErmakovState ermakov_state_from_fundamental(const SystemSpec& s, const UncertaintyTriple& u0,
                                            const FundamentalPair& pair, double t,
                                            SignBranch branch = SignBranch::Physical);

/// Harmonic-oscillator closed form for constant omega0 > 0.
double ermakov_closed_form_ho(const SystemSpec& s, const UncertaintyTriple& u0, double omega0, double t,
                              SignBranch branch = SignBranch::Physical);

/// omega0 -> 0 limit of ermakov_closed_form_ho.
double ermakov_free_motion(const SystemSpec& s, const UncertaintyTriple& u0, double t,
                           SignBranch branch = SignBranch::Physical);

/// I = (m / 2 hbar) [ (eta' alpha - eta alpha')^2 + (eta / alpha)^2 ]; conserved
/// for any omega(t).
double ermakov_invariant(const SystemSpec& s, const Centroid& c, const ErmakovState& e);

/// A = 2 sp0/hbar^2, B = 2 sx0/hbar^2, cross = 2 sxp0/hbar^2.
QuadraticInvariantCoefficients invariant_coefficients_from_initial(const SystemSpec& s,
                                                                   const UncertaintyTriple& u0);

/// alpha = sqrt(m hbar) [A f1^2 + B f2^2 - 2 cross f1 f2]^{1/2}, where f_i are
/// the fundamental pair. Always the positive root.
double alpha_from_invariant_coefficients(const SystemSpec& s, const QuadraticInvariantCoefficients& k,
                                         const FundamentalPair& pair, double t,
                                         SignBranch branch = SignBranch::Physical);

/// (d alpha/dt, d alpha'/dt) = (alpha', -omega0^2 alpha + 1/alpha^3).
std::array<double, 2> ermakov_field(double omega0, double alpha, double alpha_dot);

/// ermakov_field on an n-by-n lattice (x = alpha, y = alpha'); alpha range must be > 0.
PlaneField ermakov_vector_field(double omega0, Range alpha_range, Range alpha_dot_range, std::size_t n_grid);

}  // namespace ricdyn
