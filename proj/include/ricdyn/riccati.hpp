#pragma once

#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "ricdyn/core.hpp"

namespace ricdyn {

// Width dynamics through the complex Riccati equation
//     C' + C^2 + omega(t)^2 = 0.
// Time runs forward: the field returned by riccati_vector_field is C' itself.

enum class Branch { Plus, Minus };

/// Constant solution C~ = +/- i omega0 for a constant frequency.
struct ParticularSolution {
    Complex value;
    Branch branch = Branch::Plus;
};

/// (C~+, C~-) = (+i omega0, -i omega0). Both are 0 for free motion.
std::pair<ParticularSolution, ParticularSolution> particular_solutions(double omega0);

/// Initial value of the Bernoulli deviation V = C - C~, given either as V0
/// or as kappa0 = 1/V0. V0 = 0 (stay on the particular solution) has no
/// finite kappa0.
class BernoulliInitial {
public:
    static BernoulliInitial from_v0(Complex v0);
    /// Throws ErrorKind::Domain for kappa0 == 0.
    static BernoulliInitial from_kappa0(Complex kappa0);

    Complex v0() const;
    std::optional<Complex> kappa0() const;

private:
    struct V0 {
        Complex value;
    };
    struct Kappa0 {
        Complex value;
    };
    explicit BernoulliInitial(std::variant<V0, Kappa0> rep) : rep_(rep) {}
    std::variant<V0, Kappa0> rep_;
};

/// Closed-form V(t) for constant C~ and t0 = 0:
///     V(t) = e^{-2 C~ t} / (kappa0 + (1 - e^{-2 C~ t}) / (2 C~)).
/// C~ = 0 falls back to the limit V = 1/(kappa0 + t). Throws
/// ErrorKind::Singularity (naming t) where the denominator vanishes.
Complex bernoulli_solution(const ParticularSolution& ctilde, const BernoulliInitial& init, double t);

/// C(t) = C~+ + V(t) with V0 = C0 - C~+, for constant omega0.
RiccatiState riccati_closed_form(double omega0, const RiccatiState& c0, double t);

/// kappa0 expressed through the initial moments, relative to C~+ = i omega0.
/// Throws ErrorKind::Degeneracy on the coherent state, where V0 = 0; use
/// BernoulliInitial::from_v0(0) there.
Complex kappa0_from_initial_moments(const SystemSpec& s, double omega0, const UncertaintyTriple& u);

/// Default |C| bound for blow-up detection: 1e6 * max(max omega, 1).
double default_blowup_bound(const SystemSpec& s);

/// Numerical trajectory of the Riccati equation on t_grid. Throws
/// ErrorKind::BlowUp once |C| exceeds `blowup_bound` (default when <= 0).
/// Lower-half-plane initial data are accepted and evolve as the complex
/// conjugate of the mirrored physical orbit.
std::vector<RiccatiState> integrate_riccati(const SystemSpec& s, const RiccatiState& c0,
                                            std::span<const double> t_grid, const IntegratorConfig& cfg = {},
                                            double blowup_bound = 0.0);

/// (dC_R/dt, dC_I/dt) = (-C_R^2 + C_I^2 - omega0^2, -2 C_R C_I).
std::array<double, 2> riccati_field(double omega0, double c_r, double c_i);

/// riccati_field sampled on an n-by-n lattice (x = C_R, y = C_I).
PlaneField riccati_vector_field(double omega0, Range c_r_range, Range c_i_range, std::size_t n_grid);

}  // namespace ricdyn
