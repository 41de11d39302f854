#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ricdyn/core.hpp"

namespace ricdyn {

struct PhaseSpaceGridSpec {
    Range x{-5.0, 5.0};
    std::size_t n_x = 201;
    Range p{-5.0, 5.0};
    std::size_t n_p = 201;

    /// Throws ErrorKind::Domain on empty extents, ErrorKind::GridTooCoarse for fewer than 2 points.
    void validate() const;
    double dx() const { return (x.hi - x.lo) / static_cast<double>(n_x - 1); }
    double dp() const { return (p.hi - p.lo) / static_cast<double>(n_p - 1); }
    double x_at(std::size_t i) const { return x.lo + dx() * static_cast<double>(i); }
    double p_at(std::size_t j) const { return p.lo + dp() * static_cast<double>(j); }
};

/// Grid centred on the centroid, +-n_sigma standard deviations per axis.
/// At 6 sigma the truncated Gaussian mass is below 1e-8; 5 sigma leaves ~1e-6.
PhaseSpaceGridSpec default_grid_spec(const SystemSpec& s, const Centroid& c, const UncertaintyTriple& u,
                                     double n_sigma = 6.0, std::size_t n = 201);

struct PhaseSpaceGrid {
    PhaseSpaceGridSpec spec;
    std::vector<double> values;  // values[i * n_p + j] = W(x_i, p_j)

    double at(std::size_t i, std::size_t j) const { return values[i * spec.n_p + j]; }
    /// Riemann sum of W dx dp.
    double normalization() const;
    struct Peak {
        std::size_t i = 0;
        std::size_t j = 0;
        double x = 0.0;
        double p = 0.0;
        double value = 0.0;
    };
    Peak peak() const;
};

/// W(x, p) = (1/(pi hbar)) exp{-(2/hbar^2) [sp xt^2 - 2 sxp xt pt + sx pt^2]},
/// xt = x - <x>, pt = p - <p>.
double wigner_value(const SystemSpec& s, const Centroid& c, const UncertaintyTriple& u, double x, double p);

/// (1/(pi hbar)) exp(-2 I(xt, pt)), I being the quadratic invariant of the shifted point.
double wigner_from_invariant(const SystemSpec& s, const Centroid& c, const UncertaintyTriple& u, double x, double p);

PhaseSpaceGrid wigner_grid(const SystemSpec& s, const Centroid& c, const UncertaintyTriple& u,
                           const PhaseSpaceGridSpec& spec);

struct Marginals {
    std::vector<double> position;  // integral over p, sampled at spec x points
    std::vector<double> momentum;  // integral over x, sampled at spec p points
};

Marginals marginals(const PhaseSpaceGrid& grid);

struct DensityMoments {
    double mass = 0.0;
    double mean = 0.0;
    double variance = 0.0;
};

/// Riemann-sum moments of a density sampled on a uniform axis starting at lo.
DensityMoments density_moments(std::span<const double> density, double lo, double spacing);

/// p^2/(2m) + m omega0^2 x^2 / 2 at the centroid.
double classical_energy(const SystemSpec& s, double omega0, const Centroid& c);

struct PhaseSpaceSample {
    double t = 0.0;
    Centroid centroid;
    UncertaintyTriple moments;
};

/// max |dW/dt + (p/m) dW/dx - V'(x) dW/dp| * pi hbar over the grid, at every
/// interior sample, with V'(x) = m omega(t)^2 x. The time derivative comes
/// from the neighbouring samples; x and p derivatives use centered
/// differences with a step of 1e-4 of each axis extent.
double continuity_residual(const SystemSpec& s, std::span<const PhaseSpaceSample> trajectory,
                           const PhaseSpaceGridSpec& spec);

void write_grid_csv(std::ostream& out, const PhaseSpaceGrid& grid);

/// Layout: "RDWG", uint32 version (1), uint64 n_x, uint64 n_p,
/// float64 x_min, x_max, p_min, p_max, then n_x * n_p float64 values, row-major
/// in x. All fields little-endian.
void write_grid_binary(std::ostream& out, const PhaseSpaceGrid& grid);
PhaseSpaceGrid read_grid_binary(std::istream& in);

}  // namespace ricdyn
