#include "ricdyn/wigner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "ricdyn/complex_newton.hpp"
#include "ricdyn/parallel.hpp"

namespace ricdyn {
namespace {

static_assert(std::endian::native == std::endian::little, "grid serialization assumes a little-endian host");

constexpr char kMagic[4] = {'R', 'D', 'W', 'G'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw Error(ErrorKind::Parse, "truncated Wigner grid file");
    return v;
}

double exponent(const SystemSpec& s, const UncertaintyTriple& u, double xt, double pt) {
    return -2.0 / (s.hbar * s.hbar) * (u.sigma_pp * xt * xt - 2.0 * u.sigma_xp * xt * pt + u.sigma_xx * pt * pt);
}

}  // namespace

void PhaseSpaceGridSpec::validate() const {
    if (!(x.hi > x.lo) || !(p.hi > p.lo)) throw Error(ErrorKind::Domain, "phase-space grid extents must be positive");
    if (n_x < 2 || n_p < 2) throw Error(ErrorKind::GridTooCoarse, "phase-space grid needs at least 2 points per axis");
}

PhaseSpaceGridSpec default_grid_spec(const SystemSpec& s, const Centroid& c, const UncertaintyTriple& u,
                                     double n_sigma, std::size_t n) {
    if (!(u.sigma_xx > 0.0) || !(u.sigma_pp > 0.0)) throw Error(ErrorKind::Domain, "variances must be positive");
    if (!(n_sigma > 0.0)) throw Error(ErrorKind::Domain, "n_sigma must be positive");
    const double x0 = c.position();
    const double p0 = c.momentum(s.mass);
    const double wx = n_sigma * std::sqrt(u.sigma_xx);
    const double wp = n_sigma * std::sqrt(u.sigma_pp);
    PhaseSpaceGridSpec spec{{x0 - wx, x0 + wx}, n, {p0 - wp, p0 + wp}, n};
    spec.validate();
    return spec;
}

double PhaseSpaceGrid::normalization() const {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum * spec.dx() * spec.dp();
}

PhaseSpaceGrid::Peak PhaseSpaceGrid::peak() const {
    const auto it = std::max_element(values.begin(), values.end());
    const auto k = static_cast<std::size_t>(it - values.begin());
    Peak pk;
    pk.i = k / spec.n_p;
    pk.j = k % spec.n_p;
    pk.x = spec.x_at(pk.i);
    pk.p = spec.p_at(pk.j);
    pk.value = *it;
    return pk;
}

double wigner_value(const SystemSpec& s, const Centroid& c, const UncertaintyTriple& u, double x, double p) {
    const double xt = x - c.position();
    const double pt = p - c.momentum(s.mass);
    return std::exp(exponent(s, u, xt, pt)) / (std::numbers::pi * s.hbar);
}

double wigner_from_invariant(const SystemSpec& s, const Centroid& c, const UncertaintyTriple& u, double x, double p) {
    const Centroid shifted = Centroid::from_observables(x - c.position(), p - c.momentum(s.mass), s.mass);
    const double inv = invariant_observable_form(s, shifted, u).value;
    return std::exp(-2.0 * inv) / (std::numbers::pi * s.hbar);
}

PhaseSpaceGrid wigner_grid(const SystemSpec& s, const Centroid& c, const UncertaintyTriple& u,
                           const PhaseSpaceGridSpec& spec) {
    s.validate();
    spec.validate();
    PhaseSpaceGrid g{spec, std::vector<double>(spec.n_x * spec.n_p)};
    parallel_for(spec.n_x, [&](std::size_t i) {
        const double x = spec.x_at(i);
        for (std::size_t j = 0; j < spec.n_p; ++j) g.values[i * spec.n_p + j] = wigner_value(s, c, u, x, spec.p_at(j));
    });
    return g;
}

Marginals marginals(const PhaseSpaceGrid& grid) {
    const auto& spec = grid.spec;
    Marginals m{std::vector<double>(spec.n_x, 0.0), std::vector<double>(spec.n_p, 0.0)};
    for (std::size_t i = 0; i < spec.n_x; ++i) {
        for (std::size_t j = 0; j < spec.n_p; ++j) {
            const double w = grid.at(i, j);
            m.position[i] += w;
            m.momentum[j] += w;
        }
    }
    for (double& v : m.position) v *= spec.dp();
    for (double& v : m.momentum) v *= spec.dx();
    return m;
}

DensityMoments density_moments(std::span<const double> density, double lo, double spacing) {
    DensityMoments out;
    double first = 0.0;
    for (std::size_t i = 0; i < density.size(); ++i) {
        const double x = lo + spacing * static_cast<double>(i);
        out.mass += density[i];
        first += density[i] * x;
    }
    out.mass *= spacing;
    first *= spacing;
    if (!(out.mass > 0.0)) throw Error(ErrorKind::Domain, "density has no mass");
    out.mean = first / out.mass;
    double second = 0.0;
    for (std::size_t i = 0; i < density.size(); ++i) {
        const double d = lo + spacing * static_cast<double>(i) - out.mean;
        second += density[i] * d * d;
    }
    out.variance = second * spacing / out.mass;
    return out;
}

double classical_energy(const SystemSpec& s, double omega0, const Centroid& c) {
    const double x = c.position();
    const double p = c.momentum(s.mass);
    return p * p / (2.0 * s.mass) + 0.5 * s.mass * omega0 * omega0 * x * x;
}

double continuity_residual(const SystemSpec& s, std::span<const PhaseSpaceSample> trajectory,
                           const PhaseSpaceGridSpec& spec) {
    s.validate();
    spec.validate();
    if (trajectory.size() < 3) throw Error(ErrorKind::GridTooCoarse, "continuity residual needs at least 3 samples");
    for (std::size_t k = 1; k < trajectory.size(); ++k) {
        if (!(trajectory[k].t > trajectory[k - 1].t)) {
            throw Error(ErrorKind::Domain, "trajectory times must be strictly increasing");
        }
    }
    const double m = s.mass;
    const double hx = 1e-4 * (spec.x.hi - spec.x.lo);
    const double hp = 1e-4 * (spec.p.hi - spec.p.lo);
    const double scale = std::numbers::pi * s.hbar;

    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < trajectory.size(); ++k) {
        const auto& a = trajectory[k - 1];
        const auto& b = trajectory[k];
        const auto& c = trajectory[k + 1];
        // Three-point derivative at b.t; exact for quadratics on non-uniform spacing.
        const double h0 = b.t - a.t;
        const double h1 = c.t - b.t;
        const double wa = -h1 / (h0 * (h0 + h1));
        const double wb = (h1 - h0) / (h0 * h1);
        const double wc = h0 / (h1 * (h0 + h1));
        const double w = s.omega(b.t);

        std::vector<double> row_worst(spec.n_x, 0.0);
        parallel_for(spec.n_x, [&](std::size_t i) {
            const double x = spec.x_at(i);
            double local = 0.0;
            for (std::size_t j = 0; j < spec.n_p; ++j) {
                const double p = spec.p_at(j);
                auto wig = [&](const PhaseSpaceSample& smp, double xx, double pp) {
                    return wigner_value(s, smp.centroid, smp.moments, xx, pp);
                };
                const double dwdt = wa * wig(a, x, p) + wb * wig(b, x, p) + wc * wig(c, x, p);
                const double dwdx = (wig(b, x + hx, p) - wig(b, x - hx, p)) / (2.0 * hx);
                const double dwdp = (wig(b, x, p + hp) - wig(b, x, p - hp)) / (2.0 * hp);
                const double r = dwdt + p / m * dwdx - m * w * w * x * dwdp;
                local = std::max(local, std::abs(r) * scale);
            }
            row_worst[i] = local;
        });
        worst = std::max(worst, *std::max_element(row_worst.begin(), row_worst.end()));
    }
    return worst;
}

void write_grid_csv(std::ostream& out, const PhaseSpaceGrid& grid) {
    out << "x,p,W\n";
    const auto& spec = grid.spec;
    for (std::size_t i = 0; i < spec.n_x; ++i) {
        for (std::size_t j = 0; j < spec.n_p; ++j) {
            out << fmt::format("{:.17g},{:.17g},{:.17g}\n", spec.x_at(i), spec.p_at(j), grid.at(i, j));
        }
    }
}

void write_grid_binary(std::ostream& out, const PhaseSpaceGrid& grid) {
    const auto& spec = grid.spec;
    out.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(out, kVersion);
    put<std::uint64_t>(out, spec.n_x);
    put<std::uint64_t>(out, spec.n_p);
    put(out, spec.x.lo);
    put(out, spec.x.hi);
    put(out, spec.p.lo);
    put(out, spec.p.hi);
    out.write(reinterpret_cast<const char*>(grid.values.data()),
              static_cast<std::streamsize>(grid.values.size() * sizeof(double)));
}

PhaseSpaceGrid read_grid_binary(std::istream& in) {
    char magic[4];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw Error(ErrorKind::Parse, "not a Wigner grid file");
    if (get<std::uint32_t>(in) != kVersion) throw Error(ErrorKind::Parse, "unsupported Wigner grid version");
    PhaseSpaceGrid g;
    g.spec.n_x = get<std::uint64_t>(in);
    g.spec.n_p = get<std::uint64_t>(in);
    g.spec.x.lo = get<double>(in);
    g.spec.x.hi = get<double>(in);
    g.spec.p.lo = get<double>(in);
    g.spec.p.hi = get<double>(in);
    g.spec.validate();
    g.values.resize(g.spec.n_x * g.spec.n_p);
    in.read(reinterpret_cast<char*>(g.values.data()), static_cast<std::streamsize>(g.values.size() * sizeof(double)));
    if (!in) throw Error(ErrorKind::Parse, "truncated Wigner grid file");
    return g;
}

}  // namespace ricdyn
