#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "ricdyn/complex_newton.hpp"
#include "ricdyn/propagator.hpp"
#include "ricdyn/riccati.hpp"

using namespace ricdyn;
using doctest::Approx;
constexpr double kPi = std::numbers::pi;
constexpr Complex kI(0.0, 1.0);

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected ricdyn::Error");
    return ErrorKind::Validation;
}

SystemSpec unit(double w) { return {1.0, 1.0, FrequencyProfile::constant(w)}; }

IntegratorConfig tight() {
    IntegratorConfig cfg;
    cfg.abs_tol = cfg.rel_tol = 1e-12;
    return cfg;
}

// Kernel lambda on t0, t0 + dt, ..., integrated from t = 0.
std::vector<LambdaState> kernel_trajectory(const SystemSpec& s, double alpha0, double t0, double dt,
                                           std::size_t n) {
    std::vector<double> grid{0.0};
    for (std::size_t k = 0; k < n; ++k) grid.push_back(t0 + dt * static_cast<double>(k));
    auto traj = integrate_lambda(s, kernel_lambda_initial(alpha0), grid, tight());
    traj.erase(traj.begin());
    return traj;
}

}  // namespace

TEST_CASE("kernel_params examples") {
    const SystemSpec s;
    // Free particle at time t: lambda = 1 + i t.
    for (double t : {0.5, 1.0, 3.0}) {
        const auto k = kernel_params(s, {1.0, t, 0.0, 1.0}, 1.0);
        CHECK(std::abs(k.a_xx - kI / (2.0 * t)) < 1e-15);
        CHECK(std::abs(k.a_xpxp - kI / (2.0 * t)) < 1e-15);
        CHECK(std::abs(k.a_xxp + kI / t) < 1e-15);
        for (double x : {-1.0, 0.3}) {
            for (double xp : {0.0, 0.8}) {
                CHECK(std::abs(k(x, xp) - oracle::textbook_kernel(1.0, 1.0, 0.0, t, x, xp)) < 1e-14);
            }
        }
    }

    // Oscillator at a quarter period: lambda = i.
    const auto q = kernel_params(s, {0.0, 1.0, -1.0, 0.0}, 1.0);
    CHECK(std::abs(q.a_xx) < 1e-15);
    CHECK(std::abs(q.a_xpxp) < 1e-15);
    CHECK(std::abs(q.a_xxp + kI) < 1e-15);
    CHECK(std::abs(q(0.7, -0.4) - oracle::textbook_kernel(1.0, 1.0, 1.0, kPi / 2, 0.7, -0.4)) < 1e-14);

    CHECK(kind_of([&] { kernel_params(s, kernel_lambda_initial(1.0), 1.0); }) == ErrorKind::FocalPoint);
    CHECK(kind_of([&] { kernel_params(s, {-1.0, 1e-12, 0.0, -1.0}, 1.0); }) == ErrorKind::FocalPoint);
    CHECK(kind_of([&] { kernel_params(s, {1.0, 1.0, 0.0, 1.0}, 0.0); }) == ErrorKind::Domain);
}

TEST_CASE("integrated kernel lambda hits the focal point of the oscillator") {
    const auto traj = integrate_lambda(unit(1.0), kernel_lambda_initial(1.0), std::vector<double>{0.0, kPi});
    CHECK(kind_of([&] { kernel_params(unit(1.0), traj.back(), 1.0); }) == ErrorKind::FocalPoint);
}

TEST_CASE("evolve_via_kernel examples") {
    SUBCASE("coherent state keeps its width and follows the classical orbit") {
        const SystemSpec s = unit(1.0);
        const InitialGaussian init{1.0, 0.0, 1.0, 0.0};
        for (double t : {0.3, 1.0, 2.0, 4.0, 7.5}) {
            const LambdaState l{std::cos(t), std::sin(t), -std::sin(t), std::cos(t)};
            const auto w = evolve_via_kernel(s, init, l);
            CHECK(std::abs(w.riccati.value() - kI) < 1e-12);
            CHECK(w.centroid.eta == Approx(std::cos(t)).epsilon(1e-12).scale(1.0));
            CHECK(w.centroid.eta_dot == Approx(-std::sin(t)).epsilon(1e-12).scale(1.0));
        }
    }
    SUBCASE("free spreading") {
        const SystemSpec s = unit(0.0);
        const auto w = evolve_via_kernel(s, {1.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 0.0, 1.0});
        const auto u = uncertainties_from_riccati(s, w.riccati);
        CHECK(u.sigma_xx == Approx(1.0).epsilon(1e-14));
        CHECK(ermakov_from_riccati(w.riccati).alpha == Approx(std::sqrt(2.0)).epsilon(1e-14));
        CHECK(w.centroid.eta == 0.0);
    }
    SUBCASE("squeezed oscillator state at a quarter period") {
        const SystemSpec s = unit(1.0);
        const double a0 = std::sqrt(2.0);
        const double t = kPi / 2;
        const LambdaState l{a0 * std::cos(t), std::sin(t) / a0, -a0 * std::sin(t), std::cos(t) / a0};
        const auto w = evolve_via_kernel(s, {a0, 0.0, 0.0, 0.0}, l);
        CHECK(uncertainties_from_riccati(s, w.riccati).sigma_xx == Approx(0.25).epsilon(1e-14));
    }
}

TEST_CASE("property: kernel evolution matches direct evolution, is normalized and recovers lambda'/lambda") {
    oracle::Rng rng(61);
    const std::vector<FrequencyProfile> profiles{
        FrequencyProfile::constant(1.0),
        FrequencyProfile::constant(0.0),
        FrequencyProfile::piecewise_constant({{0.0, 1.0}, {1.0, 2.0}, {2.5, 0.5}}),
        FrequencyProfile::sampled({0.0, 2.0, 4.0}, {0.5, 1.5, 1.0}),
    };
    const auto grid = uniform_grid(0.0, 6.0, 60);
    for (const auto& w : profiles) {
        for (int k = 0; k < 6; ++k) {
            const SystemSpec s{rng.log_uniform(0.5, 2.0), rng.log_uniform(0.5, 2.0), w};
            const bool plain = (k % 2 == 0);
            const InitialGaussian init{rng.log_uniform(0.5, 2.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                                       plain ? 0.0 : rng.uniform(-0.5, 0.5)};
            const auto ls = integrate_lambda(s, kernel_lambda_initial(init.alpha0), grid, tight());
            const auto cs = integrate_riccati(s, RiccatiState::from(init.c0()), grid, tight());
            const auto xs = integrate_centroid(s, {init.x_center, init.p0 / s.mass}, grid, tight());
            for (std::size_t i = 1; i < grid.size(); ++i) {
                if (std::abs(ls[i].lambda_i) < 1e-3 * std::abs(ls[i].lambda())) continue;
                const auto g = apply_kernel(s, init, ls[i]);
                CHECK(g.norm() == Approx(1.0).epsilon(1e-9));
                const auto p = g.packet(s);
                CHECK(std::abs(p.riccati.value() - cs[i].value()) < 1e-8 * std::max(1.0, std::abs(cs[i].value())));
                CHECK(std::abs(p.centroid.eta - xs[i].eta) < 1e-8 * std::max(1.0, std::abs(xs[i].eta)));
                CHECK(std::abs(p.centroid.eta_dot - xs[i].eta_dot) < 1e-7 * std::max(1.0, std::abs(xs[i].eta_dot)));
                if (plain) {
                    const Complex expected = kI * s.mass / (2.0 * s.hbar) * ls[i].riccati();
                    CHECK(std::abs(g.quadratic - expected) < 1e-9 * std::max(1.0, std::abs(expected)));
                }
            }
        }
    }
}

TEST_CASE("kernel application agrees with numerical quadrature of the textbook kernel") {
    SUBCASE("oscillator") {
        const SystemSpec s = unit(1.0);
        const InitialGaussian init{1.3, 0.7, 0.4, 0.2};
        for (double t : {0.4, 1.1, 2.6, 4.0}) {
            const LambdaState l{init.alpha0 * std::cos(t), std::sin(t) / init.alpha0, -init.alpha0 * std::sin(t),
                                std::cos(t) / init.alpha0};
            const auto g = apply_kernel(s, init, l);
            for (double x : {-2.0, -0.5, 0.0, 0.9, 2.5}) {
                const Complex ref = oracle::apply_kernel_quadrature(
                    1.0, 1.0, 1.0, t, [&](double xp) { return init.psi(s, xp); }, x);
                CHECK(std::abs(g.psi(x) - ref) < 1e-6);
            }
        }
    }
    SUBCASE("free particle") {
        const SystemSpec s = unit(0.0);
        const InitialGaussian init{0.8, -0.5, 0.0, 0.0};
        for (double t : {0.5, 1.0, 2.0}) {
            const auto g = apply_kernel(s, init, {init.alpha0, t / init.alpha0, 0.0, 1.0 / init.alpha0});
            for (double x : {-1.5, 0.0, 0.7, 2.0}) {
                const Complex ref = oracle::apply_kernel_quadrature(
                    1.0, 1.0, 0.0, t, [&](double xp) { return init.psi(s, xp); }, x);
                CHECK(std::abs(g.psi(x) - ref) < 1e-6);
            }
        }
    }
}

TEST_CASE("kernel satisfies the time-dependent Schroedinger equation") {
    KernelResidualGrid grid;
    grid.dt = 1e-3;

    SUBCASE("free kernel") {
        const SystemSpec s = unit(0.0);
        grid.t0 = 1.0;
        const auto traj = kernel_trajectory(s, 1.0, grid.t0, grid.dt, 1001);
        const double good = verify_kernel_satisfies_tdse(s, traj, grid);
        CHECK(good < 1e-4);

        auto bad = traj;
        for (auto& l : bad) l.lambda_r *= 1.1;
        CHECK(verify_kernel_satisfies_tdse(s, bad, grid) >= 100.0 * good);
    }
    SUBCASE("oscillator kernel") {
        const SystemSpec s = unit(1.0);
        grid.t0 = 1.0;
        const auto traj = kernel_trajectory(s, 1.0, grid.t0, grid.dt, 1001);
        const double good = verify_kernel_satisfies_tdse(s, traj, grid);
        CHECK(good < 1e-4);

        auto bad = traj;
        for (auto& l : bad) l.lambda_r *= 1.1;
        CHECK(verify_kernel_satisfies_tdse(s, bad, grid) >= 100.0 * good);
    }
    SUBCASE("piecewise frequency away from the switch") {
        const SystemSpec s{1.0, 1.0, FrequencyProfile::piecewise_constant({{0.0, 1.0}, {0.5, 0.7}})};
        grid.t0 = 1.0;
        grid.alpha0 = 1.2;
        const auto traj = kernel_trajectory(s, grid.alpha0, grid.t0, grid.dt, 1001);
        CHECK(verify_kernel_satisfies_tdse(s, traj, grid) < 1e-4);
    }
    SUBCASE("errors") {
        const SystemSpec s = unit(1.0);
        const auto four = kernel_trajectory(s, 1.0, 1.0, grid.dt, 4);
        CHECK(kind_of([&] { verify_kernel_satisfies_tdse(s, four, grid); }) == ErrorKind::GridTooCoarse);
        grid.t0 = kPi - 2e-3;
        const auto focal = kernel_trajectory(s, 1.0, grid.t0, grid.dt, 7);
        CHECK(kind_of([&] { verify_kernel_satisfies_tdse(s, focal, grid); }) == ErrorKind::GridTooCoarse);
    }
}
