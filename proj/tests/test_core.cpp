#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "oracles.hpp"
#include "ricdyn/core.hpp"
#include "ricdyn/parallel.hpp"

using namespace ricdyn;
using doctest::Approx;

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

}  // namespace

TEST_CASE("riccati_from_ermakov examples") {
    auto c = riccati_from_ermakov({1.0, 0.0});
    CHECK(c.c_r == 0.0);
    CHECK(c.c_i == 1.0);

    c = riccati_from_ermakov({std::sqrt(2.0), 0.0});
    CHECK(c.c_r == 0.0);
    CHECK(c.c_i == Approx(0.5).epsilon(1e-15));

    c = riccati_from_ermakov({2.0, 1.0});
    CHECK(c.c_r == 0.5);
    CHECK(c.c_i == 0.25);

    CHECK(kind_of([] { riccati_from_ermakov({0.0, 1.0}); }) == ErrorKind::Domain);
    CHECK(kind_of([] { riccati_from_ermakov({-1.0, 0.0}); }) == ErrorKind::Domain);
}

TEST_CASE("ermakov_from_riccati examples") {
    auto e = ermakov_from_riccati({0.0, 1.0});
    CHECK(e.alpha == 1.0);
    CHECK(e.alpha_dot == 0.0);

    e = ermakov_from_riccati({0.5, 0.25});
    CHECK(e.alpha == 2.0);
    CHECK(e.alpha_dot == 1.0);

    CHECK(kind_of([] { ermakov_from_riccati({0.0, -1.0}); }) == ErrorKind::UnphysicalState);
    CHECK(kind_of([] { ermakov_from_riccati({0.3, 0.0}); }) == ErrorKind::UnphysicalState);
}

TEST_CASE("uncertainties_from_ermakov examples") {
    const SystemSpec s;
    auto u = uncertainties_from_ermakov(s, {1.0, 0.0});
    CHECK(u.sigma_xx == 0.5);
    CHECK(u.sigma_pp == 0.5);
    CHECK(u.sigma_xp == 0.0);

    u = uncertainties_from_ermakov(s, {std::sqrt(2.0), 0.0});
    CHECK(u.sigma_xx == Approx(1.0).epsilon(1e-15));
    CHECK(u.sigma_pp == Approx(0.25).epsilon(1e-15));
    CHECK(u.sigma_xp == 0.0);

    u = uncertainties_from_ermakov(s, {1.0, 1.0});
    CHECK(u.sigma_xx == 0.5);
    CHECK(u.sigma_pp == 1.0);
    CHECK(u.sigma_xp == 0.5);
    CHECK(u.determinant() == 0.25);

    CHECK(kind_of([&] { uncertainties_from_ermakov(s, {0.0, 0.0}); }) == ErrorKind::Domain);
}

TEST_CASE("representation maps carry mass and hbar") {
    const SystemSpec s{2.0, 0.5, FrequencyProfile::constant(1.0)};
    const ErmakovState e{1.3, -0.4};
    const auto u = uncertainties_from_ermakov(s, e);
    CHECK(u.sigma_xx == Approx(0.5 * 0.5 / 2.0 * 1.69));
    CHECK(u.robertson_defect(s.hbar) == Approx(0.0).epsilon(1e-14));
    const auto back = ermakov_from_uncertainties(s, u);
    CHECK(back.alpha == Approx(e.alpha).epsilon(1e-14));
    CHECK(back.alpha_dot == Approx(e.alpha_dot).epsilon(1e-14));
    const auto ur = uncertainties_from_riccati(s, riccati_from_ermakov(e));
    CHECK(ur.sigma_xx == Approx(u.sigma_xx).epsilon(1e-14));
    CHECK(ur.sigma_pp == Approx(u.sigma_pp).epsilon(1e-14));
    CHECK(ur.sigma_xp == Approx(u.sigma_xp).epsilon(1e-14));
}

TEST_CASE("property: riccati/ermakov round trip over wide ranges") {
    oracle::Rng rng(11);
    for (int k = 0; k < 2000; ++k) {
        const ErmakovState e{rng.log_uniform(1e-3, 1e3), rng.uniform(-1e3, 1e3)};
        const auto back = ermakov_from_riccati(riccati_from_ermakov(e));
        CHECK(std::abs(back.alpha - e.alpha) <= 1e-12 * e.alpha);
        CHECK(std::abs(back.alpha_dot - e.alpha_dot) <= 1e-12 * std::max(1.0, std::abs(e.alpha_dot)));
    }
}

TEST_CASE("property: triples built from ermakov states saturate Schrodinger-Robertson") {
    oracle::Rng rng(12);
    for (int k = 0; k < 2000; ++k) {
        const SystemSpec s{rng.log_uniform(0.1, 10.0), rng.log_uniform(0.1, 10.0), FrequencyProfile::constant(1.0)};
        // The determinant cancels two terms of size (alpha alpha')^2, so the
        // attainable relative accuracy degrades like eps * (alpha alpha')^2.
        const ErmakovState e{rng.log_uniform(1e-1, 1e1), rng.uniform(-3.0, 3.0)};
        const auto u = uncertainties_from_ermakov(s, e);
        CHECK(std::abs(u.robertson_defect(s.hbar)) <= 1e-10);
        CHECK_NOTHROW(require_minimum_uncertainty(u, s.hbar));
    }
}

TEST_CASE("require_minimum_uncertainty rejects bad triples") {
    CHECK(kind_of([] { require_minimum_uncertainty({1.0, 1.0, 0.0}, 1.0); }) == ErrorKind::UnphysicalState);
    CHECK(kind_of([] { require_minimum_uncertainty({-0.5, -0.5, 0.0}, 1.0); }) == ErrorKind::UnphysicalState);
}

TEST_CASE("SystemSpec validation") {
    CHECK(kind_of([] { SystemSpec{0.0, 1.0, {}}.validate(); }) == ErrorKind::Domain);
    CHECK(kind_of([] { SystemSpec{1.0, -1.0, {}}.validate(); }) == ErrorKind::Domain);
    CHECK_NOTHROW(SystemSpec{}.validate());
}

TEST_CASE("frequency profiles") {
    SUBCASE("constant") {
        const auto w = FrequencyProfile::constant(2.0);
        CHECK(w(-3.0) == 2.0);
        CHECK(w(100.0) == 2.0);
        CHECK(w.derivative(1.0) == 0.0);
        CHECK(w.is_constant());
        CHECK(w.breakpoints().empty());
        CHECK(kind_of([] { FrequencyProfile::constant(-1.0); }) == ErrorKind::Domain);
    }
    SUBCASE("piecewise constant is right-continuous") {
        const auto w = FrequencyProfile::piecewise_constant({{0.0, 1.0}, {1.0, 2.0}, {3.0, 0.5}});
        CHECK(w(-1.0) == 1.0);
        CHECK(w(0.999) == 1.0);
        CHECK(w(1.0) == 2.0);
        CHECK(w(2.5) == 2.0);
        CHECK(w(3.0) == 0.5);
        CHECK(w(10.0) == 0.5);
        CHECK(w.max_value() == 2.0);
        CHECK(!w.is_constant());
        const auto bps = w.breakpoints();
        REQUIRE(bps.size() >= 2);
        CHECK(std::find(bps.begin(), bps.end(), 1.0) != bps.end());
        CHECK(std::find(bps.begin(), bps.end(), 3.0) != bps.end());
        CHECK(kind_of([] { FrequencyProfile::piecewise_constant({{1.0, 1.0}, {1.0, 2.0}}); }) == ErrorKind::Domain);
        CHECK(kind_of([] { FrequencyProfile::piecewise_constant({}); }) == ErrorKind::Domain);
    }
    SUBCASE("sampled reproduces knots and interpolates linearly") {
        const std::vector<double> ts{0.0, 1.0, 2.0, 4.0};
        const std::vector<double> ws{1.0, 3.0, 2.0, 2.0};
        const auto w = FrequencyProfile::sampled(ts, ws);
        for (std::size_t i = 0; i < ts.size(); ++i) CHECK(w(ts[i]) == ws[i]);
        CHECK(w(0.5) == Approx(2.0));
        CHECK(w(1.5) == Approx(2.5));
        CHECK(w.derivative(0.5) == Approx(2.0));
        CHECK(w.derivative(1.5) == Approx(-1.0));
        CHECK(w(-1.0) == 1.0);
        CHECK(w(10.0) == 2.0);
        CHECK(kind_of([] { FrequencyProfile::sampled({0.0}, {1.0}); }) == ErrorKind::Domain);
        CHECK(kind_of([] { FrequencyProfile::sampled({0.0, 1.0}, {1.0, -2.0}); }) == ErrorKind::Domain);
    }
    SUBCASE("shifted") {
        const auto w = FrequencyProfile::piecewise_constant({{0.0, 1.0}, {1.0, 2.0}}).shifted(0.5);
        CHECK(w(0.4) == 1.0);
        CHECK(w(0.5) == 2.0);
        CHECK(FrequencyProfile::constant(3.0).shifted(7.0)(0.0) == 3.0);
    }
}

TEST_CASE("integrator lands on grid points and respects breakpoints") {
    // y' = omega(t): the exact solution is the integral of a step function.
    const auto w = FrequencyProfile::piecewise_constant({{0.0, 1.0}, {0.37, 3.0}});
    const auto grid = uniform_grid(0.0, 1.0, 10);
    for (auto method : {IntegrationMethod::DormandPrince54, IntegrationMethod::RungeKutta4}) {
        IntegratorConfig cfg;
        cfg.method = method;
        cfg.fixed_step = 0.03;
        const auto bps = w.breakpoints();
        const auto traj = integrate_ode<1>([&](const std::array<double, 1>&, std::array<double, 1>& dy,
                                               double t) { dy[0] = w(t); },
                                           std::array<double, 1>{0.0}, grid, cfg, bps,
                                           [](double, const std::array<double, 1>&) {});
        REQUIRE(traj.size() == grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double t = grid[i];
            const double exact = t < 0.37 ? t : 0.37 + 3.0 * (t - 0.37);
            CHECK(traj[i][0] == Approx(exact).epsilon(1e-12));
        }
    }
}

TEST_CASE("integrator reports non-finite states and bad configs") {
    const auto grid = uniform_grid(0.0, 2.0, 4);
    auto blow = [] {
        // y' = y^2 from y(0) = 1 diverges at t = 1.
        IntegratorConfig cfg;
        integrate_ode<1>([](const std::array<double, 1>& y, std::array<double, 1>& dy, double) { dy[0] = y[0] * y[0]; },
                         std::array<double, 1>{1.0}, uniform_grid(0.0, 2.0, 4), cfg, std::span<const double>{},
                         [](double, const std::array<double, 1>& y) {
                             if (std::abs(y[0]) > 1e8) throw Error(ErrorKind::BlowUp, "too large");
                         });
    };
    const auto k = kind_of(blow);
    CHECK((k == ErrorKind::BlowUp || k == ErrorKind::Integration));

    IntegratorConfig bad;
    bad.abs_tol = 0.0;
    CHECK(kind_of([&] { bad.validate(); }) == ErrorKind::Domain);
    CHECK(kind_of([] { detail::require_time_grid(std::vector<double>{0.0, 0.0}); }) == ErrorKind::Domain);
    CHECK(kind_of([] { detail::require_time_grid(std::vector<double>{}); }) == ErrorKind::Domain);
}

TEST_CASE("centroid integration matches the oscillator flow") {
    const SystemSpec s{1.5, 1.0, FrequencyProfile::piecewise_constant({{0.0, 1.0}, {2.0, 0.5}, {5.0, 0.0}})};
    const auto grid = uniform_grid(0.0, 8.0, 80);
    const auto traj = integrate_centroid(s, {0.7, -0.3}, grid);
    const std::vector<oracle::Piece> pieces{{0.0, 1.0}, {2.0, 0.5}, {5.0, 0.0}};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto M = oracle::piecewise_flow(s.mass, pieces, grid[i]);
        const auto xp = oracle::propagate_point(M, 0.7, -0.3 * s.mass);
        CHECK(traj[i].eta == Approx(xp[0]).epsilon(1e-8));
        CHECK(traj[i].momentum(s.mass) == Approx(xp[1]).epsilon(1e-8));
    }
}

TEST_CASE("unwrapped phases advance continuously") {
    std::vector<LambdaState> traj;
    for (int k = 0; k <= 100; ++k) {
        const double t = 0.1 * k;
        traj.push_back({std::cos(t), std::sin(t), -std::sin(t), std::cos(t)});
    }
    const auto ph = unwrapped_phases(traj);
    for (int k = 0; k <= 100; ++k) CHECK(ph[k] == Approx(0.1 * k).epsilon(1e-12));
}

TEST_CASE("plane field sampling and grids") {
    const auto f = sample_plane_field({-1.0, 1.0}, {0.0, 2.0}, 5, [](double x, double y) {
        return std::array<double, 2>{x, y * y};
    });
    REQUIRE(f.xs.size() == 5);
    CHECK(f.at(4, 0)[0] == 1.0);
    CHECK(f.at(0, 4)[1] == 4.0);
    const auto g = uniform_grid(0.0, 1.0, 4);
    REQUIRE(g.size() == 5);
    CHECK(g.back() == 1.0);
}

TEST_CASE("parallel_for visits every index once") {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); });
    for (auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                        if (i == 7) throw Error(ErrorKind::Domain, "boom");
                    }),
                    Error);
    CHECK(thread_count() >= 1);
}

TEST_CASE("error kinds classify numerical failures") {
    CHECK(Error(ErrorKind::BlowUp, "x").is_numerical());
    CHECK(Error(ErrorKind::FocalPoint, "x").is_numerical());
    CHECK(!Error(ErrorKind::Domain, "x").is_numerical());
    CHECK(std::string(to_string(ErrorKind::WronskianViolation)).size() > 0);
}
