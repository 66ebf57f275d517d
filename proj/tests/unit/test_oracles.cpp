#include <doctest.h>

#include "plastiflow/fd_solver.hpp"
#include "plastiflow/oracles.hpp"
#include "support.hpp"

using namespace plastiflow;
using testing::pi;

TEST_SUITE("oracles") {

TEST_CASE("eigenpair on the unit interval and square")
{
    const auto e = eigenpair(Domain::interval(1.0, 0.01));
    CHECK(e.lambda == doctest::Approx(pi * pi).epsilon(1e-3));
    CHECK(e.phi.max() == doctest::Approx(1.0));
    CHECK(e.phi.min() >= 0.0);
    // the sampled sine is an exact eigenvector of Δ_h with 4/h²·sin²(πh/2)
    const double lambda_h = 4e4 * std::pow(std::sin(pi * 0.005), 2);
    const auto lphi = laplacian(e.phi);
    for (std::size_t n = 1; n + 1 < e.phi.size(); ++n)
        CHECK(lphi[n] == doctest::Approx(-lambda_h * e.phi[n]).epsilon(1e-8));

    const auto s = eigenpair(Domain::rectangle(1.0, 2.0, 0.05));
    CHECK(s.lambda == doctest::Approx(pi * pi * 1.25).epsilon(1e-2));
}

TEST_CASE("heat series of a single mode")
{
    const Domain d = Domain::interval(1.0, 0.01);
    const auto u0 = GridFunction::sample(d, [](double x) { return std::sin(pi * x) + 0.5 * std::sin(3 * pi * x); });
    const HeatSeries hs(u0, 64);
    CHECK(hs.modes() <= d.size() - 2);
    CHECK(hs.coefficient(1) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(hs.coefficient(3) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(std::abs(hs.coefficient(2)) < 1e-10);
    const double t = 0.02;
    const double kappa = 2.0;
    const double expect = std::exp(-pi * pi * t / kappa) * std::sin(pi * 0.3)
                        + 0.5 * std::exp(-9 * pi * pi * t / kappa) * std::sin(3 * pi * 0.3);
    CHECK(hs.evaluate(0.3, t, kappa) == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("heat series agrees with the explicit scheme at b- = b+")
{
    testing::Gen gen(17);
    const Domain d = Domain::interval(1.0, 1.0 / 80);
    for (int trial = 0; trial < 3; ++trial) {
        const auto u0 = gen.smooth_zero_bc(d, 5);
        SchemeConfig cfg;
        const double kappa = gen.uniform(0.5, 3.0);
        cfg.params = Parameters(kappa, kappa);
        cfg.T = 0.02;
        cfg.stride = 1'000'000;
        const auto sol = integrate(u0, cfg);
        // the series is a spectral oracle; the scheme carries an O(h²) error
        const auto ref = heat_series_solve(u0, kappa, sol.times.back());
        CHECK(sup_distance(sol.back(), ref) <= 5e-3 * u0.sup_norm());
    }
}

TEST_CASE("separable profile constants")
{
    const auto p = separable_profile(4.0);
    CHECK(p.a() == doctest::Approx(1.0 / 3.0));
    CHECK(p.k() == doctest::Approx(0.5));
    CHECK(p.omega() == doctest::Approx(pi * pi * 9.0 / 4.0));
    CHECK(p.decay_rate() == doctest::Approx(p.omega()));
    const auto q = SeparableProfile::from_interface(0.25);
    CHECK(q.theta() == doctest::Approx(9.0));
    CHECK_THROWS_AS(SeparableProfile::from_interface(0.6), Error);
    CHECK_THROWS_AS(separable_profile(0.5), Error);
}

TEST_CASE("separable profile is C1 at the interface")
{
    testing::Gen gen(2);
    for (int i = 0; i < 30; ++i) {
        const double a = gen.uniform(0.05, 0.45);
        const auto p = SeparableProfile::from_interface(a);
        const double h = 1e-7;
        const double left = (p.base(a) - p.base(a - h)) / h;
        const double right = (p.base(a + h) - p.base(a)) / h;
        CHECK(std::abs(p.base(a)) < 1e-12);
        CHECK(left == doctest::Approx(right).epsilon(1e-4));
    }
}

TEST_CASE("separable solution satisfies the equation piecewise")
{
    // coefficient picked from the sign of the finite-difference time derivative
    const auto p = separable_profile(4.0, 1.0);
    const double bp = 4.0;
    const double bm = 1.0;
    for (double x : {0.1, 0.2, 0.5, 0.8}) {
        const double h = 1e-4;
        const double t = 0.01;
        const double dt = 1e-7;
        const double ut = (separable_solution(p, x, t + dt) - separable_solution(p, x, t - dt)) / (2 * dt);
        const double lap = (separable_solution(p, x + h, t) - 2 * separable_solution(p, x, t)
                            + separable_solution(p, x - h, t)) / (h * h);
        const double b = ut > 0 ? bp : bm;
        CHECK(b * ut == doctest::Approx(lap).epsilon(1e-4));
    }
}

TEST_CASE("tiled variants")
{
    const int M = 3;
    const auto base = separable_profile(4.0, 1.0);
    const double a = base.a();
    const double w = base.omega();
    const double expect[4] = {M * M * w, (M + a) * (M + a) * w, M * M * w, (M - a) * (M - a) * w};
    for (int j = 1; j <= 4; ++j) {
        const auto p = separable_profile(4.0, 1.0, M, j);
        CHECK(p.variant() == TilingVariant::Tiled);
        CHECK(p.decay_rate() == doctest::Approx(expect[j - 1]).epsilon(1e-12));
        CHECK(std::abs(p(0.0)) < 1e-12);
        CHECK(std::abs(p(1.0)) < 1e-12);
    }
    CHECK_THROWS_AS(separable_profile(4.0, 1.0, 3, 5), Error);
}

TEST_CASE("overlap integral matches quadrature")
{
    testing::Gen gen(8);
    for (int i = 0; i < 10; ++i) {
        const double a = gen.uniform(0.05, 0.49);
        const auto p = SeparableProfile::from_interface(a);
        const int n = 200'000;
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
            const double x = (k + 0.5) / n;
            s += p.base(x) * std::sin(pi * x);
        }
        CHECK(overlap_I(a) == doctest::Approx(s / n).epsilon(1e-8));
    }
}

TEST_CASE("decay envelopes")
{
    const auto e = eigenpair(Domain::interval(1.0, 0.05));
    const Parameters p(1.0, 4.0);
    const auto env = decay_envelopes(p, e, 2.0, 3.0, 0.1);
    const std::size_t mid = e.phi.size() / 2;
    CHECK(env.upper[mid] == doctest::Approx(2.0 * std::exp(-e.lambda * 0.1)));
    CHECK(env.lower[mid] == doctest::Approx(-3.0 * std::exp(-e.lambda / 4.0 * 0.1)));
}

}
