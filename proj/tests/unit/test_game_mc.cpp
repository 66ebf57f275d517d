#include <doctest.h>

#include "plastiflow/game_mc.hpp"
#include "support.hpp"

using namespace plastiflow;
using testing::pi;

namespace {

GameConfig sine_game(double eps, double bm, double bp)
{
    GameConfig g(GridFunction::sample(Domain::interval(1.0, eps / 10), [](double x) { return std::sin(pi * x); }));
    g.params = Parameters(bm, bp);
    g.epsilon = eps;
    g.K = 5;
    return g;
}

}  // namespace

TEST_SUITE("game_mc") {

TEST_CASE("rng is reproducible and open-interval")
{
    Rng a(7);
    Rng b(7);
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        CHECK(u == b.uniform());
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("sample_ball moments")
{
    Rng rng(3);
    const double eps = 0.2;
    for (int dim : {1, 2}) {
        const int n = 400'000;
        double m1 = 0.0;
        double m2 = 0.0;
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const Point p = sample_ball({0.5, 0.5}, dim, eps, rng);
            const double dx = p.x - 0.5;
            const double dy = p.y - 0.5;
            CHECK_FALSE(dx * dx + dy * dy >= eps * eps);
            if (dim == 1)
                CHECK(dy == 0.0);
            m1 += dx;
            m2 += dx * dx;
            r2 += dx * dx + dy * dy;
        }
        m1 /= n;
        m2 /= n;
        r2 /= n;
        // E[y₁²] = 2c(N)ε², E|y|² = N/(N+2)ε²
        const double var1 = 2 * c_of_N(dim) * eps * eps;
        CHECK(std::abs(m1) <= 5 * std::sqrt(var1 / n));
        CHECK(m2 == doctest::Approx(var1).epsilon(0.01));
        CHECK(r2 == doctest::Approx(dim / (dim + 2.0) * eps * eps).epsilon(0.01));
    }
}

TEST_CASE("effective constant")
{
    auto g = sine_game(0.05, 1, 4);
    CHECK(effective_C(g) == doctest::Approx(1.0 / 6.0));
    g.C = 0.3;
    CHECK(effective_C(g) == 0.3);
}

TEST_CASE("stopping time of a constant clock")
{
    const auto g = sine_game(0.01, 1, 4);
    const double C = effective_C(g);
    const double b = 2.0 * C;
    const double t0 = 0.003;
    const auto rounds = static_cast<std::size_t>(std::ceil(t0 / (b * 1e-4) - 1e-9));
    Rng rng(9);
    for (int i = 0; i < 200; ++i) {
        const auto tr = play(g, Strategy::constant(b), {0.5, 0}, t0, rng, true);
        CHECK(tr.tau <= rounds);
        CHECK(tr.states.size() == tr.tau + 1);
        // far from the boundary no walk can leave within this many steps
        CHECK(tr.exit == ExitKind::TimeExit);
        CHECK(tr.tau == rounds);
        CHECK(tr.exit_time <= 0.0);
        CHECK(tr.payoff == doctest::Approx(g.u0.interpolate(tr.exit_point.x)));
    }
}

TEST_CASE("space exit pays zero")
{
    const auto g = sine_game(0.05, 1, 4);
    Rng rng(11);
    std::size_t exits = 0;
    for (int i = 0; i < 500; ++i) {
        const auto tr = play(g, Strategy::constant(effective_C(g)), {0.01, 0}, 1.0, rng);
        if (tr.exit == ExitKind::SpaceExit) {
            ++exits;
            CHECK(tr.payoff == 0.0);
            CHECK_FALSE(g.u0.domain().contains(tr.exit_point.x));
        }
    }
    CHECK(exits > 0);
}

TEST_CASE("errors")
{
    const auto g = sine_game(0.05, 1, 4);
    Rng rng(1);
    CHECK_THROWS_AS(play(g, Strategy::constant(effective_C(g)), {1.5, 0}, 0.1, rng), Error);
    CHECK_THROWS_AS(play(g, Strategy::constant(effective_C(g)), {0.5, 0}, -0.1, rng), Error);
    CHECK_THROWS_AS(play(g, Strategy::constant(10.0), {0.5, 0}, 0.1, rng), Error);
    CHECK_THROWS_AS(estimate_value(g, Strategy::constant(effective_C(g)), {0.5, 0}, 0.1, 1, 1), Error);
}

TEST_CASE("estimates are reproducible and independent of threads")
{
    const auto g = sine_game(0.05, 1, 4);
    const auto table = dpp_solve(g, 0.03);
    const auto s = Strategy::table_greedy(table);
    const auto a = estimate_value(g, s, {0.4, 0}, 0.03, 2000, 42, 1);
    const auto b = estimate_value(g, s, {0.4, 0}, 0.03, 2000, 42, 3);
    const auto c = estimate_value(g, s, {0.4, 0}, 0.03, 2000, 42, 1);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.step_histogram == b.step_histogram);
    CHECK(a.mean == c.mean);
    CHECK(a.half_width == doctest::Approx(kZ99 * a.std_error));
    CHECK(a.space_exits + a.time_exits == a.n);
    const auto d = estimate_value(g, s, {0.4, 0}, 0.03, 2000, 43, 1);
    CHECK(a.mean != d.mean);
}

TEST_CASE("greedy clock does no worse than constant clocks")
{
    const auto g = sine_game(0.05, 1, 4);
    const double T = 0.04;
    const auto table = dpp_solve(g, T);
    const double C = effective_C(g);
    const auto greedy = estimate_value(g, Strategy::table_greedy(table), {0.5, 0}, T, 20'000, 5);
    for (double b : {C, 4 * C}) {
        const auto other = estimate_value(g, Strategy::constant(b), {0.5, 0}, T, 20'000, 5);
        const double se = std::hypot(greedy.std_error, other.std_error);
        CHECK(greedy.mean <= other.mean + 3 * se);
    }
    const auto ends = estimate_value(g, Strategy::endpoint_by_sign(table), {0.5, 0}, T, 20'000, 5);
    CHECK(greedy.mean <= ends.mean + 3 * std::hypot(greedy.std_error, ends.std_error));
}

TEST_CASE("table value is a martingale along greedy play")
{
    const auto g = sine_game(0.05, 1, 4);
    const auto table = dpp_solve(g, 0.03);
    const auto rep = martingale_diagnostic(table, Strategy::table_greedy(table), {0.3, 0}, 0.03, 20'000, 8);
    CHECK(rep.n == 20'000);
    CHECK(rep.start_value == doctest::Approx(table.value_at(0.3, 0, 0.03)));
    CHECK(std::abs(rep.terminal_mean - rep.start_value) <= 4 * rep.terminal_stderr + 1e-3);
    CHECK(rep.count.front() == 20'000);
    for (std::size_t k = 1; k < rep.count.size(); ++k)
        CHECK(rep.count[k] <= rep.count[k - 1]);
}

TEST_CASE("wilson interval")
{
    const auto w = wilson(50, 100);
    const double z = kZ99;
    const double half = z / (1 + z * z / 100) * std::sqrt(0.25 / 100 + z * z / 40000);
    CHECK(w.lo == doctest::Approx(0.5 - half));
    CHECK(w.hi == doctest::Approx(0.5 + half));
    const auto none = wilson(0, 100);
    CHECK(none.lo == doctest::Approx(0.0));
    CHECK(none.hi > 0.0);
    const auto all = wilson(100, 100);
    CHECK(all.hi == doctest::Approx(1.0));
}

TEST_CASE("exit statistics")
{
    auto g = sine_game(0.01, 1, 4);
    const auto s = exit_stats(g, 0.002, 0.2, 2000, 4);
    CHECK(s.n == 2000);
    CHECK(s.p_far >= 0.0);
    CHECK(s.p_far <= 0.05);
    CHECK(s.far_ci.lo <= s.p_far);
    CHECK(s.far_ci.hi >= s.p_far);
    CHECK(s.mean_tau >= 1.0);
    CHECK_THROWS_AS(exit_stats(g, 2.0, 0.2, 10, 1), Error);
}

}
