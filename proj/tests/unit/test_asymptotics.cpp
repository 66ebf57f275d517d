#include <doctest.h>

#include "plastiflow/asymptotics.hpp"
#include "support.hpp"

using namespace plastiflow;
using testing::pi;

namespace {

Solution synthetic(const GridFunction& profile, double amplitude, double rate, double T, int steps)
{
    const auto phi = eigenpair(profile.domain()).phi;
    Solution s;
    for (int k = 0; k <= steps; ++k) {
        const double t = T * k / steps;
        auto u = (amplitude * std::exp(-rate * t)) * profile;
        u.set_time(t);
        s.diagnostics.push_back(diagnose(u, phi));
        s.snapshots.push_back(std::move(u));
        s.times.push_back(t);
    }
    return s;
}

ThetaClassification with(Verdict v)
{
    ThetaClassification c;
    c.verdict = v;
    return c;
}

}  // namespace

TEST_SUITE("asymptotics") {

TEST_CASE("projection onto the eigenfunction")
{
    const Domain d = Domain::interval(1.0, 0.001);
    const auto phi = eigenpair(d).phi;
    CHECK(projection(phi, phi) == doctest::Approx(0.5).epsilon(1e-5));
    const auto s2 = GridFunction::sample(d, [](double x) { return std::sin(2 * pi * x); });
    CHECK(std::abs(projection(s2, phi)) < 1e-10);
    CHECK_THROWS_AS(projection(phi, eigenpair(Domain::interval(1.0, 0.01)).phi), Error);
}

TEST_CASE("decay fit recovers synthetic rates")
{
    testing::Gen gen(81);
    const Domain d = Domain::interval(1.0, 0.01);
    const auto phi = eigenpair(d).phi;
    for (int trial = 0; trial < 20; ++trial) {
        const double rate = gen.uniform(0.5, 20);  // stays above the 1e-10 floor
        const double amp = gen.uniform(0.1, 5) * (trial % 2 ? -1 : 1);
        const auto sol = synthetic(phi, amp, rate, 1.0, 200);
        const auto fit = decay_fit(sol, FitWindow{0.2, 0.8}, phi);
        CHECK(fit.rate == doctest::Approx(rate).epsilon(1e-9));
        CHECK(fit.amplitude == doctest::Approx(amp).epsilon(1e-8));
        CHECK(fit.residual < 1e-10);
        CHECK(fit.profile_distance < 1e-8);
        CHECK(fit.profile_scale == doctest::Approx(amp).epsilon(1e-6));
        CHECK_FALSE(fit.sign_change_in_window);

        const auto dflt = decay_fit(sol, std::nullopt, phi);
        CHECK(dflt.window.t2 == doctest::Approx(1.0));
        CHECK(dflt.window.t1 == doctest::Approx(0.9));
        CHECK(dflt.samples == 21);
    }
}

TEST_CASE("default window ignores snapshots under the noise floor")
{
    const Domain d = Domain::interval(1.0, 0.01);
    const auto phi = eigenpair(d).phi;
    // sup drops below 1e-10 at t = ln(1e10)/50 ≈ 0.46
    const auto sol = synthetic(phi, 1.0, 50.0, 1.0, 100);
    const auto fit = decay_fit(sol, std::nullopt, phi);
    CHECK(fit.window.t2 < 0.47);
    CHECK(fit.rate == doctest::Approx(50.0));
}

TEST_CASE("decay fit errors")
{
    const Domain d = Domain::interval(1.0, 0.01);
    const auto phi = eigenpair(d).phi;
    const auto sol = synthetic(phi, 1.0, 1.0, 1.0, 10);
    CHECK_THROWS_AS(decay_fit(sol, FitWindow{0.51, 0.59}, phi), Error);
    CHECK_THROWS_AS(decay_fit(sol, FitWindow{0.6, 0.2}, phi), Error);
    try {
        decay_fit(synthetic(phi, 1.0, 1.0, 1.0, 0), std::nullopt, phi);
        FAIL("expected WindowEmpty");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::WindowEmpty);
    }
}

TEST_CASE("best-fit constant")
{
    const Domain d = Domain::interval(1.0, 0.01);
    const auto e = eigenpair(d);
    const auto sol = synthetic(e.phi, 2.5, 3.0, 1.0, 10);
    CHECK(best_fit_constant(sol, e, 3.0, 0.5) == doctest::Approx(2.5));
}

TEST_CASE("classification of one-signed data is immediate")
{
    const Domain d = Domain::interval(1.0, 0.02);
    const auto phi = eigenpair(d).phi;
    const auto a = classify_theta(phi, 1.0, 4.0);
    CHECK(a.verdict == Verdict::A);
    CHECK(a.decision_time == 0.0);
    const auto b = classify_theta(-1.0 * phi, 1.0, 4.0);
    CHECK(b.verdict == Verdict::B);
    CHECK(to_string(Verdict::Unresolved) == "Unresolved");
    CHECK_THROWS_AS(classify_theta(phi, 1.0, 1.0), Error);
}

TEST_CASE("classification of the separable profile flips at its own ratio")
{
    const Domain d = Domain::interval(1.0, 0.02);
    const auto psi = SeparableProfile::from_interface(1.0 / 3.0).sample(d);
    const auto sweep = sweep_theta(psi, 1.0, {2.0, 3.0, 6.0, 9.0}, {}, 2);
    REQUIRE(sweep.size() == 4);
    CHECK(sweep[0].verdict == Verdict::A);
    CHECK(sweep[1].verdict == Verdict::A);
    CHECK(sweep[2].verdict == Verdict::B);
    CHECK(sweep[3].verdict == Verdict::B);
    CHECK(is_step_function(sweep));
    CHECK(sweep[0].trace_times.size() == sweep[0].projection_trace.size());

    const auto bis = bisect_theta_star(psi, 1.0, 2.0, 8.0, 0.5);
    CHECK(bis.converged);
    CHECK(bis.hi - bis.lo <= 0.5);
    CHECK(bis.lo <= 4.3);
    CHECK(bis.hi >= 3.7);
}

TEST_CASE("bad brackets")
{
    const Domain d = Domain::interval(1.0, 0.02);
    const auto phi = eigenpair(d).phi;
    try {
        bisect_theta_star(-1.0 * phi, 1.0, 2.0, 8.0, 0.1);
        FAIL("expected BadBracket");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BadBracket);
    }
    CHECK_THROWS_AS(bisect_theta_star(phi, 1.0, 8.0, 2.0, 0.1), Error);
    CHECK_THROWS_AS(bisect_theta_star(phi, 1.0, 2.0, 8.0, 0.1), Error);  // hi is A as well
}

TEST_CASE("step-function shape")
{
    using V = Verdict;
    CHECK(is_step_function({with(V::A), with(V::A), with(V::B)}));
    CHECK(is_step_function({with(V::A), with(V::Unresolved), with(V::B)}));
    CHECK(is_step_function({}));
    CHECK_FALSE(is_step_function({with(V::B), with(V::A)}));
    CHECK_FALSE(is_step_function({with(V::A), with(V::B), with(V::Unresolved)}));
}

}
