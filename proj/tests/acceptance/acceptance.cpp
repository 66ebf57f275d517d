// Acceptance gate: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "plastiflow/asymptotics.hpp"
#include "plastiflow/dpp.hpp"
#include "plastiflow/fd_solver.hpp"
#include "plastiflow/game_mc.hpp"
#include "plastiflow/obstacle.hpp"
#include "plastiflow/oracles.hpp"
#include "plastiflow/parallel.hpp"

using namespace plastiflow;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Flags gathered along the way for the sup-norm criterion.
struct Ledger {
    bool fd_max_principle = true;
    std::size_t fd_runs = 0;
    bool table_sup_bound = true;
    std::size_t tables = 0;
} ledger;

Solution tracked_integrate(const GridFunction& u0, const SchemeConfig& cfg, const StepObserver& obs = {})
{
    IntegrationStats st;
    Solution s = integrate(u0, cfg, &st, obs);
    ledger.fd_max_principle = ledger.fd_max_principle && st.max_principle_held;
    ++ledger.fd_runs;
    return s;
}

void track(const DppTable& t)
{
    const auto inv = check_invariants(t);
    ledger.table_sup_bound = ledger.table_sup_bound && inv.sup_bound;
    ++ledger.tables;
}

double separable_error(double h, std::size_t stride)
{
    const Domain d = Domain::interval(1.0, h);
    const auto p = SeparableProfile::from_interface(1.0 / 3.0);
    SchemeConfig cfg;
    cfg.params = Parameters(1.0, 4.0);
    cfg.T = 0.05;
    cfg.stride = stride;
    const Solution sol = tracked_integrate(p.sample(d), cfg);
    double worst = 0.0;
    for (std::size_t k = 0; k < sol.size(); ++k) {
        const double t = sol.times[k];
        double err = 0.0;
        for (std::size_t n = 0; n < d.size(); ++n)
            err = std::max(err, std::abs(sol.snapshots[k][n] - separable_solution(p, d.x(n), t)));
        worst = std::max(worst, err / std::exp(-p.decay_rate() * t));  // oracle sup-norm is e^{-ωt}
    }
    return worst;
}

Outcome crit1()
{
    const double e400 = separable_error(1.0 / 400, 500);
    const double e800 = separable_error(1.0 / 800, 2000);
    const double ratio = e400 / e800;
    return {e400 <= 0.01 && ratio >= 1.8,
            "rel err h=1/400 " + fmt("%.3e", e400) + ", h=1/800 " + fmt("%.3e", e800) + ", ratio " + fmt("%.2f", ratio)};
}

Outcome crit2()
{
    const Domain d = Domain::interval(1.0, 1.0 / 200);
    const auto phi = eigenpair(d).phi;
    SchemeConfig cfg;
    cfg.params = Parameters(1.0, 4.0);
    cfg.T = 1.0;
    cfg.stride = 200;
    const auto pos = decay_fit(tracked_integrate(phi, cfg), std::nullopt, phi);
    const auto neg = decay_fit(tracked_integrate(-1.0 * phi, cfg), std::nullopt, phi);
    const double r1 = pos.rate / (pi * pi) - 1.0;
    const double r2 = neg.rate / (pi * pi / 4.0) - 1.0;
    const bool ok = std::abs(r1) <= 0.02 && std::abs(r2) <= 0.02 && pos.profile_distance <= 2e-2
                    && neg.profile_distance <= 2e-2 && pos.amplitude > 0.0 && neg.amplitude < 0.0;
    return {ok, "rate/pi^2-1 " + fmt("%.2e", r1) + ", rate/(pi^2/4)-1 " + fmt("%.2e", r2) + ", profile dist "
                    + fmt("%.2e", pos.profile_distance) + " / " + fmt("%.2e", neg.profile_distance)};
}

Outcome bisect_case(double a, double lo, double hi, double target)
{
    const Domain d = Domain::interval(1.0, 1.0 / 400);
    const auto u0 = SeparableProfile::from_interface(a).sample(d);
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = bisect_theta_star(u0, 1.0, lo, hi, 0.1);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = r.converged && r.hi - r.lo <= 0.1 && r.lo <= target && target <= r.hi && secs <= 120.0;
    std::ostringstream os;
    os << "a=" << a << " bracket [" << r.lo << ", " << r.hi << "] in " << fmt("%.1f", secs) << " s";
    return {ok, os.str()};
}

Outcome crit3()
{
    const auto x = bisect_case(1.0 / 3.0, 2.0, 8.0, 4.0);
    const auto y = bisect_case(0.25, 4.0, 16.0, 9.0);
    return {x.pass && y.pass, x.detail + "; " + y.detail};
}

Outcome crit4()
{
    const Domain d = Domain::interval(1.0, 1.0 / 200);
    const auto u0 = GridFunction::sample(d, [](double x) { return -std::sin(pi * x) + 0.3 * std::sin(2 * pi * x); });
    const auto phi = eigenpair(d).phi;
    const double proj = projection(u0, phi);
    const auto c = classify_theta(u0, 1.0, 4.0);
    SchemeConfig cfg;
    cfg.params = Parameters(1.0, 4.0);
    cfg.T = 2.0;
    cfg.stride = 200;
    const auto fit = decay_fit(tracked_integrate(u0, cfg), std::nullopt, phi);
    const double rel = fit.rate / (pi * pi / 4.0) - 1.0;
    return {proj < 0.0 && c.verdict == Verdict::B && std::abs(rel) <= 0.03,
            "projection " + fmt("%.4f", proj) + ", verdict " + std::string(to_string(c.verdict)) + " at t="
                + fmt("%.4f", c.decision_time) + ", rate/lambda2-1 " + fmt("%.2e", rel)};
}

Outcome crit5()
{
    const Domain d = Domain::interval(1.0, 1.0 / 200);
    const auto u0 = SeparableProfile::from_interface(1.0 / 3.0).sample(d);
    const auto rep = limit_suite(u0, LimitKind::SmallBMinus, 1.0, {0.1, 0.03, 0.01}, {0.2});
    const double g1 = rep.rows[0].gaps[0];
    const double g2 = rep.rows[1].gaps[0];
    const double g3 = rep.rows[2].gaps[0];
    ledger.fd_runs += 3;
    return {g1 > g2 && g2 > g3 && g3 <= 0.05,
            "gaps " + fmt("%.3e", g1) + " > " + fmt("%.3e", g2) + " > " + fmt("%.3e", g3)};
}

Outcome crit6()
{
    const Domain d = Domain::interval(1.0, 1.0 / 200);
    const auto u0 = SeparableProfile::from_interface(1.0 / 3.0).sample(d);
    const auto hull = convex_envelope_1d(u0);
    SchemeConfig cfg;
    cfg.rhs = RhsKind::Layer;
    cfg.T = 50.0;
    cfg.stride = static_cast<std::size_t>(-1);
    cfg.steady_tol = 1e-8;
    bool monotone = true;
    double below = 0.0;
    const auto sol = tracked_integrate(u0, cfg, [&](double, std::span<const double> u, std::span<const double> prev) {
        for (std::size_t n = 0; n < u.size(); ++n) {
            monotone = monotone && u[n] <= prev[n];
            below = std::max(below, hull[n] - u[n]);
        }
        return false;
    });
    const double gap = sup_distance(sol.back(), hull);
    return {gap <= 1e-3 && monotone && below <= 1e-8,
            "gap to hull " + fmt("%.3e", gap) + " at t=" + fmt("%.3f", sol.times.back()) + ", non-increasing "
                + (monotone ? "yes" : "no") + ", max undershoot " + fmt("%.2e", below)};
}

Outcome crit7()
{
    std::mt19937_64 gen(20261015);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::uniform_int_distribution<int> cells(40, 160);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Domain d = Domain::interval(1.0, 1.0 / cells(gen));
        double c[5];
        for (double& v : c)
            v = U(gen);
        const double shift = 0.3 * U(gen);
        const double kink = 0.5 + 0.4 * U(gen);
        const auto u0 = GridFunction::sample(d, [&](double x) {
            double s = shift + 0.5 * c[4] * std::abs(x - kink);
            for (int m = 0; m < 4; ++m)
                s += c[m] * std::sin((m + 1) * pi * x);
            return s;
        });
        worst = std::max(worst, sup_distance(project_initial(u0).tilde_u0, convex_envelope_1d(u0)));
    }
    return {worst <= 1e-8, "max gap over 20 data " + fmt("%.3e", worst)};
}

Outcome crit8()
{
    bool ok = true;
    std::string detail;
    for (int N = 1; N <= 3; ++N) {
        std::mt19937_64 gen(8000 + N);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        const std::size_t target = 40'000'000;
        std::size_t kept = 0;
        double sum = 0.0;
        while (kept < target) {
            double y[3] = {U(gen), N > 1 ? U(gen) : 0.0, N > 2 ? U(gen) : 0.0};
            if (y[0] * y[0] + y[1] * y[1] + y[2] * y[2] >= 1.0)
                continue;
            sum += 0.5 * y[0] * y[0];
            ++kept;
        }
        const double mc = sum / static_cast<double>(target);
        const double gap = std::abs(mc - c_of_N(N));
        ok = ok && gap <= 1e-4;
        detail += "N=" + std::to_string(N) + " c=" + fmt("%.6f", c_of_N(N)) + " mc=" + fmt("%.6f", mc) + "; ";
    }
    return {ok, detail};
}

Outcome crit9()
{
    const Domain fine = Domain::interval(1.0, 1.0 / 800);
    SchemeConfig cfg;
    cfg.params = Parameters(1.0, 4.0);
    cfg.T = 0.05;
    cfg.stride = static_cast<std::size_t>(-1);
    const auto sine = [](double x) { return std::sin(pi * x); };
    const GridFunction u_fd = tracked_integrate(GridFunction::sample(fine, sine), cfg).back();

    std::vector<double> gaps;
    double alt_gap = 0.0;
    for (double eps : {0.1, 0.05, 0.025}) {
        const Domain d = Domain::interval(1.0, eps / 10.0);
        GameConfig g(GridFunction::sample(d, sine));
        g.params = Parameters(1.0, 4.0);
        g.epsilon = eps;
        const auto t = dpp_solve(g, 0.05);
        track(t);
        gaps.push_back(distance_to(t, u_fd));
        if (eps == 0.025) {
            const auto alt = dpp_alternate_solve(g, 0.05);
            track(alt);
            alt_gap = distance_to(alt, t.slice(t.last_slab()));
        }
    }
    const bool ok = gaps[0] > gaps[1] && gaps[1] > gaps[2] && gaps[2] <= 0.05 && alt_gap <= 0.05;
    return {ok, "gaps " + fmt("%.3e", gaps[0]) + " > " + fmt("%.3e", gaps[1]) + " > " + fmt("%.3e", gaps[2])
                    + ", alternate vs primary " + fmt("%.3e", alt_gap)};
}

Outcome crit10()
{
    const double eps = 0.05;
    const double h = eps / 50.0;
    const Domain d = Domain::interval(1.0, h);
    GameConfig g(GridFunction::sample(d, [](double x) { return std::sin(pi * x); }));
    g.params = Parameters(1.0, 4.0);
    g.epsilon = eps;
    const double T = 0.05;
    const auto table = dpp_solve(g, T);
    track(table);
    const Strategy s = Strategy::table_greedy(table);
    const double C = effective_C(g);
    // interpolation tolerance: per-round linear-interpolation error h²/8·sup|u''| summed over rounds
    const double curvature = pi * pi;
    const Point pts[5] = {{0.5, 0}, {0.3, 0}, {0.7, 0}, {0.15, 0}, {0.9, 0}};
    const double times[5] = {0.05, 0.03, 0.04, 0.02, 0.05};
    bool ok = true;
    std::string detail;
    for (int k = 0; k < 5; ++k) {
        const double rounds = std::ceil(times[k] / (C * eps * eps));
        const double interp = rounds * h * h / 8.0 * curvature;
        const auto est = estimate_value(g, s, pts[k], times[k], 100'000, 1000 + 7 * k, resolve_threads());
        const double ref = table.value_at(pts[k].x, 0.0, times[k]);
        const double gap = std::abs(est.mean - ref);
        const double allowed = 3.0 * est.std_error + interp;
        ok = ok && gap <= allowed;
        detail += fmt("%.3f", gap / allowed) + " ";
    }
    return {ok, "gap/(3sigma+interp) per point: " + detail};
}

Outcome crit11()
{
    return {ledger.fd_max_principle && ledger.table_sup_bound && ledger.tables >= 5,
            std::to_string(ledger.tables) + " tables within sup bound: " + (ledger.table_sup_bound ? "yes" : "no")
                + ", max principle on " + std::to_string(ledger.fd_runs) + " fd runs: "
                + (ledger.fd_max_principle ? "yes" : "no")};
}

Outcome crit12()
{
    const double eps = 1e-3;
    GameConfig g(GridFunction(Domain::interval(1.0, 1e-4), 0.0));
    g.epsilon = eps;
    std::vector<ExitStats> st;
    for (double r : {0.4 * eps, 0.2 * eps, 0.1 * eps})
        st.push_back(exit_stats(g, r, 0.2, 10'000, 424242, resolve_threads()));
    bool ok = st.back().p_far <= 0.05;
    for (std::size_t k = 1; k < st.size(); ++k)
        ok = ok && st[k].far_ci.lo <= st[k - 1].far_ci.hi && st[k].slow_ci.lo <= st[k - 1].slow_ci.hi;
    std::string detail = "p_far";
    for (const auto& s : st)
        detail += " " + fmt("%.4f", s.p_far);
    detail += ", p_slow";
    for (const auto& s : st)
        detail += " " + fmt("%.4f", s.p_slow);
    return {ok, detail};
}

Outcome crit13()
{
    const Domain d = Domain::interval(1.0, 1.0 / 400);
    SchemeConfig cfg;
    cfg.params = Parameters(1.0, 4.0);
    cfg.T = 0.02;
    cfg.stride = 20;
    const FitWindow w{0.002, 0.02};
    double rate[5] = {};
    double exact[5] = {};
    bool close = true;
    std::string detail;
    for (int j : {1, 2, 4}) {
        const auto p = SeparableProfile::from_theta(4.0, 1.0, 3, j);
        const auto u0 = p.sample(d);
        rate[j] = decay_fit(tracked_integrate(u0, cfg), w, u0).rate;
        exact[j] = p.decay_rate();
        close = close && std::abs(rate[j] / exact[j] - 1.0) <= 0.05;
        detail += "j=" + std::to_string(j) + " " + fmt("%.2f", rate[j]) + "/" + fmt("%.2f", exact[j]) + " ";
    }
    return {close && rate[2] > rate[1] && rate[1] > rate[4], "fitted/closed form: " + detail};
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"separable exact solution", crit1},
        {"eigen decay rates", crit2},
        {"critical ratio recovery", crit3},
        {"negative projection criterion", crit4},
        {"small b- limit", crit5},
        {"transition layer", crit6},
        {"obstacle oracle agreement", crit7},
        {"game constant", crit8},
        {"dpp convergence", crit9},
        {"value of game", crit10},
        {"sup-norm bound", crit11},
        {"exit estimates", crit12},
        {"tiled decay ordering", crit13},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += o.pass ? 0 : 1;
        std::printf("%s [%2zu] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
