#include "plastiflow/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plastiflow/fd_solver.hpp"
#include "plastiflow/parallel.hpp"

namespace plastiflow {

double projection(const GridFunction& u, const GridFunction& phi)
{
    if (!(u.domain() == phi.domain()))
        throw Error(ErrorKind::DomainMismatch, "projection needs matching domains");
    std::vector<double> prod(u.size());
    for (std::size_t n = 0; n < prod.size(); ++n)
        prod[n] = u[n] * phi[n];
    return integrate(GridFunction(u.domain(), std::move(prod)));
}

double best_fit_constant(const Solution& sol, const EigenPair& e, double rate, double t)
{
    const GridFunction& u = sol.at(t);
    const Domain& d = u.domain();
    if (!(d == e.phi.domain()))
        throw Error(ErrorKind::DomainMismatch, "eigenfunction lives on another domain");
    const double growth = std::exp(rate * t);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < d.size(); ++n) {
        if (d.on_boundary(n) || e.phi[n] < 1e-6)
            continue;
        best = std::max(best, u[n] * growth / e.phi[n]);
    }
    return best;
}

DecayFit decay_fit(const Solution& sol, std::optional<FitWindow> window,
                   const GridFunction& reference)
{
    std::vector<std::size_t> valid;
    for (std::size_t k = 0; k < sol.size(); ++k)
        if (sol.diagnostics[k].sup_norm >= 1e-10)
            valid.push_back(k);
    FitWindow w;
    if (window) {
        w = *window;
    } else {
        if (valid.size() < 2)
            throw Error(ErrorKind::WindowEmpty, "fewer than two snapshots above the noise floor");
        const double t_lo = sol.times[valid.front()];
        const double t_hi = sol.times[valid.back()];
        w = {t_hi - 0.1 * (t_hi - t_lo), t_hi};
    }
    if (!(w.t1 < w.t2))
        throw Error(ErrorKind::WindowEmpty, "fit window must satisfy t1 < t2");

    std::vector<std::size_t> idx;
    for (std::size_t k : valid)
        if (sol.times[k] >= w.t1 - 1e-12 && sol.times[k] <= w.t2 + 1e-12)
            idx.push_back(k);
    if (idx.size() < 2)
        throw Error(ErrorKind::WindowEmpty, "fewer than two snapshots in the fit window");

    DecayFit fit;
    fit.window = w;
    fit.samples = idx.size();
    double st = 0.0;
    double sy = 0.0;
    for (std::size_t k : idx) {
        st += sol.times[k];
        sy += std::log(sol.diagnostics[k].sup_norm);
        if (sol.diagnostics[k].sign == SignPattern::Mixed)
            fit.sign_change_in_window = true;
    }
    const double m = static_cast<double>(idx.size());
    const double tbar = st / m;
    const double ybar = sy / m;
    double stt = 0.0;
    double sty = 0.0;
    for (std::size_t k : idx) {
        const double dt = sol.times[k] - tbar;
        stt += dt * dt;
        sty += dt * (std::log(sol.diagnostics[k].sup_norm) - ybar);
    }
    const double slope = sty / stt;
    const double intercept = ybar - slope * tbar;
    double rss = 0.0;
    for (std::size_t k : idx) {
        const double r = std::log(sol.diagnostics[k].sup_norm) - (intercept + slope * sol.times[k]);
        rss += r * r;
    }
    fit.rate = -slope;
    fit.residual = std::sqrt(rss / m);

    const std::size_t last = idx.back();
    const GridFunction& u = sol.snapshots[last];
    const double t2 = sol.times[last];
    // sign of the tail taken from the node of largest modulus
    double extreme = 0.0;
    for (double v : u.values())
        if (std::abs(v) > std::abs(extreme))
            extreme = v;
    fit.amplitude = (extreme < 0.0 ? -1.0 : 1.0) * std::exp(intercept);

    if (!(u.domain() == reference.domain()))
        throw Error(ErrorKind::DomainMismatch, "reference profile lives on another domain");
    const double ref_norm = reference.sup_norm();
    if (ref_norm > 0.0) {
        const double growth = std::exp(fit.rate * t2);
        std::vector<double> v(u.size());
        for (std::size_t n = 0; n < v.size(); ++n)
            v[n] = u[n] * growth;
        double vmax = 0.0;
        for (double x : v)
            vmax = std::max(vmax, std::abs(x));
        const auto gap = [&](double s) {
            double g = 0.0;
            for (std::size_t n = 0; n < v.size(); ++n)
                g = std::max(g, std::abs(v[n] - s * reference[n]));
            return g;
        };
        // the gap is convex in s and its minimizer satisfies |s|·‖ref‖ <= 2‖v‖
        double lo = -2.0 * vmax / ref_norm;
        double hi = 2.0 * vmax / ref_norm;
        for (int it = 0; it < 200; ++it) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            if (gap(m1) <= gap(m2))
                hi = m2;
            else
                lo = m1;
        }
        fit.profile_scale = 0.5 * (lo + hi);
        fit.profile_distance = gap(fit.profile_scale) / ref_norm;
    }
    return fit;
}

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::A:
        return "A";
    case Verdict::B:
        return "B";
    case Verdict::Unresolved:
        return "Unresolved";
    }
    return "Unresolved";
}

ThetaClassification classify_theta(const GridFunction& u0, double b_minus, double theta,
                                   const ClassifyBudget& budget)
{
    if (!(theta > 1.0))
        throw Error(ErrorKind::InvalidTheta, "theta must exceed 1");
    if (!(budget.t_max > 0.0))
        throw Error(ErrorKind::ConfigError, "classification budget must be positive");
    const Domain& d = u0.domain();
    const GridFunction phi = eigenpair(d).phi;

    ThetaClassification out;
    out.theta = theta;
    out.budget = budget.t_max;

    GridFunction scratch(d, 0.0);
    // returns true once a verdict is reached
    const auto inspect = [&](double t, std::span<const double> u) {
        double lo = 0.0;
        double hi = 0.0;
        for (double v : u) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        std::copy(u.begin(), u.end(), scratch.values().begin());
        const double proj = projection(scratch, phi);
        out.trace_times.push_back(t);
        out.projection_trace.push_back(proj);
        const double sup = std::max(hi, -lo);
        const double tol = budget.sign_tol * sup;
        out.terminal_sign = sign_pattern(scratch, tol);
        out.decision_time = t;
        if (sup == 0.0 || sup < 1e-250)
            return true;  // decayed to nothing: stays Unresolved
        if (lo >= -tol && proj > 0.0) {
            out.verdict = Verdict::A;
            return true;
        }
        if (hi <= tol && proj < 0.0) {
            out.verdict = Verdict::B;
            return true;
        }
        return false;
    };

    if (inspect(0.0, u0.values()))
        return out;

    SchemeConfig cfg;
    cfg.params = Parameters(b_minus, theta * b_minus);
    cfg.T = budget.t_max;
    cfg.stride = static_cast<std::size_t>(-1);
    const std::size_t every = std::max<std::size_t>(1, budget.check_every);
    std::size_t step = 0;
    bool decided = false;
    integrate(u0, cfg, nullptr, [&](double t, std::span<const double> u, std::span<const double>) {
        if (++step % every != 0)
            return false;
        decided = inspect(t, u);
        return decided;
    });
    if (!decided) {
        out.verdict = Verdict::Unresolved;
        out.decision_time = budget.t_max;
    }
    return out;
}

namespace {

ThetaClassification classify_with_retries(const GridFunction& u0, double b_minus, double theta,
                                          ClassifyBudget budget)
{
    ThetaClassification c = classify_theta(u0, b_minus, theta, budget);
    for (std::size_t r = 0; r < budget.retries && c.verdict == Verdict::Unresolved; ++r) {
        budget.t_max *= 2.0;
        c = classify_theta(u0, b_minus, theta, budget);
    }
    return c;
}

}  // namespace

BisectionResult bisect_theta_star(const GridFunction& u0, double b_minus, double lo, double hi,
                                  double tol, const ClassifyBudget& budget)
{
    if (!(lo > 1.0) || !(hi > lo) || !(tol > 0.0))
        throw Error(ErrorKind::BadBracket, "bracket must satisfy 1 < lo < hi and tol > 0");
    BisectionResult res;
    const auto lo_c = classify_with_retries(u0, b_minus, lo, budget);
    res.trace.push_back(lo_c);
    if (lo_c.verdict != Verdict::A)
        throw Error(ErrorKind::BadBracket, "lower end theta=" + format_real(lo) + " is not in A");
    const auto hi_c = classify_with_retries(u0, b_minus, hi, budget);
    res.trace.push_back(hi_c);
    if (hi_c.verdict != Verdict::B)
        throw Error(ErrorKind::BadBracket, "upper end theta=" + format_real(hi) + " is not in B");

    res.lo = lo;
    res.hi = hi;
    res.converged = true;
    while (res.hi - res.lo > tol) {
        const double mid = 0.5 * (res.lo + res.hi);
        auto c = classify_with_retries(u0, b_minus, mid, budget);
        const Verdict v = c.verdict;
        res.trace.push_back(std::move(c));
        if (v == Verdict::A) {
            res.lo = mid;
        } else if (v == Verdict::B) {
            res.hi = mid;
        } else {
            res.converged = false;
            break;
        }
    }
    return res;
}

std::vector<ThetaClassification> sweep_theta(const GridFunction& u0, double b_minus,
                                             const std::vector<double>& thetas,
                                             const ClassifyBudget& budget, std::size_t threads)
{
    std::vector<ThetaClassification> out(thetas.size());
    parallel_for(thetas.size(), threads,
                 [&](std::size_t i) { out[i] = classify_theta(u0, b_minus, thetas[i], budget); });
    return out;
}

bool is_step_function(const std::vector<ThetaClassification>& sweep)
{
    // phase 0: A, phase 1: Unresolved, phase 2: B
    int phase = 0;
    for (const auto& c : sweep) {
        const int p = c.verdict == Verdict::A ? 0 : c.verdict == Verdict::Unresolved ? 1 : 2;
        if (p < phase)
            return false;
        phase = p;
    }
    return true;
}

}  // namespace plastiflow
