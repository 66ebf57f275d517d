#include "plastiflow/game_mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "plastiflow/parallel.hpp"

namespace plastiflow {

Point sample_ball(Point x, int dim, double epsilon, Rng& rng)
{
    if (dim == 1)
        return {x.x + epsilon * (2.0 * rng.uniform() - 1.0), x.y};
    const double r = epsilon * std::sqrt(rng.uniform());
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    return {x.x + r * std::cos(angle), x.y + r * std::sin(angle)};
}

double effective_C(const GameConfig& cfg)
{
    return cfg.C > 0.0 ? cfg.C : c_of_N(cfg.u0.domain().dim());
}

double Strategy::choose(const GameConfig& cfg, Point x, double t) const
{
    const double C = effective_C(cfg);
    switch (kind_) {
    case StrategyKind::ConstantB:
        return b_;
    case StrategyKind::EndpointBySign: {
        const double now = table_->value_at(x.x, x.y, t);
        const double before = table_->value_at(x.x, x.y, t - table_->dt());
        return now - before >= 0.0 ? C * cfg.params.b_plus() : C * cfg.params.b_minus();
    }
    case StrategyKind::TableGreedy:
        return table_->best_b(x.x, x.y, t);
    }
    return b_;
}

namespace {

std::size_t step_cap(const GameConfig& cfg, double t0)
{
    const double eps = cfg.epsilon;
    const double least = effective_C(cfg) * cfg.params.b_min() * eps * eps;
    return 10 * static_cast<std::size_t>(std::ceil(t0 / least)) + 1'000'000;
}

}  // namespace

Trajectory play(const GameConfig& cfg, const Strategy& s, Point start, double t0, Rng& rng,
                bool record)
{
    const Domain& d = cfg.u0.domain();
    if (!(t0 > 0.0) || !d.contains(start.x, start.y))
        throw Error(ErrorKind::ConfigError, "game must start in the open domain at positive time");
    const double eps = cfg.epsilon;
    const double C = effective_C(cfg);
    const double lo = C * cfg.params.b_min() * (1.0 - 1e-12);
    const double hi = C * cfg.params.b_max() * (1.0 + 1e-12);
    const std::size_t cap = step_cap(cfg, t0);

    Trajectory tr;
    Point x = start;
    double t = t0;
    if (record)
        tr.states.push_back({x, t});
    for (std::size_t k = 1;; ++k) {
        if (k > cap)
            throw Error(ErrorKind::StoppingFailure, "trajectory exceeded the step cap");
        const double b = s.choose(cfg, x, t);
        if (b < lo || b > hi)
            throw Error(ErrorKind::ConfigError, "strategy returned b outside [Cb-, Cb+]");
        x = sample_ball(x, d.dim(), eps, rng);
        t -= b * eps * eps;
        if (t <= 1e-9 * b * eps * eps)
            t = std::min(t, 0.0);  // residue of repeated subtraction
        if (record)
            tr.states.push_back({x, t});
        const bool inside = d.contains(x.x, x.y);
        if (t <= 0.0 || !inside) {
            tr.tau = k;
            tr.exit = t <= 0.0 ? ExitKind::TimeExit : ExitKind::SpaceExit;
            tr.exit_point = x;
            tr.exit_time = t;
            tr.payoff = tr.exit == ExitKind::TimeExit ? cfg.u0.interpolate(x.x, x.y) : 0.0;
            return tr;
        }
    }
}

ValueEstimate estimate_value(const GameConfig& cfg, const Strategy& s, Point start, double t0,
                             std::size_t n, std::uint64_t seed, std::size_t threads)
{
    if (n < 2)
        throw Error(ErrorKind::ConfigError, "estimate needs at least two trajectories");
    std::vector<double> payoff(n);
    std::vector<std::size_t> steps(n);
    std::vector<std::uint8_t> space(n);
    parallel_for(n, threads, [&](std::size_t i) {
        Rng rng(seed + i);
        const Trajectory tr = play(cfg, s, start, t0, rng);
        payoff[i] = tr.payoff;
        steps[i] = tr.tau;
        space[i] = tr.exit == ExitKind::SpaceExit ? 1 : 0;
    });

    ValueEstimate est;
    est.n = n;
    est.seed = seed;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += payoff[i];
        est.space_exits += space[i];
        ++est.step_histogram[steps[i]];
        est.max_steps = std::max(est.max_steps, steps[i]);
    }
    est.time_exits = n - est.space_exits;
    est.mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double p : payoff)
        ss += (p - est.mean) * (p - est.mean);
    est.std_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    est.half_width = kZ99 * est.std_error;
    return est;
}

Interval99 wilson(std::size_t k, std::size_t n)
{
    if (n == 0)
        return {0.0, 1.0};
    const double z = kZ99;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double denom = 1.0 + z * z / nn;
    const double centre = (p + z * z / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

ExitStats exit_stats(const GameConfig& cfg, double distance, double a, std::size_t n,
                     std::uint64_t seed, std::size_t threads)
{
    const Domain& d = cfg.u0.domain();
    const double eps = cfg.epsilon;
    if (!(eps > 0.0) || !(a > 0.0) || n == 0)
        throw Error(ErrorKind::ConfigError, "exit statistics need epsilon, a > 0 and n >= 1");
    const Point y = d.dim() == 1 ? Point{0.0, 0.0} : Point{0.0, 0.5 * d.length_y()};
    const Point start{y.x + distance, y.y};
    if (!d.contains(start.x, start.y))
        throw Error(ErrorKind::ConfigError, "exit start must lie in the open domain");
    const double slow = a / (2.0 * eps * eps);
    constexpr std::size_t cap = 1'000'000'000;

    std::vector<std::uint8_t> far(n);
    std::vector<std::uint8_t> late(n);
    std::vector<std::size_t> taus(n);
    parallel_for(n, threads, [&](std::size_t i) {
        Rng rng(seed + i);
        Point x = start;
        std::size_t k = 0;
        do {
            if (++k > cap)
                throw Error(ErrorKind::StoppingFailure, "walk exceeded the step cap");
            x = sample_ball(x, d.dim(), eps, rng);
        } while (d.contains(x.x, x.y));
        far[i] = std::hypot(x.x - y.x, x.y - y.y) >= a ? 1 : 0;
        late[i] = static_cast<double>(k) >= slow ? 1 : 0;
        taus[i] = k;
    });

    ExitStats st;
    st.distance = distance;
    st.n = n;
    std::size_t nf = 0;
    std::size_t ns = 0;
    double tau_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        nf += far[i];
        ns += late[i];
        tau_sum += static_cast<double>(taus[i]);
    }
    st.p_far = static_cast<double>(nf) / static_cast<double>(n);
    st.p_slow = static_cast<double>(ns) / static_cast<double>(n);
    st.far_ci = wilson(nf, n);
    st.slow_ci = wilson(ns, n);
    st.mean_tau = tau_sum / static_cast<double>(n);
    return st;
}

MartingaleReport martingale_diagnostic(const DppTable& table, const Strategy& s, Point start,
                                       double t0, std::size_t n, std::uint64_t seed,
                                       std::size_t threads)
{
    if (n < 2)
        throw Error(ErrorKind::ConfigError, "diagnostic needs at least two trajectories");
    const GameConfig& cfg = table.config();
    std::vector<std::vector<double>> increments(n);
    std::vector<double> payoff(n);
    parallel_for(n, threads, [&](std::size_t i) {
        Rng rng(seed + i);
        const Trajectory tr = play(cfg, s, start, t0, rng, true);
        auto& inc = increments[i];
        inc.reserve(tr.tau);
        double prev = table.value_at(tr.states[0].x.x, tr.states[0].x.y, tr.states[0].t);
        for (std::size_t k = 1; k < tr.states.size(); ++k) {
            const auto& st = tr.states[k];
            const double v = table.value_at(st.x.x, st.x.y, st.t);
            inc.push_back(v - prev);
            prev = v;
        }
        payoff[i] = tr.payoff;
    });

    MartingaleReport rep;
    rep.n = n;
    rep.start_value = table.value_at(start.x, start.y, t0);
    std::size_t longest = 0;
    for (const auto& inc : increments)
        longest = std::max(longest, inc.size());
    rep.mean_increment.assign(longest, 0.0);
    rep.stderr_increment.assign(longest, 0.0);
    rep.count.assign(longest, 0);
    for (const auto& inc : increments)
        for (std::size_t k = 0; k < inc.size(); ++k) {
            rep.mean_increment[k] += inc[k];
            ++rep.count[k];
        }
    for (std::size_t k = 0; k < longest; ++k)
        rep.mean_increment[k] /= static_cast<double>(rep.count[k]);
    std::vector<double> ss(longest, 0.0);
    for (const auto& inc : increments)
        for (std::size_t k = 0; k < inc.size(); ++k)
            ss[k] += (inc[k] - rep.mean_increment[k]) * (inc[k] - rep.mean_increment[k]);
    rep.min_z = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < longest; ++k) {
        const double c = static_cast<double>(rep.count[k]);
        if (rep.count[k] > 1)
            rep.stderr_increment[k] = std::sqrt(ss[k] / (c - 1.0) / c);
        if (rep.stderr_increment[k] > 0.0)
            rep.min_z = std::min(rep.min_z, rep.mean_increment[k] / rep.stderr_increment[k]);
    }
    if (!std::isfinite(rep.min_z))
        rep.min_z = 0.0;

    double sum = 0.0;
    for (double p : payoff)
        sum += p;
    rep.terminal_mean = sum / static_cast<double>(n);
    double tss = 0.0;
    for (double p : payoff)
        tss += (p - rep.terminal_mean) * (p - rep.terminal_mean);
    rep.terminal_stderr = std::sqrt(tss / static_cast<double>(n - 1) / static_cast<double>(n));
    return rep;
}

}  // namespace plastiflow
