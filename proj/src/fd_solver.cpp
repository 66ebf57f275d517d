#include "plastiflow/fd_solver.hpp"

#include <algorithm>
#include <cmath>

#include "plastiflow/obstacle.hpp"
#include "plastiflow/oracles.hpp"

namespace plastiflow {

double cfl_limit(const Domain& d, const SchemeConfig& cfg)
{
    const double h = d.h();
    const double coeff =
        cfg.rhs == RhsKind::Layer ? cfg.layer_coefficient : cfg.params.b_min();
    return kCflSafety * h * h * coeff / (2.0 * d.dim());
}

SchemeConfig with_auto_dt(const Domain& d, SchemeConfig cfg)
{
    if (!(cfg.T > 0.0))
        throw Error(ErrorKind::ConfigError, "horizon T must be positive");
    if (cfg.rhs == RhsKind::Layer && !(cfg.layer_coefficient > 0.0))
        throw Error(ErrorKind::ConfigError, "layer coefficient must be positive");
    if (cfg.dt == 0.0)
        cfg.dt = cfl_limit(d, cfg);
    if (cfg.stride == 0)
        cfg.stride = 1;
    return cfg;
}

namespace {

// Branch by the sign of Δ_h u; Δ_h u = 0 takes the b⁺ branch (rhs is 0 either way).
inline double ep_value(double lap, double inv_bm, double inv_bp) noexcept
{
    return lap >= 0.0 ? lap * inv_bp : lap * inv_bm;
}

inline double layer_value(double lap, double inv_c) noexcept
{
    return lap < 0.0 ? lap * inv_c : 0.0;
}

template <class F>
void apply_rhs(const Domain& d, std::span<const double> u, std::span<double> out, F&& f)
{
    const double inv_h2 = 1.0 / (d.h() * d.h());
    const auto nx = d.nx();
    if (d.kind() == DomainKind::Interval) {
        out[0] = 0.0;
        out[nx - 1] = 0.0;
        for (std::size_t i = 1; i + 1 < nx; ++i)
            out[i] = f((u[i - 1] - 2.0 * u[i] + u[i + 1]) * inv_h2);
        return;
    }
    const auto ny = d.ny();
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t n = i + nx * j;
            if (i == 0 || j == 0 || i + 1 == nx || j + 1 == ny) {
                out[n] = 0.0;
                continue;
            }
            out[n] = f((u[n - 1] + u[n + 1] + u[n - nx] + u[n + nx] - 4.0 * u[n]) * inv_h2);
        }
}

}  // namespace

GridFunction ep_rhs(const GridFunction& u, const Parameters& p)
{
    GridFunction src = u;
    src.zero_boundary();
    GridFunction out(u.domain(), 0.0);
    const double inv_bm = 1.0 / p.b_minus();
    const double inv_bp = 1.0 / p.b_plus();
    apply_rhs(u.domain(), src.values(), out.values(),
              [=](double lap) { return ep_value(lap, inv_bm, inv_bp); });
    return out;
}

GridFunction layer_rhs(const GridFunction& u, double coefficient)
{
    if (!(coefficient > 0.0))
        throw Error(ErrorKind::ConfigError, "layer coefficient must be positive");
    GridFunction src = u;
    src.zero_boundary();
    GridFunction out(u.domain(), 0.0);
    const double inv_c = 1.0 / coefficient;
    apply_rhs(u.domain(), src.values(), out.values(),
              [=](double lap) { return layer_value(lap, inv_c); });
    return out;
}

Solution integrate(const GridFunction& u0, const SchemeConfig& cfg_in, IntegrationStats* stats,
                   const StepObserver& observer)
{
    const Domain& d = u0.domain();
    const SchemeConfig cfg = with_auto_dt(d, cfg_in);
    const double limit = cfl_limit(d, cfg);
    if (!(cfg.dt > 0.0) || cfg.dt > limit * (1.0 + 1e-12))
        throw Error(ErrorKind::CflViolation, "dt=" + format_real(cfg.dt)
                                                 + " exceeds the stability limit "
                                                 + format_real(limit));
    if (!u0.all_finite())
        throw Error(ErrorKind::NonFiniteInput, "initial datum has non-finite values");
    if (u0.boundary_sup() > 1e-12)
        throw Error(ErrorKind::CompatibilityError, "initial datum must vanish on the boundary");

    const auto phi = eigenpair(d).phi;
    Solution sol;
    sol.params = cfg.params;

    GridFunction u = u0;
    u.zero_boundary();
    u.set_time(0.0);
    const auto record = [&](double t) {
        GridFunction snap = u;
        snap.set_time(t);
        sol.times.push_back(t);
        sol.diagnostics.push_back(diagnose(snap, phi));
        sol.snapshots.push_back(std::move(snap));
    };
    record(0.0);

    const double bound = u0.sup_norm() * (1.0 + 1e-12);
    const auto steps = static_cast<std::size_t>(std::ceil(cfg.T / cfg.dt - 1e-9));
    const double inv_bm = 1.0 / cfg.params.b_minus();
    const double inv_bp = 1.0 / cfg.params.b_plus();
    const double inv_c = 1.0 / cfg.layer_coefficient;

    IntegrationStats local;
    std::vector<double> rhs(d.size(), 0.0);
    std::vector<double> prev(d.size(), 0.0);
    auto vals = u.values();
    double t = 0.0;
    for (std::size_t step = 1; step <= steps; ++step) {
        const double t_next = step == steps ? cfg.T : static_cast<double>(step) * cfg.dt;
        const double tau = t_next - t;
        if (cfg.rhs == RhsKind::ElastoPlastic)
            apply_rhs(d, vals, rhs, [=](double lap) { return ep_value(lap, inv_bm, inv_bp); });
        else
            apply_rhs(d, vals, rhs, [=](double lap) { return layer_value(lap, inv_c); });

        std::copy(vals.begin(), vals.end(), prev.begin());
        double change = 0.0;
        double sup = 0.0;
        bool finite = true;
        for (std::size_t n = 0; n < vals.size(); ++n) {
            const double inc = tau * rhs[n];
            vals[n] += inc;
            change = std::max(change, std::abs(inc));
            sup = std::max(sup, std::abs(vals[n]));
            finite = finite && std::isfinite(vals[n]);
        }
        if (!finite)
            throw Error(ErrorKind::BlowUp, "non-finite value at t=" + format_real(t_next));
        if (sup > bound)
            local.max_principle_held = false;
        t = t_next;
        local.steps = step;
        local.final_time = t;
        const bool halt = observer && observer(t, vals, prev);
        const bool steady = cfg.steady_tol && change / tau <= *cfg.steady_tol;
        if (step == steps || steady || halt || step % cfg.stride == 0)
            record(t);
        if (steady || halt) {
            local.stopped_steady = steady;
            local.stopped_by_observer = halt;
            break;
        }
    }
    if (stats)
        *stats = local;
    return sol;
}

namespace {

/// States at each requested time, integrating segment by segment.
std::vector<GridFunction> evolve_to(const GridFunction& u0, SchemeConfig cfg,
                                    const std::vector<double>& times)
{
    std::vector<GridFunction> out;
    GridFunction u = u0;
    double t = 0.0;
    for (double target : times) {
        if (target > t) {
            cfg.T = target - t;
            cfg.dt = 0.0;
            cfg.stride = static_cast<std::size_t>(-1);
            u = integrate(u, cfg).back();
        }
        u.set_time(target);
        out.push_back(u);
        t = target;
    }
    return out;
}

}  // namespace

LimitReport limit_suite(const GridFunction& u0, LimitKind kind, double fixed,
                        const std::vector<double>& values, const std::vector<double>& times,
                        double t_min)
{
    if (values.empty() || times.empty())
        throw Error(ErrorKind::ConfigError, "limit suite needs parameter values and times");
    if (!std::is_sorted(times.begin(), times.end()) || times.front() < 0.0)
        throw Error(ErrorKind::ConfigError, "limit times must be nonnegative and sorted");
    const bool decreasing = kind == LimitKind::SmallBMinus || kind == LimitKind::LayerSmallBMinus;
    for (std::size_t k = 1; k < values.size(); ++k) {
        const bool ok = decreasing ? values[k] < values[k - 1] : values[k] > values[k - 1];
        if (!ok)
            throw Error(ErrorKind::ConfigError, "limit parameter list must approach the limit monotonically");
    }

    LimitReport report{kind, times, {}, true};

    std::vector<GridFunction> targets;
    const auto projected = [&] { return project_initial(u0, 1e-12).tilde_u0; };
    switch (kind) {
    case LimitKind::SmallBMinus: {
        const auto tilde = projected();
        for (double t : times)
            targets.push_back(heat_series_solve(tilde, fixed, t));
        break;
    }
    case LimitKind::LargeBPlusRescaled: {
        const auto tilde = projected();
        for (double t : times)
            targets.push_back(heat_series_solve(tilde, 1.0, t));
        break;
    }
    case LimitKind::LayerSmallBMinus:
    case LimitKind::LargeBPlus: {
        SchemeConfig layer;
        layer.rhs = RhsKind::Layer;
        layer.layer_coefficient = kind == LimitKind::LargeBPlus ? fixed : 1.0;
        targets = evolve_to(u0, layer, times);
        break;
    }
    }

    for (double v : values) {
        const bool vary_minus = decreasing;
        SchemeConfig cfg;
        cfg.params = vary_minus ? Parameters(v, fixed) : Parameters(fixed, v);
        std::vector<double> physical = times;
        if (kind == LimitKind::LayerSmallBMinus || kind == LimitKind::LargeBPlusRescaled)
            for (double& t : physical)
                t *= v;
        const auto states = evolve_to(u0, cfg, physical);
        LimitRow row{v, {}};
        for (std::size_t k = 0; k < times.size(); ++k)
            row.gaps.push_back(sup_distance(states[k], targets[k]));
        report.rows.push_back(std::move(row));
    }

    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < t_min)
            continue;
        for (std::size_t r = 1; r < report.rows.size(); ++r)
            if (report.rows[r].gaps[k] > report.rows[r - 1].gaps[k] + 1e-14)
                report.monotone = false;
    }
    return report;
}

}  // namespace plastiflow
