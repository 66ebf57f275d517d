#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "plastiflow/core.hpp"

namespace plastiflow {

enum class RhsKind {
    ElastoPlastic,  // ∂t u = Δu/b⁺ where Δu >= 0, Δu/b⁻ otherwise
    Layer,          // c ∂t w = min{Δw, 0}
};

struct SchemeConfig {
    Parameters params{1.0, 1.0};
    double dt = 0.0;  // 0 selects the CFL limit
    double T = 0.0;
    RhsKind rhs = RhsKind::ElastoPlastic;
    double layer_coefficient = 1.0;  // c of the Layer kind
    std::size_t stride = 1;          // snapshot every `stride` steps (final step always kept)
    /// Stop early once sup|u^{n+1}-u^n|/dt falls to this value ("t → ∞" runs).
    std::optional<double> steady_tol;
};

inline constexpr double kCflSafety = 0.9;

/// Largest stable explicit step: safety·h²·(min coefficient)/(2d).
double cfl_limit(const Domain& d, const SchemeConfig& cfg);

/// Fills dt with the CFL limit when it is unset; validates T.
SchemeConfig with_auto_dt(const Domain& d, SchemeConfig cfg);

GridFunction ep_rhs(const GridFunction& u, const Parameters& p);
GridFunction layer_rhs(const GridFunction& u, double coefficient = 1.0);

/// Called after each accepted step with (t, u^{n+1}, u^n); returning true stops the run.
using StepObserver =
    std::function<bool(double, std::span<const double>, std::span<const double>)>;

struct IntegrationStats {
    std::size_t steps = 0;
    double final_time = 0.0;
    bool stopped_steady = false;
    bool stopped_by_observer = false;
    bool max_principle_held = true;
};

/**
 * Forward Euler on ep_rhs / layer_rhs with the boundary re-clamped every step.
 *
 * Snapshot 0 is u0 at t = 0. Throws CflViolation, CompatibilityError when
 * u0 is nonzero on ∂Ω (beyond 1e-12), and BlowUp on non-finite values.
 */
Solution integrate(const GridFunction& u0, const SchemeConfig& cfg,
                   IntegrationStats* stats = nullptr, const StepObserver& observer = {});

enum class LimitKind {
    SmallBMinus,          // u_{b⁻,b⁺}(t) vs heat from ũ₀ with κ = b⁺
    LayerSmallBMinus,     // u_{b⁻,b⁺}(b⁻t) vs layer ∂t w = min{Δw,0}
    LargeBPlus,           // u_{b⁻,b⁺}(t) vs layer b⁻ ∂t w = min{Δw,0}
    LargeBPlusRescaled,   // u_{b⁻,b⁺}(b⁺t) vs heat from ũ₀ with κ = 1
};

struct LimitRow {
    double parameter;          // the varied b⁻ or b⁺
    std::vector<double> gaps;  // sup-norm gap per requested time
};

struct LimitReport {
    LimitKind kind;
    std::vector<double> times;
    std::vector<LimitRow> rows;
    /// gaps non-increasing along the parameter list at every time >= t_min
    bool monotone = true;
};

/**
 * Singular-limit experiment for one of the four limits below.
 *
 * `fixed` is b⁺ for the small-b⁻ kinds and b⁻ for the large-b⁺ kinds;
 * `values` must approach the limit monotonically.
 */
LimitReport limit_suite(const GridFunction& u0, LimitKind kind, double fixed,
                        const std::vector<double>& values, const std::vector<double>& times,
                        double t_min = 0.0);

}  // namespace plastiflow
