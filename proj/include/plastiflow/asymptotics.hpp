#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "plastiflow/core.hpp"
#include "plastiflow/oracles.hpp"

namespace plastiflow {

/// Trapezoid quadrature of u·φ; throws DomainMismatch.
double projection(const GridFunction& u, const GridFunction& phi);

/// max over interior nodes with φ >= 1e-6 of u(x,t)e^{rate·t}/φ(x).
double best_fit_constant(const Solution& sol, const EigenPair& e, double rate, double t);

struct FitWindow {
    double t1 = 0.0;
    double t2 = 0.0;
};

struct DecayFit {
    double rate = 0.0;
    double amplitude = 0.0;  // signed: negative for a nonpositive tail
    FitWindow window;
    double residual = 0.0;   // RMS of the log-linear regression
    double profile_distance = 0.0;
    double profile_scale = 0.0;
    std::size_t samples = 0;
    bool sign_change_in_window = false;
};

/**
 * Log-linear fit of sup|u| against t.
 *
 * Without a window the fit uses the last tenth of the time span covered by
 * snapshots with sup-norm >= 1e-10. Throws WindowEmpty when fewer than two
 * snapshots fall inside.
 */
DecayFit decay_fit(const Solution& sol, std::optional<FitWindow> window,
                   const GridFunction& reference);

enum class Verdict { A, B, Unresolved };
std::string_view to_string(Verdict v);

struct ClassifyBudget {
    double t_max = 3.0;
    double sign_tol = 1e-6;      // relative to the current sup-norm
    std::size_t check_every = 10;
    std::size_t retries = 2;     // budget doublings allowed on Unresolved (bisection only)
};

struct ThetaClassification {
    double theta = 0.0;
    Verdict verdict = Verdict::Unresolved;
    double decision_time = 0.0;
    SignPattern terminal_sign = SignPattern::Mixed;
    std::vector<double> trace_times;
    std::vector<double> projection_trace;
    double budget = 0.0;
};

/// Evolves u0 with (b⁻, θb⁻) until the solution has one sign or the budget runs out.
ThetaClassification classify_theta(const GridFunction& u0, double b_minus, double theta,
                                   const ClassifyBudget& budget = {});

struct BisectionResult {
    double lo = 0.0;
    double hi = 0.0;
    bool converged = false;
    std::vector<ThetaClassification> trace;
};

/// Bisection on the A/B verdict; throws BadBracket unless lo is A and hi is B.
BisectionResult bisect_theta_star(const GridFunction& u0, double b_minus, double lo, double hi,
                                  double tol, const ClassifyBudget& budget = {});

std::vector<ThetaClassification> sweep_theta(const GridFunction& u0, double b_minus,
                                             const std::vector<double>& thetas,
                                             const ClassifyBudget& budget = {},
                                             std::size_t threads = 1);

/// True when the verdicts read A…A, Unresolved…, B…B along the sweep.
bool is_step_function(const std::vector<ThetaClassification>& sweep);

}  // namespace plastiflow
