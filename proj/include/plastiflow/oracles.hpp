#pragma once

#include <cstddef>
#include <vector>

#include "plastiflow/core.hpp"

namespace plastiflow {

/// First Dirichlet eigenpair: positive eigenfunction normalized to max 1.
struct EigenPair {
    GridFunction phi;
    double lambda;
};

EigenPair eigenpair(const Domain& d);

/**
 * Sine-series solution of κ ∂t v = Δv on an interval with zero ends.
 *
 * Coefficients come from composite-trapezoid quadrature on the datum's own
 * grid, so the mode count is capped at cells-1 (higher modes alias).
 */
class HeatSeries {
public:
    explicit HeatSeries(const GridFunction& u0, std::size_t modes = 256);

    std::size_t modes() const noexcept { return coeffs_.size(); }
    double coefficient(std::size_t n) const { return coeffs_.at(n - 1); }
    /// Σ|c_n| over the upper half of the retained modes; a proxy for the dropped tail.
    double tail_estimate() const noexcept { return tail_; }

    double evaluate(double x, double t, double kappa) const;
    GridFunction evaluate_on(const Domain& d, double t, double kappa) const;

private:
    double length_;
    std::vector<double> coeffs_;
    double tail_ = 0.0;
};

/// U_κ(u0)(·, t).
GridFunction heat_series_solve(const GridFunction& u0, double kappa, double t,
                               std::size_t modes = 256);

enum class TilingVariant { Base, Tiled };

/**
 * Separable sign-changing profile ψ and its tiled variants Ψ_{M,j}.
 *
 * ψ = -k sin(πx/a) on (0,a), sin(π(x-a)/(1-a)) on (a,1); with k = a/(1-a)
 * the one-sided slopes agree at x = a and e^{-ωt}ψ solves the equation
 * exactly when θ = ((1-a)/a)².
 */
class SeparableProfile {
public:
    /// Profile matched to θ = b⁺/b⁻ > 1.
    static SeparableProfile from_theta(double theta, double b_minus = 1.0, int tiles = 0,
                                       int variant = 0);
    /// Profile with interface a ∈ (0, 1/2); θ is implied.
    static SeparableProfile from_interface(double a, double b_minus = 1.0, int tiles = 0,
                                           int variant = 0);

    double a() const noexcept { return a_; }
    double k() const noexcept { return k_; }
    double omega() const noexcept { return omega_; }
    double theta() const noexcept { return theta_; }
    double b_minus() const noexcept { return b_minus_; }
    TilingVariant variant() const noexcept { return tiles_ == 0 ? TilingVariant::Base : TilingVariant::Tiled; }
    int tiles() const noexcept { return tiles_; }
    int tile_variant() const noexcept { return j_; }

    /// Base ψ on [0,1], zero outside.
    double base(double x) const noexcept;
    /// Profile on [0,1] for the configured variant.
    double operator()(double x) const noexcept;
    /// Exponential decay rate of the separable solution.
    double decay_rate() const noexcept;

    GridFunction sample(const Domain& d) const;

private:
    SeparableProfile(double a, double b_minus, int tiles, int j);

    double a_;
    double k_;
    double omega_;
    double theta_;
    double b_minus_;
    int tiles_;
    int j_;
};

SeparableProfile separable_profile(double theta, double b_minus = 1.0, int tiles = 0,
                                   int variant = 0);

/// e^{-rate·t} profile(x).
double separable_solution(const SeparableProfile& p, double x, double t);

/// Closed form of ∫₀¹ ψ(x) sin(πx) dx with k = a/(1-a).
double overlap_I(double a);

struct Envelopes {
    GridFunction upper;
    GridFunction lower;
};

/// (C₁e^{-λ₁t}φ, -C₂e^{-λ₂t}φ).
Envelopes decay_envelopes(const Parameters& p, const EigenPair& e, double c1, double c2, double t);

}  // namespace plastiflow
