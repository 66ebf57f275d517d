#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "plastiflow/core.hpp"

namespace plastiflow {

/// ½ ⨍_{B₁} y₁² dy, the mean-value constant turning ball averages into c·ε²Δ.
double c_of_N(int dimension);

struct GameConfig {
    Parameters params{1.0, 1.0};
    GridFunction u0;           // payoff on Ω × [-Cb⁺ε², 0]; zero on ∂Ω
    double epsilon = 0.05;
    double C = 0.0;            // 0 selects c_of_N(dim)
    std::size_t K = 9;         // b-grid samples of [Cb⁻, Cb⁺], endpoints included
    double dt = 0.0;           // lattice step; 0 selects (smallest lookback)/4

    explicit GameConfig(GridFunction payoff) : u0(std::move(payoff)) {}
};

enum class DppVariant { Primary, Alternate };

/// Integral mean of the piecewise-linear interpolant over (center-r, center+r).
double ball_average_1d(std::span<const double> values, double x0, double h, double center,
                       double radius);

/**
 * Game values on the inflated grid for t in [-Cb⁺ε², T].
 *
 * Slab n holds t = nδt; slabs with n <= 0 carry the payoff data. Values
 * between slabs are linear in time; in space the 1D table is the
 * piecewise-linear interpolant and the 2D table uses cell-inclusion weights.
 */
class DppTable {
public:
    const GameConfig& config() const noexcept { return cfg_; }
    const Domain& domain() const noexcept { return cfg_.u0.domain(); }
    const InflatedGrid& grid() const noexcept { return grid_; }
    DppVariant variant() const noexcept { return variant_; }

    double C() const noexcept { return C_; }
    double dt() const noexcept { return dt_; }
    double horizon() const noexcept { return horizon_; }
    /// b-grid of clock choices, ascending.
    const std::vector<double>& b_grid() const noexcept { return b_grid_; }
    bool minimizing() const noexcept { return minimizing_; }

    int first_slab() const noexcept { return -static_cast<int>(negative_slabs_); }
    int last_slab() const noexcept { return static_cast<int>(slabs_.size() - negative_slabs_) - 1; }
    double slab_time(int n) const noexcept { return n * dt_; }
    std::span<const double> slab(int n) const;

    /// Inflated-grid index of a domain node.
    std::size_t grid_node(std::size_t domain_node) const noexcept;

    /// Mean over B_ε(x) at time t - bε², x a domain node (the DPP candidate for clock b).
    double ball_average(std::size_t domain_node, double t, double b) const;
    /// Mean over B_radius(x) at absolute time s, for an arbitrary point x.
    double average_at(double x, double y, double s, double radius) const;
    /// Right-hand side of the DPP at (x, t): optimum over the clock choices.
    double dpp_value(double x, double y, double t) const;
    /// Clock choice attaining dpp_value.
    double best_b(double x, double y, double t) const;

    /// Space-time interpolated value with the payoff convention off Ω × (0, T].
    double value_at(double x, double y, double t) const;
    double value(std::size_t domain_node, int slab_index) const;
    GridFunction slice(int slab_index) const;

    double sup_norm() const;

    DppTable(GameConfig cfg, DppVariant variant, double T);

private:
    struct Stencil {
        std::vector<std::ptrdiff_t> offsets;
        std::vector<double> weights;
    };

    void fill();
    double slab_average(int n, double x, double y, double radius) const;
    double node_average(int n, std::size_t node, double radius) const;
    double time_interpolated_node_average(std::size_t node, double s, double radius) const;
    std::size_t slab_offset(int n) const noexcept { return static_cast<std::size_t>(n + static_cast<int>(negative_slabs_)); }
    void locate(double s, int& k, double& w) const;

    GameConfig cfg_;
    DppVariant variant_;
    InflatedGrid grid_;
    double C_ = 0.0;
    double dt_ = 0.0;
    double horizon_ = 0.0;
    bool minimizing_ = true;
    std::vector<double> b_grid_;
    std::vector<double> radii_;
    std::size_t negative_slabs_ = 0;
    std::vector<std::vector<double>> slabs_;
    std::vector<std::vector<double>> prefix_;  // 1D cumulative integrals per slab
    std::vector<std::pair<double, Stencil>> stencils_;  // 2D, one per ball radius
    int filled_ = 0;
};

DppTable dpp_solve(const GameConfig& cfg, double T);
DppTable dpp_alternate_solve(const GameConfig& cfg, double T);

struct DppInvariants {
    bool sup_bound = true;        // ‖u^ε‖∞ <= ‖u0‖∞
    bool exterior_zero = true;    // D_ε slabs with t > 0 vanish
    bool initial_data = true;     // slabs with t <= 0 equal the payoff
    double sup_norm = 0.0;
    double dpp_residual = 0.0;    // max |stored - re-evaluated DPP| on interior nodes
};

DppInvariants check_invariants(const DppTable& table);

/// Max |a - b| over common domain nodes and slabs (same lattice required).
double table_distance(const DppTable& a, const DppTable& b);

/// Max over domain nodes of |table(x, T) - u(x)| at the table's final slab.
double distance_to(const DppTable& table, const GridFunction& u);

}  // namespace plastiflow
