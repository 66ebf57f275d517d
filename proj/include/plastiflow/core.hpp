#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plastiflow/error.hpp"

namespace plastiflow {

/**
 * Coefficient pair of b(∂t u)∂t u = Δu.
 *
 * b_minus multiplies ∂t u where the solution decreases, b_plus where it
 * increases. Both must be positive; equal values give the heat equation.
 */
class Parameters {
public:
    Parameters(double b_minus, double b_plus);

    double b_minus() const noexcept { return b_minus_; }
    double b_plus() const noexcept { return b_plus_; }

    double theta() const noexcept { return b_plus_ / b_minus_; }
    double gamma() const noexcept { return (b_plus_ - b_minus_) / (b_plus_ + b_minus_); }
    double b_min() const noexcept { return b_minus_ < b_plus_ ? b_minus_ : b_plus_; }
    double b_max() const noexcept { return b_minus_ < b_plus_ ? b_plus_ : b_minus_; }

    /// Decay rate of the positive separable mode c·e^{-λ₁t}φ.
    double lambda1(double eigenvalue) const noexcept { return eigenvalue / b_minus_; }
    /// Decay rate of the negative separable mode -c·e^{-λ₂t}φ.
    double lambda2(double eigenvalue) const noexcept { return eigenvalue / b_plus_; }

    bool operator==(const Parameters&) const = default;

private:
    double b_minus_;
    double b_plus_;
};

struct GammaForm {
    double gamma;
    double time_scale;  // τ = time_scale · t
};

/// ∂t u + γ|∂t u| = Δu after the time change τ = 2t/(b⁻+b⁺).
GammaForm gamma_form(const Parameters& p);
Parameters from_gamma_form(const GammaForm& g);

enum class DomainKind { Interval, Rectangle };

struct DomainSpec {
    DomainKind kind = DomainKind::Interval;
    double lx = 1.0;
    double ly = 1.0;  // ignored for intervals
    double h = 0.01;
};

/// Node classification of a grid extended past ∂Ω.
enum class NodeRegion : std::uint8_t { Interior, Boundary, Exterior };

/**
 * Grid padded with `pad` layers of nodes on every side of the base grid.
 *
 * Boundary and exterior nodes together form the strip D_ε used by the
 * game solvers; interior nodes are exactly the open domain.
 */
struct InflatedGrid {
    std::size_t pad = 0;
    std::size_t nx = 0;
    std::size_t ny = 1;
    double h = 0.0;
    double x0 = 0.0;  // coordinate of node (0, 0)
    double y0 = 0.0;
    std::vector<NodeRegion> region;

    std::size_t size() const noexcept { return nx * ny; }
    std::size_t index(std::size_t i, std::size_t j) const noexcept { return i + nx * j; }
};

/// Uniform interval or rectangle grid, x-fastest lexicographic node order.
class Domain {
public:
    static Domain interval(double length, double h);
    static Domain rectangle(double lx, double ly, double h);

    DomainKind kind() const noexcept { return kind_; }
    int dim() const noexcept { return kind_ == DomainKind::Interval ? 1 : 2; }
    double h() const noexcept { return h_; }
    double length_x() const noexcept { return lx_; }
    double length_y() const noexcept { return ly_; }
    std::size_t nx() const noexcept { return nx_; }
    std::size_t ny() const noexcept { return ny_; }
    std::size_t size() const noexcept { return nx_ * ny_; }

    std::size_t index(std::size_t i, std::size_t j = 0) const noexcept { return i + nx_ * j; }
    std::size_t ix(std::size_t node) const noexcept { return node % nx_; }
    std::size_t iy(std::size_t node) const noexcept { return node / nx_; }
    double x(std::size_t node) const noexcept { return static_cast<double>(ix(node)) * h_; }
    double y(std::size_t node) const noexcept { return static_cast<double>(iy(node)) * h_; }
    bool on_boundary(std::size_t node) const noexcept;
    std::size_t boundary_count() const noexcept;

    /// Diameter of the closed domain.
    double diameter() const noexcept;
    /// Whether the point lies in the open domain.
    bool contains(double x, double y = 0.0) const noexcept;

    /// Extend by enough node layers to cover every point within `radius` of Ω.
    InflatedGrid inflate(double radius) const;

    DomainSpec spec() const noexcept { return {kind_, lx_, ly_, h_}; }

    bool operator==(const Domain&) const = default;

private:
    Domain(DomainKind kind, double lx, double ly, double h, std::size_t nx, std::size_t ny)
        : kind_(kind), lx_(lx), ly_(ly), h_(h), nx_(nx), ny_(ny)
    {
    }

    DomainKind kind_;
    double lx_;
    double ly_;
    double h_;
    std::size_t nx_;
    std::size_t ny_;
};

Domain build_domain(const DomainSpec& spec);

/// Nodal values on a Domain with an optional time stamp.
class GridFunction {
public:
    explicit GridFunction(Domain domain, double fill = 0.0);
    GridFunction(Domain domain, std::vector<double> values, std::optional<double> time = {});

    template <class F>
    static GridFunction sample(const Domain& d, F&& f)
    {
        std::vector<double> v(d.size());
        for (std::size_t n = 0; n < d.size(); ++n) {
            if constexpr (requires { f(0.0, 0.0); })
                v[n] = f(d.x(n), d.y(n));
            else
                v[n] = f(d.x(n));
        }
        return GridFunction(d, std::move(v));
    }

    const Domain& domain() const noexcept { return domain_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    double operator[](std::size_t n) const noexcept { return values_[n]; }
    double& operator[](std::size_t n) noexcept { return values_[n]; }

    std::optional<double> time() const noexcept { return time_; }
    void set_time(std::optional<double> t) { time_ = t; }

    double sup_norm() const noexcept;
    double min() const noexcept;
    double max() const noexcept;
    bool all_finite() const noexcept;
    /// Largest absolute value on boundary nodes.
    double boundary_sup() const noexcept;
    void zero_boundary() noexcept;

    /// Piecewise-linear (1D) or bilinear (2D) interpolant; zero outside the closed domain.
    double interpolate(double x, double y = 0.0) const noexcept;

private:
    Domain domain_;
    std::vector<double> values_;
    std::optional<double> time_;
};

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(double s, const GridFunction& a);

/// sup |a - b| over all nodes; throws DomainMismatch.
double sup_distance(const GridFunction& a, const GridFunction& b);

/// Composite trapezoid rule (tensor product in 2D).
double integrate(const GridFunction& u);

/// Central second-difference Laplacian; boundary nodes get 0 and u is read as zero there.
GridFunction laplacian(const GridFunction& u);

/// Δ_h at one interior node, reading u's boundary values as stored.
double laplacian_at(const Domain& d, std::span<const double> u, std::size_t node) noexcept;

struct HarmonicSplit {
    GridFunction w0;  // u0 - v; zero on ∂Ω when g is u0's boundary trace
    GridFunction v;   // discrete harmonic extension of g
    std::size_t sweeps = 0;
    double residual = 0.0;
};

/**
 * Subtract the discrete harmonic extension of the boundary data.
 *
 * `g` supplies values on boundary nodes (interior entries are ignored). The
 * extension is relaxed by SOR until the sup-norm residual of h²Δ_h v / (2d)
 * drops to `residual_tol`.
 */
HarmonicSplit harmonic_reduce(const GridFunction& u0, const GridFunction& g,
                              double residual_tol = 1e-10, std::size_t max_sweeps = 1'000'000);

enum class SignPattern { AllNonneg, AllNonpos, Mixed };
std::string_view to_string(SignPattern s);

/// Sign of u where |u| > tol; values within tol of zero are ignored.
SignPattern sign_pattern(const GridFunction& u, double tol = 0.0);

struct SnapshotDiagnostics {
    double sup_norm = 0.0;
    double inf = 0.0;
    double projection_phi = 0.0;
    SignPattern sign = SignPattern::AllNonneg;
};

SnapshotDiagnostics diagnose(const GridFunction& u, const GridFunction& phi);

/// Time-ordered snapshots of one evolution with per-stamp diagnostics.
struct Solution {
    Parameters params{1.0, 1.0};
    std::vector<double> times;
    std::vector<GridFunction> snapshots;
    std::vector<SnapshotDiagnostics> diagnostics;

    std::size_t size() const noexcept { return times.size(); }
    bool empty() const noexcept { return times.empty(); }
    const GridFunction& back() const { return snapshots.back(); }
    /// Snapshot stored at time t (within 1e-12 relative); throws SnapshotMissing.
    const GridFunction& at(double t) const;
};

// GridFunction CSV: header `x,value` or `x,y,value`, one node per row.
void write_csv(std::ostream& os, const GridFunction& u);
std::string to_csv(const GridFunction& u);
GridFunction read_csv(std::istream& is, const Domain& d);

/// Shortest round-trip-exact representation used in every CSV/JSON artifact.
std::string format_real(double v);

}  // namespace plastiflow
