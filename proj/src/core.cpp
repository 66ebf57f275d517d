#include "plastiflow/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace plastiflow {

Parameters::Parameters(double b_minus, double b_plus) : b_minus_(b_minus), b_plus_(b_plus)
{
    if (!(b_minus > 0.0) || !(b_plus > 0.0) || !std::isfinite(b_minus) || !std::isfinite(b_plus))
        throw Error(ErrorKind::InvalidParameters, "b_minus and b_plus must be positive and finite");
}

GammaForm gamma_form(const Parameters& p)
{
    return {p.gamma(), 2.0 / (p.b_minus() + p.b_plus())};
}

Parameters from_gamma_form(const GammaForm& g)
{
    return Parameters((1.0 - g.gamma) / g.time_scale, (1.0 + g.gamma) / g.time_scale);
}

namespace {

std::size_t checked_cells(double extent, double h)
{
    if (!(extent > 0.0) || !std::isfinite(extent))
        throw Error(ErrorKind::NonPositiveExtent, "domain extent must be positive");
    if (!(h > 0.0) || !std::isfinite(h))
        throw Error(ErrorKind::NonPositiveExtent, "grid spacing must be positive");
    const double cells = std::round(extent / h);
    if (cells < 2.0 || std::abs(extent - cells * h) > 1e-12 * std::max(1.0, extent)) {
        std::ostringstream msg;
        msg << "h=" << h << " does not tile extent " << extent;
        throw Error(ErrorKind::GridMisaligned, msg.str());
    }
    return static_cast<std::size_t>(cells);
}

}  // namespace

Domain Domain::interval(double length, double h)
{
    const auto cells = checked_cells(length, h);
    return Domain(DomainKind::Interval, length, 0.0, h, cells + 1, 1);
}

Domain Domain::rectangle(double lx, double ly, double h)
{
    const auto cx = checked_cells(lx, h);
    const auto cy = checked_cells(ly, h);
    return Domain(DomainKind::Rectangle, lx, ly, h, cx + 1, cy + 1);
}

Domain build_domain(const DomainSpec& spec)
{
    return spec.kind == DomainKind::Interval ? Domain::interval(spec.lx, spec.h)
                                             : Domain::rectangle(spec.lx, spec.ly, spec.h);
}

bool Domain::on_boundary(std::size_t node) const noexcept
{
    const auto i = ix(node);
    if (i == 0 || i + 1 == nx_)
        return true;
    if (kind_ == DomainKind::Interval)
        return false;
    const auto j = iy(node);
    return j == 0 || j + 1 == ny_;
}

std::size_t Domain::boundary_count() const noexcept
{
    if (kind_ == DomainKind::Interval)
        return 2;
    return 2 * nx_ + 2 * ny_ - 4;
}

double Domain::diameter() const noexcept
{
    return kind_ == DomainKind::Interval ? lx_ : std::hypot(lx_, ly_);
}

bool Domain::contains(double x, double y) const noexcept
{
    if (!(x > 0.0 && x < lx_))
        return false;
    return kind_ == DomainKind::Interval || (y > 0.0 && y < ly_);
}

InflatedGrid Domain::inflate(double radius) const
{
    InflatedGrid g;
    g.pad = static_cast<std::size_t>(std::ceil(radius / h_ - 1e-9)) + 1;
    g.h = h_;
    g.nx = nx_ + 2 * g.pad;
    g.ny = kind_ == DomainKind::Interval ? 1 : ny_ + 2 * g.pad;
    g.x0 = -static_cast<double>(g.pad) * h_;
    g.y0 = kind_ == DomainKind::Interval ? 0.0 : -static_cast<double>(g.pad) * h_;
    g.region.assign(g.size(), NodeRegion::Exterior);
    const std::size_t jpad = kind_ == DomainKind::Interval ? 0 : g.pad;
    for (std::size_t j = 0; j < ny_; ++j)
        for (std::size_t i = 0; i < nx_; ++i)
            g.region[g.index(i + g.pad, j + jpad)] =
                on_boundary(index(i, j)) ? NodeRegion::Boundary : NodeRegion::Interior;
    return g;
}

GridFunction::GridFunction(Domain domain, double fill)
    : domain_(std::move(domain)), values_(domain_.size(), fill)
{
}

GridFunction::GridFunction(Domain domain, std::vector<double> values, std::optional<double> time)
    : domain_(std::move(domain)), values_(std::move(values)), time_(time)
{
    if (values_.size() != domain_.size())
        throw Error(ErrorKind::DomainMismatch, "value count does not match node count");
}

double GridFunction::sup_norm() const noexcept
{
    double s = 0.0;
    for (double v : values_)
        s = std::max(s, std::abs(v));
    return s;
}

double GridFunction::min() const noexcept
{
    return *std::min_element(values_.begin(), values_.end());
}

double GridFunction::max() const noexcept
{
    return *std::max_element(values_.begin(), values_.end());
}

bool GridFunction::all_finite() const noexcept
{
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double GridFunction::boundary_sup() const noexcept
{
    double s = 0.0;
    for (std::size_t n = 0; n < values_.size(); ++n)
        if (domain_.on_boundary(n))
            s = std::max(s, std::abs(values_[n]));
    return s;
}

void GridFunction::zero_boundary() noexcept
{
    for (std::size_t n = 0; n < values_.size(); ++n)
        if (domain_.on_boundary(n))
            values_[n] = 0.0;
}

double GridFunction::interpolate(double x, double y) const noexcept
{
    const double h = domain_.h();
    const double lx = domain_.length_x();
    if (x < 0.0 || x > lx)
        return 0.0;
    const auto nx = domain_.nx();
    const double sx = x / h;
    auto i = static_cast<std::size_t>(sx);
    if (i >= nx - 1)
        i = nx - 2;
    const double fx = sx - static_cast<double>(i);
    if (domain_.kind() == DomainKind::Interval)
        return (1.0 - fx) * values_[i] + fx * values_[i + 1];

    if (y < 0.0 || y > domain_.length_y())
        return 0.0;
    const auto ny = domain_.ny();
    const double sy = y / h;
    auto j = static_cast<std::size_t>(sy);
    if (j >= ny - 1)
        j = ny - 2;
    const double fy = sy - static_cast<double>(j);
    const auto at = [&](std::size_t a, std::size_t b) { return values_[a + nx * b]; };
    return (1.0 - fy) * ((1.0 - fx) * at(i, j) + fx * at(i + 1, j))
           + fy * ((1.0 - fx) * at(i, j + 1) + fx * at(i + 1, j + 1));
}

namespace {

void require_same_domain(const GridFunction& a, const GridFunction& b)
{
    if (!(a.domain() == b.domain()))
        throw Error(ErrorKind::DomainMismatch, "grid functions live on different domains");
}

template <class Op>
GridFunction combine(const GridFunction& a, const GridFunction& b, Op op)
{
    require_same_domain(a, b);
    std::vector<double> v(a.size());
    for (std::size_t n = 0; n < v.size(); ++n)
        v[n] = op(a[n], b[n]);
    return GridFunction(a.domain(), std::move(v), a.time());
}

}  // namespace

GridFunction operator+(const GridFunction& a, const GridFunction& b)
{
    return combine(a, b, [](double x, double y) { return x + y; });
}

GridFunction operator-(const GridFunction& a, const GridFunction& b)
{
    return combine(a, b, [](double x, double y) { return x - y; });
}

GridFunction operator*(double s, const GridFunction& a)
{
    std::vector<double> v(a.values().begin(), a.values().end());
    for (double& x : v)
        x *= s;
    return GridFunction(a.domain(), std::move(v), a.time());
}

double sup_distance(const GridFunction& a, const GridFunction& b)
{
    require_same_domain(a, b);
    double s = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n)
        s = std::max(s, std::abs(a[n] - b[n]));
    return s;
}

double integrate(const GridFunction& u)
{
    const Domain& d = u.domain();
    const auto nx = d.nx();
    const auto ny = d.ny();
    double sum = 0.0;
    for (std::size_t n = 0; n < u.size(); ++n) {
        const auto i = d.ix(n);
        double w = (i == 0 || i + 1 == nx) ? 0.5 : 1.0;
        if (d.kind() == DomainKind::Rectangle) {
            const auto j = d.iy(n);
            w *= (j == 0 || j + 1 == ny) ? 0.5 : 1.0;
        }
        sum += w * u[n];
    }
    const double h = d.h();
    return sum * (d.kind() == DomainKind::Interval ? h : h * h);
}

double laplacian_at(const Domain& d, std::span<const double> u, std::size_t node) noexcept
{
    const double inv_h2 = 1.0 / (d.h() * d.h());
    if (d.kind() == DomainKind::Interval)
        return (u[node - 1] - 2.0 * u[node] + u[node + 1]) * inv_h2;
    const auto nx = d.nx();
    return (u[node - 1] + u[node + 1] + u[node - nx] + u[node + nx] - 4.0 * u[node]) * inv_h2;
}

GridFunction laplacian(const GridFunction& u)
{
    const Domain& d = u.domain();
    GridFunction clamped = u;
    clamped.zero_boundary();
    GridFunction out(d, 0.0);
    out.set_time(u.time());
    const auto src = clamped.values();
    for (std::size_t n = 0; n < d.size(); ++n)
        if (!d.on_boundary(n))
            out[n] = laplacian_at(d, src, n);
    return out;
}

HarmonicSplit harmonic_reduce(const GridFunction& u0, const GridFunction& g, double residual_tol,
                              std::size_t max_sweeps)
{
    require_same_domain(u0, g);
    const Domain& d = u0.domain();
    GridFunction v(d, 0.0);
    for (std::size_t n = 0; n < d.size(); ++n)
        if (d.on_boundary(n))
            v[n] = g[n];

    const double longest = std::max(d.length_x(), d.length_y());
    const double omega = 2.0 / (1.0 + std::sin(std::numbers::pi * d.h() / longest));
    const double stencil = d.kind() == DomainKind::Interval ? 2.0 : 4.0;
    const auto nx = d.nx();

    auto vals = v.values();
    const auto neighbor_mean = [&](std::size_t n) {
        if (d.kind() == DomainKind::Interval)
            return (vals[n - 1] + vals[n + 1]) / stencil;
        return (vals[n - 1] + vals[n + 1] + vals[n - nx] + vals[n + nx]) / stencil;
    };
    const auto residual = [&] {
        double r = 0.0;
        for (std::size_t n = 0; n < d.size(); ++n)
            if (!d.on_boundary(n))
                r = std::max(r, std::abs(neighbor_mean(n) - vals[n]));
        return r;
    };

    HarmonicSplit out{u0, v, 0, 0.0};
    double r = residual();
    std::size_t sweep = 0;
    while (r > residual_tol) {
        if (sweep == max_sweeps)
            throw Error(ErrorKind::NoConvergence, "harmonic relaxation exceeded sweep cap");
        for (std::size_t n = 0; n < d.size(); ++n)
            if (!d.on_boundary(n))
                vals[n] += omega * (neighbor_mean(n) - vals[n]);
        ++sweep;
        r = residual();
    }
    out.v = v;
    out.w0 = u0 - v;
    out.sweeps = sweep;
    out.residual = r;
    return out;
}

std::string_view to_string(SignPattern s)
{
    switch (s) {
    case SignPattern::AllNonneg: return "all-nonneg";
    case SignPattern::AllNonpos: return "all-nonpos";
    case SignPattern::Mixed: return "mixed";
    }
    return "mixed";
}

SignPattern sign_pattern(const GridFunction& u, double tol)
{
    bool pos = false;
    bool neg = false;
    for (double v : u.values()) {
        pos = pos || v > tol;
        neg = neg || v < -tol;
    }
    if (pos && neg)
        return SignPattern::Mixed;
    return neg ? SignPattern::AllNonpos : SignPattern::AllNonneg;
}

SnapshotDiagnostics diagnose(const GridFunction& u, const GridFunction& phi)
{
    SnapshotDiagnostics diag;
    diag.sup_norm = u.sup_norm();
    diag.inf = u.min();
    std::vector<double> prod(u.size());
    for (std::size_t n = 0; n < prod.size(); ++n)
        prod[n] = u[n] * phi[n];
    diag.projection_phi = integrate(GridFunction(u.domain(), std::move(prod)));
    diag.sign = sign_pattern(u);
    return diag;
}

const GridFunction& Solution::at(double t) const
{
    for (std::size_t k = 0; k < times.size(); ++k)
        if (std::abs(times[k] - t) <= 1e-12 * std::max(1.0, std::abs(t)))
            return snapshots[k];
    throw Error(ErrorKind::SnapshotMissing, "no snapshot stored at t=" + format_real(t));
}

std::string format_real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& os, const GridFunction& u)
{
    const Domain& d = u.domain();
    const bool two_d = d.kind() == DomainKind::Rectangle;
    os << (two_d ? "x,y,value\n" : "x,value\n");
    for (std::size_t n = 0; n < u.size(); ++n) {
        os << format_real(d.x(n)) << ',';
        if (two_d)
            os << format_real(d.y(n)) << ',';
        os << format_real(u[n]) << '\n';
    }
}

std::string to_csv(const GridFunction& u)
{
    std::ostringstream os;
    write_csv(os, u);
    return os.str();
}

GridFunction read_csv(std::istream& is, const Domain& d)
{
    std::string line;
    if (!std::getline(is, line))
        throw Error(ErrorKind::ConfigError, "empty grid-function CSV");
    const bool two_d = d.kind() == DomainKind::Rectangle;
    const std::string expected = two_d ? "x,y,value" : "x,value";
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != expected)
        throw Error(ErrorKind::ConfigError, "CSV header must be '" + expected + "'");

    std::vector<double> values;
    values.reserve(d.size());
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r")
            continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(row, cell, ','))
            cells.push_back(std::stod(cell));
        if (cells.size() != (two_d ? 3u : 2u))
            throw Error(ErrorKind::ConfigError, "malformed CSV row: " + line);
        const std::size_t n = values.size();
        if (n >= d.size() || std::abs(cells[0] - d.x(n)) > 1e-9
            || (two_d && std::abs(cells[1] - d.y(n)) > 1e-9))
            throw Error(ErrorKind::DomainMismatch, "CSV node order does not match the domain");
        values.push_back(cells.back());
    }
    if (values.size() != d.size())
        throw Error(ErrorKind::DomainMismatch, "CSV row count does not match node count");
    GridFunction u(d, std::move(values));
    if (!u.all_finite())
        throw Error(ErrorKind::NonFiniteInput, "CSV contains non-finite values");
    return u;
}

}  // namespace plastiflow
