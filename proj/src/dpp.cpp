#include "plastiflow/dpp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace plastiflow {

double c_of_N(int dimension)
{
    if (dimension < 1)
        throw Error(ErrorKind::ConfigError, "dimension must be at least 1");
    // ⨍_{B₁} y₁² = 1/(N+2)
    return 1.0 / (2.0 * (dimension + 2.0));
}

namespace {

// ∫_{x0}^{x} of the piecewise-linear interpolant, given cumulative cell integrals.
double cumulative(std::span<const double> v, std::span<const double> prefix, double x0, double h,
                  double x)
{
    const std::size_t cells = v.size() - 1;
    double q = (x - x0) / h;
    q = std::clamp(q, 0.0, static_cast<double>(cells));
    auto i = static_cast<std::size_t>(q);
    if (i >= cells)
        i = cells - 1;
    const double s = q - static_cast<double>(i);
    return prefix[i] + h * (v[i] * s + 0.5 * (v[i + 1] - v[i]) * s * s);
}

std::vector<double> prefix_integral(std::span<const double> v, double h)
{
    std::vector<double> p(v.size(), 0.0);
    for (std::size_t i = 1; i < v.size(); ++i)
        p[i] = p[i - 1] + 0.5 * h * (v[i - 1] + v[i]);
    return p;
}

}  // namespace

double ball_average_1d(std::span<const double> values, double x0, double h, double center,
                       double radius)
{
    const auto p = prefix_integral(values, h);
    return (cumulative(values, p, x0, h, center + radius) - cumulative(values, p, x0, h, center - radius))
           / (2.0 * radius);
}

DppTable::DppTable(GameConfig cfg, DppVariant variant, double T)
    : cfg_(std::move(cfg)), variant_(variant)
{
    const Domain& d = cfg_.u0.domain();
    const double eps = cfg_.epsilon;
    if (!(eps > 0.0))
        throw Error(ErrorKind::ConfigError, "epsilon must be positive");
    if (cfg_.K < 2)
        throw Error(ErrorKind::ConfigError, "b-grid needs K >= 2");
    if (!(T > 0.0))
        throw Error(ErrorKind::ConfigError, "horizon must be positive");
    if (d.h() > eps / 10.0 * (1.0 + 1e-12))
        throw Error(ErrorKind::ConfigError, "ball quadrature needs h <= epsilon/10");
    if (cfg_.u0.boundary_sup() > 1e-12)
        throw Error(ErrorKind::CompatibilityError, "payoff must vanish on the boundary");
    if (!cfg_.u0.all_finite())
        throw Error(ErrorKind::NonFiniteInput, "payoff has non-finite values");

    const Parameters& p = cfg_.params;
    C_ = cfg_.C > 0.0 ? cfg_.C : c_of_N(d.dim());
    // reversed coefficients turn the game into a maximization
    minimizing_ = p.b_plus() >= p.b_minus();

    const double lo = C_ * p.b_min();
    const double hi = C_ * p.b_max();
    b_grid_.resize(cfg_.K);
    for (std::size_t k = 0; k < cfg_.K; ++k)
        b_grid_[k] = k + 1 == cfg_.K ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(cfg_.K - 1);

    double shortest_lookback = 0.0;
    double longest_lookback = 0.0;
    if (variant_ == DppVariant::Primary) {
        radii_ = {eps};
        shortest_lookback = lo * eps * eps;
        longest_lookback = hi * eps * eps;
    } else {
        radii_ = {eps / std::sqrt(p.b_minus()), eps / std::sqrt(p.b_plus())};
        shortest_lookback = C_ * eps * eps;
        longest_lookback = std::max(C_ * eps * eps, hi * eps * eps);
    }

    double dt = cfg_.dt > 0.0 ? cfg_.dt : shortest_lookback / 4.0;
    if (dt > shortest_lookback * (1.0 + 1e-12))
        throw Error(ErrorKind::ConfigError, "lattice step must not exceed the shortest lookback");
    const double positive = std::ceil(T / dt - 1e-9);
    dt_ = T / positive;
    horizon_ = T;
    negative_slabs_ = static_cast<std::size_t>(std::ceil(longest_lookback / dt_ - 1e-9));

    grid_ = d.inflate(*std::max_element(radii_.begin(), radii_.end()));
    if (d.kind() == DomainKind::Rectangle) {
        for (double r : radii_) {
            Stencil s;
            const auto reach = static_cast<std::ptrdiff_t>(std::ceil(r / grid_.h)) + 1;
            constexpr int sub = 16;
            double total = 0.0;
            for (std::ptrdiff_t dj = -reach; dj <= reach; ++dj)
                for (std::ptrdiff_t di = -reach; di <= reach; ++di) {
                    int inside = 0;
                    for (int a = 0; a < sub; ++a)
                        for (int b = 0; b < sub; ++b) {
                            const double px = (static_cast<double>(di) - 0.5 + (a + 0.5) / sub) * grid_.h;
                            const double py = (static_cast<double>(dj) - 0.5 + (b + 0.5) / sub) * grid_.h;
                            inside += px * px + py * py < r * r ? 1 : 0;
                        }
                    if (inside == 0)
                        continue;
                    s.offsets.push_back(di + static_cast<std::ptrdiff_t>(grid_.nx) * dj);
                    s.weights.push_back(inside);
                    total += inside;
                }
            for (double& w : s.weights)
                w /= total;
            stencils_.emplace_back(r, std::move(s));
        }
    }

    const std::size_t total_slabs = negative_slabs_ + static_cast<std::size_t>(positive) + 1;
    slabs_.assign(total_slabs, std::vector<double>(grid_.size(), 0.0));
    if (d.kind() == DomainKind::Interval)
        prefix_.assign(total_slabs, {});

    std::vector<double> initial(grid_.size(), 0.0);
    for (std::size_t n = 0; n < d.size(); ++n)
        initial[grid_node(n)] = cfg_.u0[n];
    for (int n = first_slab(); n <= 0; ++n) {
        slabs_[slab_offset(n)] = initial;
        if (!prefix_.empty())
            prefix_[slab_offset(n)] = prefix_integral(initial, grid_.h);
    }
    filled_ = 0;
    fill();
}

std::span<const double> DppTable::slab(int n) const
{
    if (n < first_slab() || n > last_slab())
        throw Error(ErrorKind::LookbackUnderflow, "slab index outside the stored lattice");
    return slabs_[slab_offset(n)];
}

std::size_t DppTable::grid_node(std::size_t domain_node) const noexcept
{
    const Domain& d = domain();
    const std::size_t jpad = d.kind() == DomainKind::Interval ? 0 : grid_.pad;
    return grid_.index(d.ix(domain_node) + grid_.pad, d.iy(domain_node) + jpad);
}

void DppTable::locate(double s, int& k, double& w) const
{
    double q = s / dt_;
    const double r = std::round(q);
    if (std::abs(q - r) <= 1e-9)
        q = r;
    k = static_cast<int>(std::floor(q));
    w = q - k;
    if (k < first_slab())
        throw Error(ErrorKind::LookbackUnderflow, "lookback time " + format_real(s) + " below the stored range");
    if (k > filled_ || (k == filled_ && w > 0.0))
        throw Error(ErrorKind::LookbackUnderflow, "time " + format_real(s) + " beyond the filled lattice");
}

double DppTable::node_average(int n, std::size_t node, double radius) const
{
    const auto& v = slabs_[slab_offset(n)];
    if (!prefix_.empty()) {
        const double x = grid_.x0 + static_cast<double>(node) * grid_.h;
        const auto& p = prefix_[slab_offset(n)];
        return (cumulative(v, p, grid_.x0, grid_.h, x + radius)
                - cumulative(v, p, grid_.x0, grid_.h, x - radius))
               / (2.0 * radius);
    }
    for (const auto& [r, s] : stencils_) {
        if (r != radius)
            continue;
        double acc = 0.0;
        for (std::size_t q = 0; q < s.offsets.size(); ++q)
            acc += s.weights[q] * v[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(node) + s.offsets[q])];
        return acc;
    }
    throw Error(ErrorKind::ConfigError, "no 2D stencil for radius " + format_real(radius));
}

double DppTable::slab_average(int n, double x, double y, double radius) const
{
    if (!prefix_.empty()) {
        const auto& v = slabs_[slab_offset(n)];
        const auto& p = prefix_[slab_offset(n)];
        return (cumulative(v, p, grid_.x0, grid_.h, x + radius)
                - cumulative(v, p, grid_.x0, grid_.h, x - radius))
               / (2.0 * radius);
    }
    // 2D: stencil centred at the nearest lattice node
    const auto i = static_cast<std::size_t>(std::clamp(std::lround((x - grid_.x0) / grid_.h), 0L,
                                                       static_cast<long>(grid_.nx - 1)));
    const auto j = static_cast<std::size_t>(std::clamp(std::lround((y - grid_.y0) / grid_.h), 0L,
                                                       static_cast<long>(grid_.ny - 1)));
    return node_average(n, grid_.index(i, j), radius);
}

double DppTable::time_interpolated_node_average(std::size_t node, double s, double radius) const
{
    int k = 0;
    double w = 0.0;
    locate(s, k, w);
    const double a = node_average(k, node, radius);
    return w == 0.0 ? a : (1.0 - w) * a + w * node_average(k + 1, node, radius);
}

double DppTable::average_at(double x, double y, double s, double radius) const
{
    int k = 0;
    double w = 0.0;
    locate(s, k, w);
    const double a = slab_average(k, x, y, radius);
    return w == 0.0 ? a : (1.0 - w) * a + w * slab_average(k + 1, x, y, radius);
}

double DppTable::ball_average(std::size_t domain_node, double t, double b) const
{
    const double eps = cfg_.epsilon;
    return time_interpolated_node_average(grid_node(domain_node), t - b * eps * eps, eps);
}

double DppTable::dpp_value(double x, double y, double t) const
{
    const double eps = cfg_.epsilon;
    double best = minimizing_ ? std::numeric_limits<double>::infinity()
                              : -std::numeric_limits<double>::infinity();
    const auto take = [&](double v) { best = minimizing_ ? std::min(best, v) : std::max(best, v); };
    if (variant_ == DppVariant::Primary) {
        for (double b : b_grid_)
            take(average_at(x, y, t - b * eps * eps, eps));
    } else {
        for (double r : radii_)
            take(average_at(x, y, t - C_ * eps * eps, r));
    }
    return best;
}

double DppTable::best_b(double x, double y, double t) const
{
    const double eps = cfg_.epsilon;
    double best = 0.0;
    double best_b = b_grid_.front();
    bool first = true;
    for (double b : b_grid_) {
        const double v = average_at(x, y, t - b * eps * eps, eps);
        if (first || (minimizing_ ? v < best : v > best)) {
            best = v;
            best_b = b;
            first = false;
        }
    }
    return best_b;
}

void DppTable::fill()
{
    const double eps = cfg_.epsilon;
    std::vector<std::size_t> interior;
    for (std::size_t g = 0; g < grid_.size(); ++g)
        if (grid_.region[g] == NodeRegion::Interior)
            interior.push_back(g);

    for (int n = 1; n <= last_slab(); ++n) {
        const double t = slab_time(n);
        auto& out = slabs_[slab_offset(n)];
        for (std::size_t g : interior) {
            double best = minimizing_ ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity();
            if (variant_ == DppVariant::Primary) {
                for (double b : b_grid_) {
                    const double v = time_interpolated_node_average(g, t - b * eps * eps, eps);
                    best = minimizing_ ? std::min(best, v) : std::max(best, v);
                }
            } else {
                for (double r : radii_) {
                    const double v = time_interpolated_node_average(g, t - C_ * eps * eps, r);
                    best = minimizing_ ? std::min(best, v) : std::max(best, v);
                }
            }
            out[g] = best;
        }
        if (!prefix_.empty())
            prefix_[slab_offset(n)] = prefix_integral(out, grid_.h);
        filled_ = n;
    }
}

double DppTable::value(std::size_t domain_node, int slab_index) const
{
    return slab(slab_index)[grid_node(domain_node)];
}

GridFunction DppTable::slice(int slab_index) const
{
    const Domain& d = domain();
    const auto s = slab(slab_index);
    std::vector<double> v(d.size());
    for (std::size_t n = 0; n < d.size(); ++n)
        v[n] = s[grid_node(n)];
    return GridFunction(d, std::move(v), slab_time(slab_index));
}

double DppTable::value_at(double x, double y, double t) const
{
    const Domain& d = domain();
    if (!d.contains(x, y))
        return 0.0;
    if (t <= 0.0)
        return cfg_.u0.interpolate(x, y);
    int k = 0;
    double w = 0.0;
    locate(t, k, w);
    const auto point = [&](int n) {
        GridFunction g = slice(n);
        return g.interpolate(x, y);
    };
    if (d.kind() == DomainKind::Interval) {
        // fast path: direct linear interpolation on the slab
        const auto at = [&](int n) {
            const auto& v = slabs_[slab_offset(n)];
            const double q = (x - grid_.x0) / grid_.h;
            auto i = static_cast<std::size_t>(q);
            if (i >= grid_.nx - 1)
                i = grid_.nx - 2;
            const double f = q - static_cast<double>(i);
            return (1.0 - f) * v[i] + f * v[i + 1];
        };
        const double a = at(k);
        return w == 0.0 ? a : (1.0 - w) * a + w * at(k + 1);
    }
    const double a = point(k);
    return w == 0.0 ? a : (1.0 - w) * a + w * point(k + 1);
}

double DppTable::sup_norm() const
{
    double s = 0.0;
    for (const auto& slab : slabs_)
        for (double v : slab)
            s = std::max(s, std::abs(v));
    return s;
}

DppTable dpp_solve(const GameConfig& cfg, double T)
{
    return DppTable(cfg, DppVariant::Primary, T);
}

DppTable dpp_alternate_solve(const GameConfig& cfg, double T)
{
    return DppTable(cfg, DppVariant::Alternate, T);
}

DppInvariants check_invariants(const DppTable& table)
{
    DppInvariants inv;
    const auto& grid = table.grid();
    const auto& u0 = table.config().u0;
    const double bound = u0.sup_norm();
    inv.sup_norm = table.sup_norm();
    inv.sup_bound = inv.sup_norm <= bound * (1.0 + 1e-12);

    std::vector<double> initial(grid.size(), 0.0);
    for (std::size_t n = 0; n < u0.size(); ++n)
        initial[table.grid_node(n)] = u0[n];

    const Domain& d = table.domain();
    for (int n = table.first_slab(); n <= table.last_slab(); ++n) {
        const auto s = table.slab(n);
        if (n <= 0) {
            inv.initial_data = inv.initial_data && std::equal(s.begin(), s.end(), initial.begin());
            continue;
        }
        for (std::size_t g = 0; g < grid.size(); ++g)
            if (grid.region[g] != NodeRegion::Interior && s[g] != 0.0)
                inv.exterior_zero = false;
        const double t = table.slab_time(n);
        for (std::size_t node = 0; node < d.size(); ++node) {
            if (d.on_boundary(node))
                continue;
            const double re = table.dpp_value(d.x(node), d.y(node), t);
            inv.dpp_residual = std::max(inv.dpp_residual, std::abs(re - s[table.grid_node(node)]));
        }
    }
    return inv;
}

double table_distance(const DppTable& a, const DppTable& b)
{
    if (!(a.domain() == b.domain()) || a.grid().size() != b.grid().size()
        || std::abs(a.dt() - b.dt()) > 1e-15 || a.last_slab() != b.last_slab())
        throw Error(ErrorKind::DomainMismatch, "tables live on different lattices");
    double dist = 0.0;
    const Domain& d = a.domain();
    for (int n = 0; n <= a.last_slab(); ++n)
        for (std::size_t node = 0; node < d.size(); ++node)
            dist = std::max(dist, std::abs(a.value(node, n) - b.value(node, n)));
    return dist;
}

double distance_to(const DppTable& table, const GridFunction& u)
{
    const Domain& d = table.domain();
    const int last = table.last_slab();
    double dist = 0.0;
    for (std::size_t node = 0; node < d.size(); ++node)
        dist = std::max(dist, std::abs(table.value(node, last) - u.interpolate(d.x(node), d.y(node))));
    return dist;
}

}  // namespace plastiflow
