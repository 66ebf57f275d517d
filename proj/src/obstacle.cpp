#include "plastiflow/obstacle.hpp"

#include <algorithm>
#include <cmath>

namespace plastiflow {

ObstacleResult project_initial(const GridFunction& u0, double tol, SweepOrder order,
                               std::size_t max_sweeps)
{
    if (!u0.all_finite())
        throw Error(ErrorKind::NonFiniteInput, "obstacle datum has non-finite values");
    if (!(tol > 0.0))
        throw Error(ErrorKind::ConfigError, "tolerance must be positive");

    const Domain& d = u0.domain();
    const auto nx = d.nx();
    const bool one_d = d.kind() == DomainKind::Interval;

    std::vector<std::size_t> interior;
    GridFunction w = u0;
    for (std::size_t n = 0; n < d.size(); ++n) {
        if (d.on_boundary(n))
            w[n] = std::min(u0[n], 0.0);
        else
            interior.push_back(n);
    }

    auto cur = w.values();
    std::vector<double> prev(cur.begin(), cur.end());
    const auto mean = [&](std::span<const double> v, std::size_t n) {
        if (one_d)
            return 0.5 * (v[n - 1] + v[n + 1]);
        return 0.25 * (v[n - 1] + v[n + 1] + v[n - nx] + v[n + nx]);
    };

    ObstacleResult out{w, {}, 0, 0.0};
    double last_change = 0.0;
    for (std::size_t sweep = 1;; ++sweep) {
        if (sweep > max_sweeps)
            throw Error(ErrorKind::NoConvergence, "obstacle iteration exceeded sweep cap");
        double change = 0.0;
        if (order == SweepOrder::GaussSeidel) {
            for (std::size_t n : interior) {
                const double next = std::min(u0[n], mean(cur, n));
                change = std::max(change, cur[n] - next);
                cur[n] = next;
            }
        } else {
            std::copy(cur.begin(), cur.end(), prev.begin());
            for (std::size_t n : interior) {
                const double next = std::min(u0[n], mean(prev, n));
                change = std::max(change, prev[n] - next);
                cur[n] = next;
            }
        }
        out.iterations = sweep;
        out.final_change = change;
        if (change <= tol) {
            if (change == 0.0)
                break;
            const double rho = last_change > 0.0 ? std::min(change / last_change, 1.0 - 1e-15) : 1.0;
            if (change * rho / (1.0 - rho) <= tol)
                break;
        }
        last_change = change;
    }

    out.tilde_u0 = w;
    out.contact.assign(d.size(), 0);
    for (std::size_t n = 0; n < d.size(); ++n)
        out.contact[n] = std::abs(w[n] - u0[n]) <= std::max(tol, 1e-10) ? 1 : 0;
    return out;
}

GridFunction convex_envelope_1d(const GridFunction& u0)
{
    const Domain& d = u0.domain();
    if (d.kind() != DomainKind::Interval)
        throw Error(ErrorKind::UnsupportedDomain, "convex envelope oracle is one-dimensional");
    const std::size_t n = d.size();
    std::vector<double> y(u0.values().begin(), u0.values().end());
    y.front() = std::min(y.front(), 0.0);
    y.back() = std::min(y.back(), 0.0);

    // Andrew's monotone chain, lower hull only; points already sorted by x.
    std::vector<std::size_t> hull;
    const auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
        const double xo = d.x(o);
        return (d.x(a) - xo) * (y[b] - y[o]) - (y[a] - y[o]) * (d.x(b) - xo);
    };
    for (std::size_t i = 0; i < n; ++i) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), i) <= 0.0)
            hull.pop_back();
        hull.push_back(i);
    }

    GridFunction out(d, 0.0);
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        const std::size_t i0 = hull[k];
        const std::size_t i1 = hull[k + 1];
        out[i0] = y[i0];
        for (std::size_t i = i0 + 1; i < i1; ++i) {
            const double s = static_cast<double>(i - i0) / static_cast<double>(i1 - i0);
            out[i] = (1.0 - s) * y[i0] + s * y[i1];
        }
    }
    out[hull.back()] = y[hull.back()];
    return out;
}

}  // namespace plastiflow
