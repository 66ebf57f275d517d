#include "plastiflow/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace plastiflow {

using std::numbers::pi;

EigenPair eigenpair(const Domain& d)
{
    const double lx = d.length_x();
    if (d.kind() == DomainKind::Interval) {
        auto phi = GridFunction::sample(d, [&](double x) { return std::sin(pi * x / lx); });
        phi.zero_boundary();
        const double m = phi.max();
        return {(1.0 / m) * phi, (pi / lx) * (pi / lx)};
    }
    const double ly = d.length_y();
    auto phi = GridFunction::sample(
        d, [&](double x, double y) { return std::sin(pi * x / lx) * std::sin(pi * y / ly); });
    phi.zero_boundary();
    const double m = phi.max();
    return {(1.0 / m) * phi, (pi / lx) * (pi / lx) + (pi / ly) * (pi / ly)};
}

HeatSeries::HeatSeries(const GridFunction& u0, std::size_t modes)
{
    const Domain& d = u0.domain();
    if (d.kind() != DomainKind::Interval)
        throw Error(ErrorKind::UnsupportedDomain, "heat series needs an interval domain");
    length_ = d.length_x();
    const std::size_t cells = d.nx() - 1;
    modes = std::min(modes, cells - 1);
    coeffs_.resize(modes);
    const double h = d.h();
    for (std::size_t n = 1; n <= modes; ++n) {
        // endpoint terms vanish because sin(nπ·0) = sin(nπ) = 0
        double s = 0.0;
        for (std::size_t i = 1; i < cells; ++i)
            s += u0[i] * std::sin(static_cast<double>(n) * pi * d.x(i) / length_);
        coeffs_[n - 1] = 2.0 * h * s / length_;
    }
    for (std::size_t n = modes / 2 + 1; n <= modes; ++n)
        tail_ += std::abs(coeffs_[n - 1]);
}

double HeatSeries::evaluate(double x, double t, double kappa) const
{
    double s = 0.0;
    for (std::size_t n = 1; n <= coeffs_.size(); ++n) {
        const double k = static_cast<double>(n) * pi / length_;
        s += coeffs_[n - 1] * std::exp(-k * k * t / kappa) * std::sin(k * x);
    }
    return s;
}

GridFunction HeatSeries::evaluate_on(const Domain& d, double t, double kappa) const
{
    std::vector<double> decay(coeffs_.size());
    for (std::size_t n = 1; n <= coeffs_.size(); ++n) {
        const double k = static_cast<double>(n) * pi / length_;
        decay[n - 1] = coeffs_[n - 1] * std::exp(-k * k * t / kappa);
    }
    GridFunction out(d, 0.0);
    for (std::size_t i = 1; i + 1 < d.nx(); ++i) {
        double s = 0.0;
        for (std::size_t n = 1; n <= decay.size(); ++n)
            s += decay[n - 1] * std::sin(static_cast<double>(n) * pi * d.x(i) / length_);
        out[i] = s;
    }
    out.set_time(t);
    return out;
}

GridFunction heat_series_solve(const GridFunction& u0, double kappa, double t, std::size_t modes)
{
    if (u0.domain().kind() != DomainKind::Interval)
        throw Error(ErrorKind::UnsupportedDomain, "heat series needs an interval domain");
    return HeatSeries(u0, modes).evaluate_on(u0.domain(), t, kappa);
}

SeparableProfile::SeparableProfile(double a, double b_minus, int tiles, int j)
    : a_(a), k_(a / (1.0 - a)), omega_(0.0), theta_(0.0), b_minus_(b_minus), tiles_(tiles), j_(j)
{
    if (!(a > 0.0 && a < 0.5))
        throw Error(ErrorKind::InvalidTheta, "interface must lie in (0, 1/2), i.e. theta > 1");
    if (!(b_minus > 0.0))
        throw Error(ErrorKind::InvalidParameters, "b_minus must be positive");
    if (tiles < 0 || (tiles > 0 && (j < 1 || j > 4)))
        throw Error(ErrorKind::InvalidTiling, "tiling needs M >= 1 and j in 1..4");
    if (tiles == 1 && j == 4)
        throw Error(ErrorKind::InvalidTiling, "variant j=4 needs M >= 2");
    const double r = (1.0 - a) / a;
    theta_ = r * r;
    omega_ = pi * pi / ((1.0 - a) * (1.0 - a) * b_minus);
}

SeparableProfile SeparableProfile::from_theta(double theta, double b_minus, int tiles, int variant)
{
    if (!(theta > 1.0) || !std::isfinite(theta))
        throw Error(ErrorKind::InvalidTheta, "theta must exceed 1");
    return SeparableProfile(1.0 / (1.0 + std::sqrt(theta)), b_minus, tiles, variant);
}

SeparableProfile SeparableProfile::from_interface(double a, double b_minus, int tiles, int variant)
{
    return SeparableProfile(a, b_minus, tiles, variant);
}

double SeparableProfile::base(double x) const noexcept
{
    if (x <= 0.0 || x >= 1.0)
        return 0.0;
    if (x < a_)
        return -k_ * std::sin(pi * x / a_);
    return std::sin(pi * (x - a_) / (1.0 - a_));
}

double SeparableProfile::operator()(double x) const noexcept
{
    if (x < 0.0 || x > 1.0)
        return 0.0;
    if (tiles_ == 0)
        return base(x);
    const double m = tiles_;
    double s = 0.0;
    switch (j_) {
    case 1: s = m * x; break;
    case 2: s = (m + a_) * x; break;
    case 3: s = m * x + a_; break;
    case 4: s = (m - a_) * x + a_; break;
    }
    // periodic extension Σ_m ψ(s - m); ψ vanishes at the integers
    return base(s - std::floor(s));
}

double SeparableProfile::decay_rate() const noexcept
{
    if (tiles_ == 0)
        return omega_;
    const double m = tiles_;
    switch (j_) {
    case 2: return (m + a_) * (m + a_) * omega_;
    case 4: return (m - a_) * (m - a_) * omega_;
    default: return m * m * omega_;
    }
}

GridFunction SeparableProfile::sample(const Domain& d) const
{
    if (d.kind() != DomainKind::Interval || std::abs(d.length_x() - 1.0) > 1e-12)
        throw Error(ErrorKind::UnsupportedDomain, "separable profiles live on the unit interval");
    auto u = GridFunction::sample(d, [this](double x) { return (*this)(x); });
    u.zero_boundary();
    return u;
}

SeparableProfile separable_profile(double theta, double b_minus, int tiles, int variant)
{
    return SeparableProfile::from_theta(theta, b_minus, tiles, variant);
}

double separable_solution(const SeparableProfile& p, double x, double t)
{
    return std::exp(-p.decay_rate() * t) * p(x);
}

double overlap_I(double a)
{
    return (1.0 - 2.0 * a) * std::sin(a * pi)
           / (a * (2.0 - a) * (1.0 - a) * (1.0 - a) * (1.0 + a) * pi);
}

Envelopes decay_envelopes(const Parameters& p, const EigenPair& e, double c1, double c2, double t)
{
    const double up = c1 * std::exp(-p.lambda1(e.lambda) * t);
    const double lo = -c2 * std::exp(-p.lambda2(e.lambda) * t);
    auto upper = up * e.phi;
    auto lower = lo * e.phi;
    upper.set_time(t);
    lower.set_time(t);
    return {std::move(upper), std::move(lower)};
}

}  // namespace plastiflow
