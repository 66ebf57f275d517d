#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "plastiflow/core.hpp"

namespace testing {

using std::numbers::pi;

/// Hand-rolled generator for property tests; fixed seeds keep failures reproducible.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

    /// Random smooth field vanishing on ∂Ω: a few sine modes with random amplitudes.
    plastiflow::GridFunction smooth_zero_bc(const plastiflow::Domain& d, int modes = 4)
    {
        double c[8][8] = {};
        for (int m = 0; m < modes; ++m)
            for (int k = 0; k < modes; ++k)
                c[m][k] = uniform(-1.0, 1.0) / (1.0 + m + k);
        const double lx = d.length_x();
        const double ly = d.length_y();
        const bool one_d = d.kind() == plastiflow::DomainKind::Interval;
        return plastiflow::GridFunction::sample(d, [&](double x, double y) {
            double s = 0.0;
            for (int m = 0; m < modes; ++m) {
                if (one_d) {
                    s += c[m][0] * std::sin((m + 1) * pi * x / lx);
                    continue;
                }
                for (int k = 0; k < modes; ++k)
                    s += c[m][k] * std::sin((m + 1) * pi * x / lx) * std::sin((k + 1) * pi * y / ly);
            }
            return s;
        });
    }

    /// Arbitrary nodal noise, boundary included.
    plastiflow::GridFunction noise(const plastiflow::Domain& d, double scale = 1.0)
    {
        std::vector<double> v(d.size());
        for (double& x : v)
            x = uniform(-scale, scale);
        return plastiflow::GridFunction(d, std::move(v));
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace testing
