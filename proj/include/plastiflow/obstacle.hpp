#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "plastiflow/core.hpp"

namespace plastiflow {

enum class SweepOrder { GaussSeidel, Jacobi };

struct ObstacleResult {
    GridFunction tilde_u0;
    std::vector<std::uint8_t> contact;  // 1 where tilde_u0 == u0 within tol
    std::size_t iterations = 0;
    double final_change = 0.0;
};

/**
 * Largest discrete-subharmonic minorant of u0 with nonpositive boundary values.
 *
 * Iterates w <- min(u0, mean of neighbours) from w = u0 with the boundary
 * clamped to min(u0, 0). Iterates are pointwise non-increasing. The sweep
 * stops once the last change is below `tol` and the geometric tail bound
 * change·ρ/(1-ρ), with ρ the observed contraction ratio, is below `tol` too.
 */
ObstacleResult project_initial(const GridFunction& u0, double tol = 1e-10,
                               SweepOrder order = SweepOrder::GaussSeidel,
                               std::size_t max_sweeps = 10'000'000);

/// Lower convex hull of the nodal data (endpoints clamped to <= 0), sampled back on the grid.
GridFunction convex_envelope_1d(const GridFunction& u0);

}  // namespace plastiflow
