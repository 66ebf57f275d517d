#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "plastiflow/dpp.hpp"

namespace plastiflow {

/// mt19937_64 with a fixed bits-to-double map, so draws are portable across libstdc++/libc++.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    /// Uniform on the open interval (0, 1).
    double uniform() noexcept { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53; }

private:
    std::mt19937_64 engine_;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Uniform point of the open ball B_ε(x) in dimension 1 or 2.
Point sample_ball(Point x, int dim, double epsilon, Rng& rng);

/// Game constant actually in force: cfg.C, or c_of_N(dim) when unset.
double effective_C(const GameConfig& cfg);

enum class StrategyKind { ConstantB, EndpointBySign, TableGreedy };

/// Clock rule b(x, t) of the minimizing player; the table must outlive the strategy.
class Strategy {
public:
    static Strategy constant(double b) { return Strategy(StrategyKind::ConstantB, b, nullptr); }
    static Strategy endpoint_by_sign(const DppTable& table)
    {
        return Strategy(StrategyKind::EndpointBySign, 0.0, &table);
    }
    static Strategy table_greedy(const DppTable& table)
    {
        return Strategy(StrategyKind::TableGreedy, 0.0, &table);
    }

    StrategyKind kind() const noexcept { return kind_; }
    double choose(const GameConfig& cfg, Point x, double t) const;

private:
    Strategy(StrategyKind kind, double b, const DppTable* table) : kind_(kind), b_(b), table_(table) {}

    StrategyKind kind_;
    double b_;
    const DppTable* table_;
};

enum class ExitKind { SpaceExit, TimeExit };

struct State {
    Point x;
    double t = 0.0;
};

struct Trajectory {
    std::vector<State> states;  // only filled when recording; states[0] is the start
    std::size_t tau = 0;
    ExitKind exit = ExitKind::TimeExit;
    Point exit_point;
    double exit_time = 0.0;
    double payoff = 0.0;
    std::uint64_t seed = 0;
};

/// One game from (start, t0); throws StoppingFailure past the step cap.
Trajectory play(const GameConfig& cfg, const Strategy& s, Point start, double t0, Rng& rng,
                bool record = false);

struct ValueEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    double half_width = 0.0;  // 99% normal interval
    std::uint64_t seed = 0;
    std::size_t space_exits = 0;
    std::size_t time_exits = 0;
    std::map<std::size_t, std::size_t> step_histogram;
    std::size_t max_steps = 0;
};

inline constexpr double kZ99 = 2.576;

/// Mean payoff over trajectories seeded seed, seed+1, ...; independent of `threads`.
ValueEstimate estimate_value(const GameConfig& cfg, const Strategy& s, Point start, double t0,
                             std::size_t n, std::uint64_t seed, std::size_t threads = 1);

struct Interval99 {
    double lo = 0.0;
    double hi = 0.0;
};

/// Wilson score interval at 99% for k successes out of n.
Interval99 wilson(std::size_t k, std::size_t n);

struct ExitStats {
    double distance = 0.0;  // start offset from the boundary point
    double p_far = 0.0;     // P(|x_τ - y| >= a)
    double p_slow = 0.0;    // P(τ >= a/(2ε²))
    Interval99 far_ci;
    Interval99 slow_ci;
    std::size_t n = 0;
    double mean_tau = 0.0;
};

/**
 * Spatial exit of the pure random walk started `distance` inside from the
 * boundary point y (1D: y = 0; 2D: y = (0, ly/2)). No time limit.
 */
ExitStats exit_stats(const GameConfig& cfg, double distance, double a, std::size_t n,
                     std::uint64_t seed, std::size_t threads = 1);

struct MartingaleReport {
    std::vector<double> mean_increment;    // E[u(x_{k+1},t_{k+1}) - u(x_k,t_k)] at step k
    std::vector<double> stderr_increment;
    std::vector<std::size_t> count;        // trajectories still alive at step k
    double min_z = 0.0;                    // min over k of mean/stderr (steps with stderr > 0)
    double start_value = 0.0;
    double terminal_mean = 0.0;
    double terminal_stderr = 0.0;
    std::size_t n = 0;
};

MartingaleReport martingale_diagnostic(const DppTable& table, const Strategy& s, Point start,
                                       double t0, std::size_t n, std::uint64_t seed,
                                       std::size_t threads = 1);

}  // namespace plastiflow
