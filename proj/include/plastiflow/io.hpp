#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "plastiflow/asymptotics.hpp"
#include "plastiflow/core.hpp"
#include "plastiflow/fd_solver.hpp"

namespace plastiflow {

enum class U0Kind { Eigen, Separable, Tiled, Csv, Expression };

struct U0Spec {
    U0Kind kind = U0Kind::Eigen;
    double amplitude = 1.0;         // multiplies the datum; -1 gives -φ
    std::optional<double> theta;    // separable / tiled
    std::optional<double> a;        // alternative to theta
    int M = 1;                      // tiled
    int j = 1;
    std::string path;               // csv
    std::string expr;               // expression over x (and y)
};

struct SolverBlock {
    double h = 0.01;
    double dt = 0.0;  // 0: auto-CFL
    double T = 0.1;
    std::size_t stride = 1;
    std::optional<double> steady_tol;
    double layer_coefficient = 1.0;
};

struct GameBlock {
    double epsilon = 0.05;
    double C = 0.0;  // 0: c_of_N
    std::size_t K = 9;
    std::size_t n = 10'000;
    std::uint64_t seed = 1;
    double x = 0.5;
    double y = 0.5;
    double t = 0.05;
    std::string strategy = "table-greedy";  // table-greedy | endpoint | constant
    std::optional<double> b;                // ConstantB clock; default Cb⁻
    double dt = 0.0;
    double a = 0.2;                         // exit-stats radius
    std::vector<double> distances;          // exit-stats start offsets; default ε·{0.4, 0.2, 0.1}
};

struct AnalysisBlock {
    std::optional<FitWindow> window;
    std::string reference = "phi";  // phi | u0
    double bracket_lo = 2.0;
    double bracket_hi = 8.0;
    double tol_theta = 0.1;
    std::vector<double> thetas;
    ClassifyBudget budget;
    std::string limit = "small-b-minus";
    std::vector<double> values;
    std::vector<double> times;
    double t_min = 0.0;
    double tol = 1e-10;  // obstacle projection
};

struct OutputBlock {
    std::filesystem::path dir = "out";
    std::vector<std::string> formats{"csv", "json", "svg"};
    bool wants(const std::string& f) const;
};

/// Parsed and validated run configuration; unknown keys raise ConfigError.
struct RunConfig {
    nlohmann::json raw;
    DomainKind domain_kind = DomainKind::Interval;
    double lx = 1.0;
    double ly = 1.0;
    U0Spec u0;
    Parameters params{1.0, 4.0};
    SolverBlock solver;
    GameBlock game;
    AnalysisBlock analysis;
    OutputBlock output;

    DomainSpec domain_spec() const { return {domain_kind, lx, ly, solver.h}; }
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Initial datum on d; csv paths resolve relative to `base_dir`.
GridFunction build_u0(const RunConfig& cfg, const Domain& d,
                      const std::filesystem::path& base_dir = {});

/// FNV-1a 64 of the canonical (key-sorted) JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& j);

/// Write via a temporary sibling and rename into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// `t,sup_norm,inf,projection_phi,sign_pattern` rows, one per snapshot.
std::string series_csv(const Solution& sol);

/// Collects artifacts of one command and writes manifest.json last.
class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path dir);
    void write(const std::string& name, const std::string& content);
    void write_manifest(const std::string& command, const nlohmann::json& config, double wall_seconds);
    const std::vector<std::string>& artifacts() const noexcept { return artifacts_; }
    const std::filesystem::path& dir() const noexcept { return dir_; }

private:
    std::filesystem::path dir_;
    std::vector<std::string> artifacts_;
};

inline constexpr const char* kVersion = "0.1.0";

}  // namespace plastiflow
