#include "plastiflow/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "plastiflow/expression.hpp"
#include "plastiflow/oracles.hpp"

namespace plastiflow {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what)
{
    throw Error(ErrorKind::ConfigError, what);
}

const json& object_at(const json& j, const char* key, const std::string& where)
{
    static const json empty = json::object();
    if (!j.contains(key))
        return empty;
    const json& v = j.at(key);
    if (!v.is_object())
        bad(where + "." + key + " must be an object");
    return v;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        const bool ok = std::any_of(allowed.begin(), allowed.end(),
                                    [&](const char* k) { return it.key() == k; });
        if (!ok)
            bad("unknown key '" + it.key() + "' in " + where);
    }
}

double number(const json& j, const char* key, double fallback, const std::string& where)
{
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_number())
        bad(where + "." + key + " must be a number");
    return j.at(key).get<double>();
}

std::optional<double> maybe_number(const json& j, const char* key, const std::string& where)
{
    if (!j.contains(key))
        return std::nullopt;
    return number(j, key, 0.0, where);
}

std::uint64_t unsigned_int(const json& j, const char* key, std::uint64_t fallback, const std::string& where)
{
    if (!j.contains(key))
        return fallback;
    const json& v = j.at(key);
    if (!v.is_number_unsigned())
        bad(where + "." + key + " must be a nonnegative integer");
    return v.get<std::uint64_t>();
}

std::string text(const json& j, const char* key, const std::string& fallback, const std::string& where)
{
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_string())
        bad(where + "." + key + " must be a string");
    return j.at(key).get<std::string>();
}

std::vector<double> numbers(const json& j, const char* key, const std::string& where)
{
    if (!j.contains(key))
        return {};
    const json& v = j.at(key);
    if (!v.is_array())
        bad(where + "." + key + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number())
            bad(where + "." + key + " must be an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

}  // namespace

bool OutputBlock::wants(const std::string& f) const
{
    return std::find(formats.begin(), formats.end(), f) != formats.end();
}

RunConfig parse_config(const json& j)
{
    if (!j.is_object())
        bad("configuration must be a JSON object");
    check_keys(j, {"problem", "parameters", "solver", "game", "analysis", "output"}, "config");
    RunConfig cfg;
    cfg.raw = j;

    const json& problem = object_at(j, "problem", "config");
    check_keys(problem, {"domain", "u0"}, "problem");
    const json& dom = object_at(problem, "domain", "problem");
    check_keys(dom, {"kind", "lx", "ly"}, "problem.domain");
    const std::string kind = text(dom, "kind", "interval", "problem.domain");
    if (kind == "interval")
        cfg.domain_kind = DomainKind::Interval;
    else if (kind == "rectangle")
        cfg.domain_kind = DomainKind::Rectangle;
    else
        bad("problem.domain.kind must be interval or rectangle");
    cfg.lx = number(dom, "lx", 1.0, "problem.domain");
    cfg.ly = number(dom, "ly", 1.0, "problem.domain");

    const json& u0 = object_at(problem, "u0", "problem");
    check_keys(u0, {"kind", "amplitude", "theta", "a", "M", "j", "path", "expr"}, "problem.u0");
    const std::string u0_kind = text(u0, "kind", "eigen", "problem.u0");
    if (u0_kind == "eigen")
        cfg.u0.kind = U0Kind::Eigen;
    else if (u0_kind == "separable")
        cfg.u0.kind = U0Kind::Separable;
    else if (u0_kind == "tiled")
        cfg.u0.kind = U0Kind::Tiled;
    else if (u0_kind == "csv")
        cfg.u0.kind = U0Kind::Csv;
    else if (u0_kind == "expression")
        cfg.u0.kind = U0Kind::Expression;
    else
        bad("problem.u0.kind must be eigen, separable, tiled, csv or expression");
    cfg.u0.amplitude = number(u0, "amplitude", 1.0, "problem.u0");
    cfg.u0.theta = maybe_number(u0, "theta", "problem.u0");
    cfg.u0.a = maybe_number(u0, "a", "problem.u0");
    cfg.u0.M = static_cast<int>(unsigned_int(u0, "M", 1, "problem.u0"));
    cfg.u0.j = static_cast<int>(unsigned_int(u0, "j", 1, "problem.u0"));
    cfg.u0.path = text(u0, "path", "", "problem.u0");
    cfg.u0.expr = text(u0, "expr", "", "problem.u0");
    if (cfg.u0.kind == U0Kind::Csv && cfg.u0.path.empty())
        bad("problem.u0.path is required for csv data");
    if (cfg.u0.kind == U0Kind::Expression) {
        if (cfg.u0.expr.empty())
            bad("problem.u0.expr is required for expression data");
        Expression probe(cfg.u0.expr);  // syntax check
    }

    const json& par = object_at(j, "parameters", "config");
    check_keys(par, {"b_minus", "b_plus"}, "parameters");
    try {
        cfg.params = Parameters(number(par, "b_minus", 1.0, "parameters"),
                                number(par, "b_plus", 4.0, "parameters"));
    } catch (const Error& e) {
        bad(std::string("parameters: ") + e.what());
    }

    const json& sol = object_at(j, "solver", "config");
    check_keys(sol, {"h", "dt", "T", "stride", "steady_tol", "layer_coefficient"}, "solver");
    cfg.solver.h = number(sol, "h", 0.01, "solver");
    cfg.solver.dt = number(sol, "dt", 0.0, "solver");
    cfg.solver.T = number(sol, "T", 0.1, "solver");
    cfg.solver.stride = unsigned_int(sol, "stride", 1, "solver");
    cfg.solver.steady_tol = maybe_number(sol, "steady_tol", "solver");
    cfg.solver.layer_coefficient = number(sol, "layer_coefficient", 1.0, "solver");
    if (!(cfg.solver.h > 0.0))
        bad("solver.h must be positive");
    if (cfg.solver.dt < 0.0 || !(cfg.solver.T > 0.0))
        bad("solver.dt must be >= 0 and solver.T > 0");

    const json& game = object_at(j, "game", "config");
    check_keys(game, {"epsilon", "C", "K", "n", "seed", "x", "y", "t", "strategy", "b", "dt", "a", "distances"},
               "game");
    cfg.game.epsilon = number(game, "epsilon", 0.05, "game");
    cfg.game.C = number(game, "C", 0.0, "game");
    cfg.game.K = unsigned_int(game, "K", 9, "game");
    cfg.game.n = unsigned_int(game, "n", 10'000, "game");
    cfg.game.seed = unsigned_int(game, "seed", 1, "game");
    cfg.game.x = number(game, "x", 0.5, "game");
    cfg.game.y = number(game, "y", 0.5, "game");
    cfg.game.t = number(game, "t", 0.05, "game");
    cfg.game.strategy = text(game, "strategy", "table-greedy", "game");
    cfg.game.b = maybe_number(game, "b", "game");
    cfg.game.dt = number(game, "dt", 0.0, "game");
    cfg.game.a = number(game, "a", 0.2, "game");
    cfg.game.distances = numbers(game, "distances", "game");
    if (cfg.game.strategy != "table-greedy" && cfg.game.strategy != "endpoint"
        && cfg.game.strategy != "constant")
        bad("game.strategy must be table-greedy, endpoint or constant");

    const json& an = object_at(j, "analysis", "config");
    check_keys(an, {"window", "reference", "bracket", "tol_theta", "thetas", "t_max", "sign_tol",
                    "check_every", "retries", "limit", "values", "times", "t_min", "tol"},
               "analysis");
    if (an.contains("window")) {
        const auto w = numbers(an, "window", "analysis");
        if (w.size() != 2)
            bad("analysis.window must be [t1, t2]");
        cfg.analysis.window = FitWindow{w[0], w[1]};
    }
    cfg.analysis.reference = text(an, "reference", "phi", "analysis");
    if (cfg.analysis.reference != "phi" && cfg.analysis.reference != "u0")
        bad("analysis.reference must be phi or u0");
    if (an.contains("bracket")) {
        const auto b = numbers(an, "bracket", "analysis");
        if (b.size() != 2)
            bad("analysis.bracket must be [lo, hi]");
        cfg.analysis.bracket_lo = b[0];
        cfg.analysis.bracket_hi = b[1];
    }
    cfg.analysis.tol_theta = number(an, "tol_theta", 0.1, "analysis");
    cfg.analysis.thetas = numbers(an, "thetas", "analysis");
    cfg.analysis.budget.t_max = number(an, "t_max", 3.0, "analysis");
    cfg.analysis.budget.sign_tol = number(an, "sign_tol", 1e-6, "analysis");
    cfg.analysis.budget.check_every = unsigned_int(an, "check_every", 10, "analysis");
    cfg.analysis.budget.retries = unsigned_int(an, "retries", 2, "analysis");
    cfg.analysis.limit = text(an, "limit", "small-b-minus", "analysis");
    cfg.analysis.values = numbers(an, "values", "analysis");
    cfg.analysis.times = numbers(an, "times", "analysis");
    cfg.analysis.t_min = number(an, "t_min", 0.0, "analysis");
    cfg.analysis.tol = number(an, "tol", 1e-10, "analysis");

    const json& out = object_at(j, "output", "config");
    check_keys(out, {"dir", "formats"}, "output");
    cfg.output.dir = text(out, "dir", "out", "output");
    if (out.contains("formats")) {
        const json& f = out.at("formats");
        if (!f.is_array())
            bad("output.formats must be an array");
        cfg.output.formats.clear();
        for (const auto& e : f) {
            if (!e.is_string())
                bad("output.formats entries must be strings");
            const auto s = e.get<std::string>();
            if (s != "csv" && s != "json" && s != "svg")
                bad("unknown output format '" + s + "'");
            cfg.output.formats.push_back(s);
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        bad("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        bad("malformed JSON in " + path.string() + ": " + e.what());
    }
    return parse_config(j);
}

GridFunction build_u0(const RunConfig& cfg, const Domain& d, const std::filesystem::path& base_dir)
{
    const U0Spec& s = cfg.u0;
    GridFunction u(d, 0.0);
    switch (s.kind) {
    case U0Kind::Eigen:
        u = eigenpair(d).phi;
        break;
    case U0Kind::Separable:
    case U0Kind::Tiled: {
        const int tiles = s.kind == U0Kind::Tiled ? s.M : 0;
        const int variant = s.kind == U0Kind::Tiled ? s.j : 0;
        const double bm = cfg.params.b_minus();
        const SeparableProfile p =
            s.a ? SeparableProfile::from_interface(*s.a, bm, tiles, variant)
                : SeparableProfile::from_theta(s.theta.value_or(cfg.params.theta()), bm, tiles, variant);
        u = p.sample(d);
        break;
    }
    case U0Kind::Csv: {
        std::filesystem::path p = s.path;
        if (p.is_relative() && !base_dir.empty())
            p = base_dir / p;
        std::ifstream in(p);
        if (!in)
            bad("cannot open datum file " + p.string());
        u = read_csv(in, d);
        break;
    }
    case U0Kind::Expression: {
        const Expression e(s.expr);
        u = GridFunction::sample(d, [&](double x, double y) { return e(x, y); });
        break;
    }
    }
    if (s.amplitude != 1.0)
        u = s.amplitude * u;
    if (!u.all_finite())
        throw Error(ErrorKind::NonFiniteInput, "initial datum evaluates to non-finite values");
    return u;
}

std::string config_hash(const json& j)
{
    const std::string s = j.dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorKind::ConfigError, "cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out)
            throw Error(ErrorKind::ConfigError, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string series_csv(const Solution& sol)
{
    std::ostringstream os;
    os << "t,sup_norm,inf,projection_phi,sign_pattern\n";
    for (std::size_t k = 0; k < sol.size(); ++k) {
        const auto& d = sol.diagnostics[k];
        os << format_real(sol.times[k]) << ',' << format_real(d.sup_norm) << ',' << format_real(d.inf)
           << ',' << format_real(d.projection_phi) << ',' << to_string(d.sign) << '\n';
    }
    return os.str();
}

ArtifactWriter::ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir))
{
    std::filesystem::create_directories(dir_);
}

void ArtifactWriter::write(const std::string& name, const std::string& content)
{
    write_atomic(dir_ / name, content);
    artifacts_.push_back(name);
}

void ArtifactWriter::write_manifest(const std::string& command, const json& config, double wall_seconds)
{
    json m;
    m["command"] = command;
    m["config_hash"] = config_hash(config);
    m["version"] = kVersion;
    m["compiler"] = __VERSION__;
    m["wall_time_s"] = wall_seconds;
    m["artifacts"] = artifacts_;
    write_atomic(dir_ / "manifest.json", m.dump(2) + "\n");
}

}  // namespace plastiflow
