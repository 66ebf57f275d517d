#include <iostream>

#include <CLI11.hpp>

#include "plastiflow/cli.hpp"

int main(int argc, char** argv)
{
    plastiflow::CliOptions opts;
    CLI::App app{"plastiflow: solvers and games for b(u_t)u_t = Laplacian(u)"};
    app.require_subcommand(1);
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    app.add_option("--config", config, "JSON run configuration");
    app.add_option("--out", out, "output directory (overrides output.dir)");
    auto* seed_opt = app.add_option("--seed", seed, "base RNG seed (overrides game.seed)");
    app.add_option("--threads", opts.threads, "worker threads (default PLASTIFLOW_THREADS or all cores)");
    app.add_flag("--quiet", opts.quiet, "suppress progress output");
    app.fallthrough();
    for (const auto& name : plastiflow::command_names())
        app.add_subcommand(name)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : plastiflow::kExitConfig;
    }
    opts.command = app.get_subcommands().front()->get_name();
    if (!config.empty())
        opts.config = config;
    if (!out.empty())
        opts.out = out;
    if (*seed_opt)
        opts.seed = seed;
    return plastiflow::run_command(opts, std::cout, std::cerr);
}
