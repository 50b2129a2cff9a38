// netspect: announcement effects on market-network connectivity.
//
// Subcommands: validate, run, sweep, plot, synth-demo. Options come from a
// key = value config file; command-line overrides win; the NETSPECT_OUT
// environment variable overrides the configured output directory (flags
// still win over the environment).

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "netspect/cli.hpp"
#include "netspect/errors.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string output_dir;
    std::vector<std::string> overrides;
    int k = -1;
    int threads = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("-c,--config", args.config_path, "config file (key = value lines)");
    cmd->add_option("-o,--out", args.output_dir, "output directory");
    cmd->add_option("-k", args.k, "window horizon k (5..20)");
    cmd->add_option("-j,--threads", args.threads, "worker threads (0 = auto)");
    cmd->add_option("--set", args.overrides, "config override key=value (repeatable)")
        ->take_all();
}

netspect::RunConfig build_config(const CommonArgs& args) {
    netspect::RunConfig cfg;
    if (!args.config_path.empty()) cfg = netspect::parse_config_file(args.config_path);
    if (const char* env = std::getenv("NETSPECT_OUT"); env && *env) cfg.output_dir = env;
    netspect::apply_overrides(cfg, args.overrides);
    if (!args.output_dir.empty()) cfg.output_dir = args.output_dir;
    if (args.k >= 0) cfg.k = args.k;
    if (args.threads >= 0) cfg.threads = args.threads;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"netspect: spectral event-study of market network connectivity"};
    app.require_subcommand(1);

    CommonArgs validate_args, run_args, sweep_args, plot_args, demo_args;
    std::string run_mode = "baseline";

    CLI::App* validate = app.add_subcommand("validate", "load and check all inputs");
    add_common(validate, validate_args);

    CLI::App* run = app.add_subcommand("run", "single-horizon regression");
    add_common(run, run_args);
    run->add_option("-m,--mode", run_mode, "baseline | tone")
        ->check(CLI::IsMember({"baseline", "tone"}));

    CLI::App* sweep = app.add_subcommand("sweep", "regressions across k = k_min..k_max");
    add_common(sweep, sweep_args);

    CLI::App* plot = app.add_subcommand("plot", "SVG charts from sweep results");
    add_common(plot, plot_args);

    CLI::App* demo = app.add_subcommand("synth-demo", "write a synthetic input bundle");
    add_common(demo, demo_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return netspect::cmd_validate(build_config(validate_args), std::cout);
        if (run->parsed()) {
            const auto mode = run_mode == "tone" ? netspect::DesignMode::tone
                                                 : netspect::DesignMode::baseline;
            return netspect::cmd_run(build_config(run_args), mode, std::cout);
        }
        if (sweep->parsed()) return netspect::cmd_sweep(build_config(sweep_args), std::cout);
        if (plot->parsed()) return netspect::cmd_plot(build_config(plot_args), std::cout);
        if (demo->parsed()) return netspect::cmd_synth_demo(build_config(demo_args), std::cout);
    } catch (const std::exception& e) {
        return netspect::exit_code_for(e, std::cerr);
    }
    return 0;
}
