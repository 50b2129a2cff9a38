// Pipeline orchestration behind the command-line subcommands. Kept as
// library functions so tests can drive them directly.
#pragma once

#include <string>
#include <vector>

#include "netspect/config.hpp"
#include "netspect/eventstudy.hpp"

namespace netspect {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitAlignment = 3;
inline constexpr int kExitNumerical = 4;

struct LoadedInputs {
    ReturnPanel returns;       // cleaned stock returns (factors removed)
    ResidualPanel residuals;
    SectorMap sectors;
    MappedEvents events;
    ControlPanel controls;
    std::vector<std::string> warnings;
    int n_price_dates = 0;
    std::string first_date, last_date;
};

/// Load, validate and align every input per the run configuration.
LoadedInputs load_inputs(const RunConfig& cfg);

int cmd_validate(const RunConfig& cfg, std::ostream& out);
int cmd_run(const RunConfig& cfg, DesignMode mode, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);
int cmd_plot(const RunConfig& cfg, std::ostream& out);
int cmd_synth_demo(const RunConfig& cfg, std::ostream& out);

/// Map an exception to the documented exit code, printing the message.
int exit_code_for(const std::exception& e, std::ostream& err);

}  // namespace netspect
