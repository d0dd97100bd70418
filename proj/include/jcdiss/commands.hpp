// commands.hpp: subcommands of the jc_dissipator driver.
//
// Exit codes: 0 success, 2 configuration or parameter error, 3 runtime abort.

#pragma once

#include "jcdiss/report_io.hpp"
#include "jcdiss/scenario.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace jcdiss {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

struct CommandOptions {
    std::vector<std::string> configs;
    std::optional<std::string> out_dir;  // overrides output.directory
    std::optional<long long> seed;       // accepted for interface stability; dynamics are deterministic
    std::optional<std::string> export_generator;
    bool verbose{false};
};

// Leakage out of the truncated space is flagged above this top-manifold population.
inline constexpr double kLeakageThreshold = 1e-3;

std::vector<std::string> sweep_metrics();

// Each returns an exit code; exceptions are mapped by run_cli.
int run_simulate(const CommandOptions& opt, std::ostream& out, std::ostream& err);
int run_compare(const CommandOptions& opt, std::ostream& out, std::ostream& err);
int run_sweep(const CommandOptions& opt, std::ostream& out, std::ostream& err);
int run_fig1(const CommandOptions& opt, std::ostream& out, std::ostream& err);
int run_lindblad_check(const CommandOptions& opt, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

}  // namespace jcdiss
