// SPDX-License-Identifier: Apache-2.0

#ifndef KRDOA_TOOLS_COMMANDS_HPP
#define KRDOA_TOOLS_COMMANDS_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace krdoa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunOptions {
    std::optional<std::filesystem::path> output;  // overrides the config's output
    std::size_t workers = 0;                       // 0: KRDOA_WORKERS or hardware
};

/// Executes a sweep config, writing the CSV and a `.meta.json` sidecar next to it.
int cmd_run(const std::filesystem::path& config_path, const RunOptions& options, std::ostream& out,
            std::ostream& err);

int cmd_list_methods(std::ostream& out);

/// Full command-line entry point: run, single, list-methods.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace krdoa::cli

#endif  // KRDOA_TOOLS_COMMANDS_HPP
