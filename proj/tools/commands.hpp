#pragma once

#include <CLI11.hpp>

namespace rnip::cli {

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitUsage = 2;

// Each register_* adds one subcommand whose callback stores its exit code.
void register_prepare(CLI::App& app, int& exit_code, const int& threads, const unsigned long long& seed);
void register_image_commands(CLI::App& app, int& exit_code, const int& threads, const unsigned long long& seed);
void register_nn_commands(CLI::App& app, int& exit_code, const int& threads, const unsigned long long& seed);

}  // namespace rnip::cli
