#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "hclab/cli/config.hpp"
#include "hclab/verify.hpp"

namespace hclab::cli {

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_not_converged = 2, exit_check_failed = 3 };

inline constexpr std::string_view suite_names[] = {"all", "identities", "oracles", "asymptotics",
                                                   "inequalities"};
bool is_suite(std::string_view name);

// Checks in a fixed order; a check that throws is recorded as failed with the
// message as its note. Error(configuration) for an unknown selector.
std::vector<CheckRecord> run_suite(const RunConfig& cfg, std::string_view suite);

int cmd_solve(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_verify(const RunConfig& cfg, std::string_view suite, const std::filesystem::path& out,
               std::ostream& log);
int cmd_bench(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

// ./out/<YYYYmmdd-HHMMSS>
std::filesystem::path default_output_dir();

// Entry point of the hclab executable.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace hclab::cli
