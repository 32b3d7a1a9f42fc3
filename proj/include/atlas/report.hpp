#pragma once

#include <string>
#include <vector>

#include "atlas/problem.hpp"
#include "json.hpp"

namespace atlas {

inline constexpr const char* report_schema = "atlas-report/1";
inline constexpr const char* samples_schema = "atlas-samples/1";

using ordered_json = nlohmann::ordered_json;

// Floats with 17 significant digits, keys in insertion order. Non-finite values become strings.
std::string dump_json(const ordered_json& j, int indent = 2);

struct CommandResult {
  ordered_json report;
  std::string csv;          // sample table, empty when the command has none
  std::string svg;          // ray diagram, rays/sectors only
  bool verification_failed = false;
};

struct CommandOptions {
  bool svg = false;
  std::optional<double> tol;
  std::optional<int> jobs;
};

CommandResult cmd_rays(const ProblemSpec& ps, const CommandOptions& opt = {});
CommandResult cmd_sectors(const ProblemSpec& ps, const CommandOptions& opt = {});
CommandResult cmd_solve(const ProblemSpec& ps, const CommandOptions& opt = {});
CommandResult cmd_subdominant(const ProblemSpec& ps, const CommandOptions& opt = {});
CommandResult cmd_verify(const ProblemSpec& ps, const CommandOptions& opt = {});
CommandResult cmd_sweep(const ProblemSpec& ps, const CommandOptions& opt = {});

CommandResult run_command(const std::string& name, const ProblemSpec& ps, const CommandOptions& opt = {});

// Ray diagram on the projected plane; directions on other sheets are annotated with their winding.
std::string rays_svg(const std::vector<RayDirection>& dirs, const std::vector<Sector>& sectors);

}  // namespace atlas
