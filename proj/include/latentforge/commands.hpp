#pragma once

#include "latentforge/config.hpp"
#include "latentforge/dataset.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace latentforge {

std::vector<std::string> known_commands();

// Fully materialized defaults for a command (the schema: unknown keys in a
// user config are rejected against this document).
Json command_defaults(const std::string& command);

// Runs a command with a resolved config, writes its artifacts plus
// run_manifest.json under out_dir. Returns the process exit code.
int run_command(const std::string& command, const Json& config,
                const std::filesystem::path& out_dir);

// Target vector selection shared by the train/bo commands. kind is one of
// one_vs_rest / ordinal_suit / rotation / shear (cards meta columns) or
// column (named dataset target vector).
struct ResolvedTarget {
    std::vector<double> values;
    std::string name;
};
ResolvedTarget resolve_target(const DatasetContainer& ds, const Json& target_cfg);

} // namespace latentforge
