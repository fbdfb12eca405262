#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace latentforge {

using Json = nlohmann::json;

// Thrown for configuration problems (unknown keys, bad values, missing files);
// the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Parses a --set value: JSON if it parses, bare string otherwise.
Json parse_override_value(const std::string& raw);

// Sets a dot-path ("dkl.steps") inside j, creating objects along the way.
void set_json_path(Json& j, const std::string& dotted, const Json& value);

// defaults, overlaid with the config file, overlaid with --set pairs. Every
// key present in the result must exist in defaults (unknown keys are errors,
// never silently ignored).
Json resolve_config(const Json& defaults, const Json& file_config,
                    const std::vector<std::pair<std::string, std::string>>& overrides);

// Full record of a command invocation; replaying the stored config reproduces
// every numeric artifact bitwise (wall_clock_seconds aside).
void write_run_manifest(const std::filesystem::path& out_dir, const std::string& command,
                        const Json& resolved_config, const std::vector<std::string>& artifacts,
                        double wall_clock_seconds);

Json read_run_manifest(const std::filesystem::path& out_dir);

inline constexpr const char* kVersion = "0.1.0";

} // namespace latentforge
