#include "latentforge/config.hpp"

#include "latentforge/io.hpp"

namespace latentforge {

Json parse_override_value(const std::string& raw) {
    Json v = Json::parse(raw, nullptr, false);
    if (v.is_discarded()) return Json(raw);
    return v;
}

void set_json_path(Json& j, const std::string& dotted, const Json& value) {
    Json* cur = &j;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = dotted.find('.', start);
        const std::string key = dotted.substr(start, dot == std::string::npos ? dot : dot - start);
        if (key.empty()) throw ConfigError("empty key segment in '" + dotted + "'");
        if (dot == std::string::npos) {
            (*cur)[key] = value;
            return;
        }
        cur = &(*cur)[key];
        start = dot + 1;
    }
}

namespace {

void check_known_keys(const Json& defaults, const Json& given, const std::string& prefix) {
    if (!given.is_object()) return;
    for (const auto& [key, value] : given.items()) {
        const std::string path = prefix.empty() ? key : prefix + "." + key;
        if (!defaults.is_object() || !defaults.contains(key))
            throw ConfigError("unknown config key '" + path + "'");
        if (value.is_object() && defaults.at(key).is_object())
            check_known_keys(defaults.at(key), value, path);
    }
}

void merge_into(Json& base, const Json& overlay) {
    if (!overlay.is_object()) {
        base = overlay;
        return;
    }
    for (const auto& [key, value] : overlay.items()) {
        if (value.is_object() && base.contains(key) && base.at(key).is_object())
            merge_into(base.at(key), value);
        else
            base[key] = value;
    }
}

} // namespace

Json resolve_config(const Json& defaults, const Json& file_config,
                    const std::vector<std::pair<std::string, std::string>>& overrides) {
    check_known_keys(defaults, file_config, "");
    Json resolved = defaults;
    merge_into(resolved, file_config);

    Json override_doc = Json::object();
    for (const auto& [key, raw] : overrides)
        set_json_path(override_doc, key, parse_override_value(raw));
    check_known_keys(defaults, override_doc, "");
    merge_into(resolved, override_doc);
    return resolved;
}

void write_run_manifest(const std::filesystem::path& out_dir, const std::string& command,
                        const Json& resolved_config, const std::vector<std::string>& artifacts,
                        double wall_clock_seconds) {
    Json manifest;
    manifest["command"] = command;
    manifest["config"] = resolved_config;
    manifest["seed"] = resolved_config.value("seed", std::uint64_t{0});
    manifest["artifacts"] = artifacts;
    manifest["wall_clock_seconds"] = wall_clock_seconds;
    manifest["version"] = kVersion;
    write_text_file(out_dir / "run_manifest.json", manifest.dump(2) + "\n");
}

Json read_run_manifest(const std::filesystem::path& out_dir) {
    const Json manifest =
        Json::parse(read_text_file(out_dir / "run_manifest.json"), nullptr, false);
    if (manifest.is_discarded())
        throw ConfigError("run_manifest.json is not valid JSON in " + out_dir.string());
    return manifest;
}

} // namespace latentforge
