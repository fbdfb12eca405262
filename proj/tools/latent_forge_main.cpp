#include "latentforge/commands.hpp"
#include "latentforge/config.hpp"
#include "latentforge/errors.hpp"
#include "latentforge/io.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"latent-forge: deep-kernel active learning on synthetic cards and lattice-ferroelectric testbeds"};
    app.require_subcommand(1);

    struct SubArgs {
        std::string config_file;
        std::vector<std::string> sets;
        std::string out_dir;
    };
    std::map<std::string, SubArgs> args;

    for (const std::string& name : latentforge::known_commands()) {
        CLI::App* sub = app.add_subcommand(name);
        SubArgs& a = args[name];
        sub->add_option("--config", a.config_file, "JSON config file");
        sub->add_option("--set", a.sets, "override a config key, dot-path key=value")
            ->take_all();
        sub->add_option("--out", a.out_dir, "output directory")->required();
    }

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    const SubArgs& a = args[command];

    try {
        latentforge::Json file_config = latentforge::Json::object();
        if (!a.config_file.empty()) {
            file_config = latentforge::Json::parse(latentforge::read_text_file(a.config_file),
                                                   nullptr, false);
            if (file_config.is_discarded())
                throw latentforge::ConfigError("config file is not valid JSON: " + a.config_file);
        }
        std::vector<std::pair<std::string, std::string>> overrides;
        for (const std::string& kv : a.sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw latentforge::ConfigError("--set expects key=value, got '" + kv + "'");
            overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
        }
        const latentforge::Json resolved =
            latentforge::resolve_config(latentforge::command_defaults(command), file_config, overrides);
        return latentforge::run_command(command, resolved, a.out_dir);
    } catch (const latentforge::NumericFailure& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const latentforge::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const latentforge::LoadFailure& e) {
        std::cerr << "load error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
