#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "neel/runner.hpp"

namespace {

int run(const std::string& command, const std::string& config_path,
        const std::string& out_dir, const std::vector<std::string>& overrides,
        bool force_epsilon) {
    neel::RunConfig cfg;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "cannot open config file: " << config_path << "\n";
                return 2;
            }
            std::stringstream buf;
            buf << in.rdbuf();
            cfg = neel::RunConfig::parse(buf.str());
        }
        for (const std::string& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                std::cerr << "override must be key=value: " << kv << "\n";
                return 2;
            }
            cfg.apply_override(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!out_dir.empty()) cfg.output.directory = out_dir;
        cfg.allow_large_epsilon = force_epsilon;
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return neel::run_command(command, cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Oscillating Neel wall simulator and Floquet stability analyzer"};
    app.require_subcommand(1);
    app.fallthrough();  // options may follow the subcommand name

    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    bool force_epsilon = false;
    app.add_option("--config", config_path, "configuration file (key = value lines)");
    app.add_option("--out", out_dir, "output directory (overrides output.directory)");
    app.add_option("--override", overrides, "config override key=value (repeatable)");
    app.add_flag("--force-epsilon", force_epsilon, "lift the |epsilon| <= 0.1 cap");

    for (const char* name : {"static", "evolve", "periodic", "floquet", "spectrum"}) {
        app.add_subcommand(name);
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();
    return run(command, config_path, out_dir, overrides, force_epsilon);
}
