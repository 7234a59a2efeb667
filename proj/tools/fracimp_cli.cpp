#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fracimp/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Picard solver and stability analysis for Caputo equations with integrable impulses"};
    app.require_subcommand(1, 1);
    std::string config_path;
    std::string out_dir = ".";
    double grid_density = 0.0;
    double theta = 0.0;
    bool json_only = false;

    for (const char* name : {"solve", "analyze", "certify", "example51"}) {
        CLI::App* sub = app.add_subcommand(name);
        auto* cfg = sub->add_option("--config", config_path, "problem config file");
        if (std::string(name) != "example51") cfg->required();
        sub->add_option("--out", out_dir, "output directory")->required();
        sub->add_option("--grid-density", grid_density, "grid nodes per unit length");
        sub->add_option("--theta", theta, "Bielecki weight");
        sub->add_flag("--json-only", json_only, "skip CSV output");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : fracimp::kExitConfig;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    std::string text;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "config error: cannot read '" << config_path << "'\n";
            return fracimp::kExitConfig;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    fracimp::RunOptions options;
    if (grid_density != 0.0) options.grid_density = grid_density;
    if (theta != 0.0) options.theta = theta;
    options.json_only = json_only;

    const fracimp::CommandOutput result = fracimp::run_command(command, text, options);
    for (const auto& m : result.messages) {
        (result.exit_code == fracimp::kExitOk ? std::cout : std::cerr) << m << "\n";
    }
    if (!result.artifacts.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        for (const auto& [name, contents] : result.artifacts) {
            const auto path = std::filesystem::path(out_dir) / name;
            std::ofstream out(path, std::ios::binary);
            if (!out) {
                std::cerr << "cannot write " << path << "\n";
                return fracimp::kExitNumerical;
            }
            out << contents;
            std::cout << "wrote " << path.string() << "\n";
        }
    }
    return result.exit_code;
}
