#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"

#include "mollerscat/config.hpp"

namespace {

// 0 success, 2 config/schema problems, 3 numerical or geometry failures.
int exit_code_for(const moller::EngineError& e) {
    if (dynamic_cast<const moller::ConfigError*>(&e)) return 2;
    return 3;
}

std::string output_dir_override() {
    const char* env = std::getenv("MOLLERSCAT_OUTDIR");
    return env ? env : "";
}

int cmd_run(const std::string& config_path) {
    moller::RunConfig cfg = moller::load_config(config_path);
    auto violations = moller::validate_config(cfg);
    bool hard = false;
    for (const auto& v : violations) {
        bool warning = v.rfind("warning:", 0) == 0;
        std::cerr << config_path << ": " << v << "\n";
        hard = hard || !warning;
    }
    if (hard) throw moller::ConfigError("cli", "invalid config '" + config_path + "'");

    std::string outdir = output_dir_override();
    moller::RunResult r = moller::run_and_export(cfg, outdir);
    std::cout << "wrote " << (outdir.empty() ? cfg.output_dir : outdir) << " ("
              << r.corr.times.size() << " correlation samples, " << r.smat.size()
              << " energies, tau0 = " << r.moller_trace.tau0 << ")\n";
    return 0;
}

int cmd_validate(const std::string& config_path) {
    moller::RunConfig cfg = moller::load_config(config_path);
    auto violations = moller::validate_config(cfg);
    bool hard = false;
    for (const auto& v : violations) {
        std::cout << v << "\n";
        hard = hard || v.rfind("warning:", 0) != 0;
    }
    if (hard) return 2;
    std::cout << "ok\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"S-matrix engine: Moller-operator scattering with classical and "
                 "emulated-quantum correlation backends"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "Execute a run config and export CSV artifacts");
    run->add_option("config", config_path, "JSON run config")->required();

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Dry-run checks on a config");
    validate->add_option("config", validate_path, "JSON run config")->required();

    auto* presets = app.add_subcommand("presets", "Built-in experiment presets");
    presets->require_subcommand(1);
    presets->add_subcommand("list", "List preset names");
    std::string preset_name;
    auto* dump = presets->add_subcommand("dump", "Print a preset as a run config");
    dump->add_option("name", preset_name, "Preset name")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path);
        if (validate->parsed()) return cmd_validate(validate_path);
        if (presets->parsed()) {
            if (presets->get_subcommand("list")->parsed()) {
                for (const auto& n : moller::preset_names()) std::cout << n << "\n";
                return 0;
            }
            std::cout << moller::config_to_json_text(moller::preset(preset_name));
            return 0;
        }
    } catch (const moller::EngineError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
