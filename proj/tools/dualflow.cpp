// dualflow run <config>   - flow presets (inverse_desitter, direct_hyperbolic, dual_pair)
// dualflow suite <config> - checking presets (property_suite, duality_check, residual_check)
#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "dualflow/dualflow.h"

namespace {

int run_command(const std::string& path, const std::string& out_dir, bool quiet, bool want_suite) {
    dualflow_config* cfg = nullptr;
    dualflow_status st = dualflow_config_load(path.c_str(), &cfg);
    if (st != DUALFLOW_OK) {
        std::fprintf(stderr, "configuration error in %s:\n%s\n", path.c_str(), dualflow_last_error());
        return DUALFLOW_ERR_CONFIG;
    }
    if (dualflow_config_is_suite(cfg) != (want_suite ? 1 : 0)) {
        std::fprintf(stderr, "preset %s must be started with 'dualflow %s'\n", dualflow_config_preset(cfg),
                     want_suite ? "run" : "suite");
        dualflow_config_free(cfg);
        return DUALFLOW_ERR_CONFIG;
    }
    if (!out_dir.empty()) dualflow_config_set_output(cfg, out_dir.c_str());

    int code = 0;
    st = dualflow_execute(cfg, quiet ? 0 : 1, &code);
    dualflow_config_free(cfg);
    if (st != DUALFLOW_OK) {
        std::fprintf(stderr, "error: %s\n", dualflow_last_error());
        return st == DUALFLOW_ERR_IO || st == DUALFLOW_ERR_STEP_FAILURE ? static_cast<int>(st) : DUALFLOW_ERR_CONFIG;
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dual curvature flows in hyperbolic and de Sitter space"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(dualflow_version()));

    std::string config_path, out_dir;
    bool quiet = false;

    auto* run = app.add_subcommand("run", "integrate a flow preset");
    run->add_option("config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory (overrides 'output')");
    run->add_flag("--quiet", quiet, "no progress output");

    auto* suite = app.add_subcommand("suite", "run a checking preset");
    suite->add_option("config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
    suite->add_option("--out", out_dir, "output directory (overrides 'output')");
    suite->add_flag("--quiet", quiet, "no progress output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : DUALFLOW_ERR_CONFIG;
    }
    return run_command(config_path, out_dir, quiet, suite->parsed());
}
