// merws: simulation laboratory for the multidimensional elephant random walk
// with stops. Subcommands run reproducible experiments and drop their
// artifacts (CSV tables, summary.json, report.json, metadata.json) into the
// output directory.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "merws/errors.hpp"
#include "merws/harness.hpp"

namespace {

void add_common_flags(CLI::App* cmd, merws::ExperimentConfig& config, std::string& regime) {
    cmd->add_option("--dim", config.dim, "walk dimension d (1..63)");
    cmd->add_option("--p", [&config](const CLI::results_t& res) {
        config.p = std::stod(res[0]);
        return true;
    }, "memory probability p");
    cmd->add_option("--r", config.r, "stop probability r in (0,1)");
    cmd->add_option("--regime", regime,
                    "diffusive|critical|superdiffusive: overrides --p by solving "
                    "against p_crit (critical: p = p_crit; diffusive: p_crit/2; "
                    "superdiffusive: midpoint of (p_crit, 1-r))");
    cmd->add_flag("--allow-no-stops", config.allow_no_stops,
                  "admit r = 0 for cross-checks against the classical walk");
    cmd->add_option("--steps", config.steps, "horizon n");
    cmd->add_option("--trajectories", config.trajectories, "ensemble size");
    cmd->add_option("--seed", config.seed, "master seed (or env MERWS_SEED)")
        ->envname("MERWS_SEED");
    cmd->add_option("--checkpoints", config.checkpoint_list,
                    "explicit checkpoint times (ascending)");
    cmd->add_option("--ratio", config.checkpoint_ratio,
                    "geometric checkpoint ratio (default 10^(1/4))");
    cmd->add_option("--out", config.out_dir, "output directory");
    cmd->add_option("--format", config.formats, "output formats (csv, json)");
    cmd->add_option("--workers", config.workers, "worker threads (0 = hardware)");
}

int dispatch(const merws::ExperimentConfig& config) {
    const auto result = merws::run(config);
    for (const auto& r : result.reports) {
        std::cout << (r.pass ? "[PASS] " : (r.qualitative ? "[WARN] " : "[FAIL] ")) << r.name
                  << "  statistic=" << r.statistic << " reference=" << r.reference
                  << " tolerance=" << r.tolerance << '\n';
    }
    return result.exit_status;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multidimensional elephant random walk with stops: simulation lab"};
    app.require_subcommand(1);

    merws::ExperimentConfig config;
    std::string regime;
    std::string experiment;
    std::string config_path;

    auto* run_cmd = app.add_subcommand("run", "run one experiment");
    run_cmd->add_option("--experiment", experiment,
                        "simulate|gram-limit|clt|mixture-clt|superdiffusive|lil|oracle|"
                        "enumerate|ml-table|ml-sample|coefftable")
        ->required();
    run_cmd->add_option("--config", config_path, "JSON config file (overrides flags)");
    add_common_flags(run_cmd, config, regime);

    std::uint64_t va_seed = 42;
    int va_workers = 0;
    std::string va_out = "out/verify-all";
    auto* verify_cmd = app.add_subcommand("verify-all", "run the full verification suite");
    verify_cmd->add_option("--seed", va_seed, "master seed")->envname("MERWS_SEED");
    verify_cmd->add_option("--workers", va_workers, "worker threads (0 = hardware)");
    verify_cmd->add_option("--out", va_out, "output directory");

    // direct aliases for the table-producing experiments
    for (const char* name : {"oracle", "enumerate", "ml-table", "ml-sample", "coefftable"}) {
        auto* cmd = app.add_subcommand(name, std::string("shortcut for run --experiment ") + name);
        add_common_flags(cmd, config, regime);
        cmd->callback([&, name]() { experiment = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify_cmd->parsed()) {
            const auto result = merws::verify_all(va_seed, va_workers, va_out);
            int failed = 0;
            for (const auto& r : result.reports) {
                std::cout << (r.pass ? "[PASS] " : (r.qualitative ? "[WARN] " : "[FAIL] "))
                          << r.name << "  statistic=" << r.statistic
                          << " reference=" << r.reference << '\n';
                if (!r.pass && !r.qualitative) ++failed;
            }
            std::cout << (failed == 0 ? "verify-all: all non-qualitative checks passed\n"
                                      : "verify-all: FAILURES present\n");
            return result.exit_status;
        }
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw merws::IoFailure("cannot read config file " + config_path);
            std::stringstream ss;
            ss << in.rdbuf();
            config = merws::config_from_json(ss.str());
        } else {
            if (!regime.empty()) config.regime = regime;
            config.experiment = experiment;
        }
        return dispatch(config);
    } catch (const merws::ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const merws::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
