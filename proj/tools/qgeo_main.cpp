// qgeo: propagate pure states under time-dependent Hamiltonians and certify
// the transport-speed / acceleration bounds along the run.
//
// Subcommands:
//   simulate <config>                   run one scenario, emit CSV + summaries
//   sweep --seed S --dims .. --count N  randomized uncertainty-bound sweep
//   audit <config> --runtimes T1,..     adiabatic run-time certificates
//   convergence <config>                observed integrator orders
//
// Exit codes: 0 ok, 1 bound violation, 2 configuration error.

#include "qgeo/runner.hpp"
#include "qgeo/scenario.hpp"
#include "qgeo/sweep.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

struct CommonOptions {
    std::string out_dir = "qgeo_out";
    double tolerance = -1.0;  // <0: per-check defaults
    int steps = 0;
    std::string method;
};

void add_common(CLI::App* cmd, CommonOptions& common, bool with_method = true) {
    cmd->add_option("--out-dir", common.out_dir, "output directory")
        ->envname("QGEO_OUT_DIR");
    cmd->add_option("--tolerance", common.tolerance,
                    "normalized-slack gate overriding every per-check default");
    cmd->add_option("--steps", common.steps, "override the number of integration steps");
    if (with_method) {
        cmd->add_option("--method", common.method,
                        "integrator: midpoint-exponential or rk4");
    }
}

qgeo::RunOptions to_run_options(const CommonOptions& common) {
    qgeo::RunOptions options;
    options.out_dir = common.out_dir;
    if (common.tolerance >= 0.0) {
        options.tolerance = common.tolerance;
    }
    if (common.steps > 0) {
        options.steps = common.steps;
    }
    if (!common.method.empty()) {
        options.method = common.method;
    }
    return options;
}

int finish(const qgeo::RunArtifacts& artifacts) {
    if (artifacts.exit_status != 0) {
        std::cerr << "qgeo: " << artifacts.message << "\n";
    }
    std::cout << artifacts.summary_text;
    return artifacts.exit_status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum evolution geometry laboratory"};
    app.require_subcommand(1);

    std::string simulate_config;
    CommonOptions simulate_common;
    CLI::App* simulate = app.add_subcommand("simulate", "run one scenario configuration");
    simulate->add_option("config", simulate_config, "scenario file (text or JSON)")
        ->required();
    add_common(simulate, simulate_common);

    qgeo::SweepOptions sweep_options;
    CommonOptions sweep_common;
    std::vector<std::string> sweep_checks;
    CLI::App* sweep = app.add_subcommand("sweep", "randomized uncertainty-bound sweep");
    sweep->add_option("--seed", sweep_options.seed, "RNG seed")->required();
    sweep->add_option("--dims", sweep_options.dims, "Hilbert-space dimensions")
        ->delimiter(',');
    sweep->add_option("--count", sweep_options.count, "number of instances");
    sweep->add_option("--checks", sweep_checks, "checks to run (eq8, eq9, eq11, sum)")
        ->delimiter(',');
    sweep->add_option("--hbar", sweep_options.hbar, "value of hbar");
    add_common(sweep, sweep_common, /*with_method=*/false);

    std::string audit_config;
    std::vector<double> audit_runtimes;
    CommonOptions audit_common;
    CLI::App* audit = app.add_subcommand("audit", "adiabatic run-time certificates");
    audit->add_option("config", audit_config, "adiabatic scenario file")->required();
    audit->add_option("--runtimes", audit_runtimes, "total run times to audit")
        ->required()
        ->delimiter(',');
    add_common(audit, audit_common);

    std::string convergence_config;
    CommonOptions convergence_common;
    CLI::App* convergence =
        app.add_subcommand("convergence", "observed integrator convergence orders");
    convergence->add_option("config", convergence_config, "scenario file")->required();
    add_common(convergence, convergence_common, /*with_method=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*simulate) {
            return finish(qgeo::run_scenario(qgeo::load_scenario(simulate_config),
                                             to_run_options(simulate_common)));
        }
        if (*sweep) {
            if (!sweep_checks.empty()) {
                sweep_options.checks = sweep_checks;
            }
            return finish(qgeo::run_sweep_command(sweep_options, to_run_options(sweep_common)));
        }
        if (*audit) {
            return finish(qgeo::run_audit_command(qgeo::load_scenario(audit_config),
                                                  audit_runtimes, to_run_options(audit_common)));
        }
        if (*convergence) {
            return finish(qgeo::run_convergence_command(qgeo::load_scenario(convergence_config),
                                                        to_run_options(convergence_common)));
        }
    } catch (const qgeo::ConfigError& e) {
        std::cerr << "qgeo: config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "qgeo: error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
