// Command-line front end: compute, sweep, oracle, validate.

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "qdisc/runner.hpp"

namespace {

struct Flags {
    std::string state;
    std::string family = "werner";
    double start = 0;
    double end = 1;
    double step = 0.05;
    std::string omega;
    std::string method;
    double eta = 0;
    double tol = 0;
    int max_iter = 0;
    int restarts = 0;
    std::uint64_t seed = 0;
    int oracle_resolution = 0;
    bool oracle = false;
    std::string out;
    std::string plot_script;
    double tolerance_input = 0;
    std::string config;
};

struct OptimizerOptions {
    CLI::Option *method = nullptr;
    CLI::Option *eta = nullptr;
    CLI::Option *tol = nullptr;
    CLI::Option *max_iter = nullptr;
    CLI::Option *restarts = nullptr;
    CLI::Option *seed = nullptr;
    CLI::Option *oracle_resolution = nullptr;
    CLI::Option *oracle = nullptr;
    CLI::Option *out = nullptr;
    CLI::Option *plot_script = nullptr;
    CLI::Option *tolerance_input = nullptr;
    CLI::Option *config = nullptr;
};

OptimizerOptions add_run_options(CLI::App *cmd, Flags &f, bool sweep) {
    OptimizerOptions o;
    o.method = cmd->add_option("--method", f.method,
                               "gradient_descent | nelder_mead | grid_then_polish");
    o.eta = cmd->add_option("--eta", f.eta, "gradient-descent learning rate");
    o.tol = cmd->add_option("--tol", f.tol, "convergence tolerance");
    o.max_iter = cmd->add_option("--max-iter", f.max_iter, "iterations per start");
    o.restarts = cmd->add_option("--restarts", f.restarts, "random starts");
    o.seed = cmd->add_option("--seed", f.seed, "seed for random starts");
    o.oracle_resolution =
        cmd->add_option("--oracle-resolution", f.oracle_resolution, "grid oracle resolution");
    o.oracle = cmd->add_flag("--oracle", f.oracle, "also run the grid oracle");
    o.out = cmd->add_option("--out", f.out, sweep ? "CSV output path" : "JSON report path");
    if (sweep) {
        o.plot_script = cmd->add_option("--plot-script", f.plot_script,
                                        "write a gnuplot script to this path");
    }
    o.tolerance_input = cmd->add_option("--tolerance-input", f.tolerance_input,
                                        "validity tolerance for input state files");
    o.config = cmd->add_option("--config", f.config,
                               std::string("JSON config file (default: $") +
                                   qdisc::kConfigEnvVar + ")");
    return o;
}

qdisc::RunConfig build_config(const Flags &f, const OptimizerOptions &o) {
    qdisc::RunConfig cfg;
    std::string config_path = f.config;
    if (config_path.empty()) {
        if (const char *env = std::getenv(qdisc::kConfigEnvVar)) {
            config_path = env;
        }
    }
    if (!config_path.empty()) {
        qdisc::apply_config_file(cfg, config_path);
    }
    if (o.method->count()) {
        cfg.optimizer.method = qdisc::parse_method(f.method);
    }
    if (o.eta->count()) {
        cfg.optimizer.eta = f.eta;
    }
    if (o.tol->count()) {
        cfg.optimizer.tol = f.tol;
    }
    if (o.max_iter->count()) {
        cfg.optimizer.max_iter = f.max_iter;
    }
    if (o.restarts->count()) {
        cfg.optimizer.restarts = f.restarts;
    }
    if (o.seed->count()) {
        cfg.optimizer.seed = f.seed;
    }
    if (o.oracle_resolution->count()) {
        cfg.oracle_resolution = f.oracle_resolution;
    }
    if (o.oracle->count()) {
        cfg.oracle = true;
    }
    if (o.out->count()) {
        cfg.output_path = f.out;
    }
    if (o.plot_script && o.plot_script->count()) {
        cfg.emit_plot_script = true;
        cfg.plot_script_path = f.plot_script;
    }
    if (o.tolerance_input->count()) {
        cfg.input_tolerance = f.tolerance_input;
    }
    return cfg;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Classical correlation and quantum discord by measurement optimization"};
    app.require_subcommand(1);
    Flags f;

    auto *compute = app.add_subcommand("compute", "correlation report for a state file");
    compute->add_option("--state", f.state, "JSON density-matrix file")->required();
    const auto compute_opts = add_run_options(compute, f, false);

    auto *sweep = app.add_subcommand("sweep", "sweep a built-in family, write CSV");
    sweep->add_option("--family", f.family, "werner | mixed_bell | bell_diagonal");
    sweep->add_option("--start", f.start, "first parameter");
    sweep->add_option("--end", f.end, "last parameter");
    sweep->add_option("--step", f.step, "parameter step");
    sweep->add_option("--omega", f.omega,
                      "bell_diagonal: three comma-separated expressions in a, e.g. \"-a,-a,-a\"");
    const auto sweep_opts = add_run_options(sweep, f, true);

    auto *oracle = app.add_subcommand("oracle", "brute-force minimum conditional entropy");
    oracle->add_option("--state", f.state, "JSON density-matrix file")->required();
    auto *oracle_res = oracle->add_option("--oracle-resolution", f.oracle_resolution,
                                          "grid resolution per axis (default 200)");
    auto *oracle_tol = oracle->add_option("--tolerance-input", f.tolerance_input,
                                          "validity tolerance for the state file");

    auto *validate = app.add_subcommand("validate", "check a state file");
    validate->add_option("--state", f.state, "JSON density-matrix file")->required();
    auto *validate_tol =
        validate->add_option("--tolerance-input", f.tolerance_input, "validity tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qdisc::kExitInputError;
    }

    try {
        if (compute->parsed()) {
            return qdisc::cmd_compute(f.state, build_config(f, compute_opts), std::cout,
                                      std::cerr);
        }
        if (sweep->parsed()) {
            qdisc::SweepSpec spec;
            spec.family = qdisc::parse_family(f.family);
            spec.start = f.start;
            spec.end = f.end;
            spec.step = f.step;
            spec.omega = f.omega;
            return qdisc::cmd_sweep(spec, build_config(f, sweep_opts), std::cout, std::cerr);
        }
        if (oracle->parsed()) {
            const int res = oracle_res->count() ? f.oracle_resolution : 200;
            const double tol = oracle_tol->count() ? f.tolerance_input : 1e-6;
            return qdisc::cmd_oracle(f.state, res, tol, std::cout, std::cerr);
        }
        if (validate->parsed()) {
            const double tol = validate_tol->count() ? f.tolerance_input : 1e-6;
            return qdisc::cmd_validate(f.state, tol, std::cout, std::cerr);
        }
    } catch (const qdisc::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return qdisc::kExitInputError;
    }
    return qdisc::kExitInputError;
}
