#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qdisc/correlations.hpp"
#include "qdisc/optimizer.hpp"

namespace qdisc {

/// Exit codes of every command.
enum ExitCode : int { kExitOk = 0, kExitInputError = 1, kExitNotConverged = 2 };

/// Environment variable naming a default JSON config file.
inline constexpr const char *kConfigEnvVar = "QDISC_CONFIG";

struct RunConfig {
    OptimizerConfig optimizer;
    int oracle_resolution = 200;
    bool oracle = false;
    std::string output_path;
    bool emit_plot_script = false;
    std::string plot_script_path;  // defaults to output_path with ".gp"
    double input_tolerance = 1e-6;

    void validate() const;
};

/// Overlays the fields present in a JSON config document onto cfg. Schema:
/// {"optimizer": {"method", "eta", "fd_step", "tol", "max_iter", "restarts", "seed"},
///  "oracle_resolution", "oracle", "output_path", "emit_plot_script", "plot_script_path",
///  "input_tolerance"}
void apply_config_json(RunConfig &cfg, const std::string &text);
void apply_config_file(RunConfig &cfg, const std::string &path);

enum class Family { Werner, MixedBell, BellDiagonal };
Family parse_family(const std::string &name);
std::string to_string(Family f);

struct SweepSpec {
    Family family = Family::Werner;
    double start = 0;
    double end = 1;
    double step = 0.05;
    /// bell_diagonal only: three comma-separated expressions in the swept parameter "a".
    std::string omega;

    void validate() const;
    std::vector<double> parameters() const;
    DensityMatrix state_at(double a) const;
};

/// Evaluates an arithmetic expression (numbers, a, + - * /, parentheses, unary minus).
double evaluate_expression(const std::string &expr, double a);
Vec3 evaluate_omega(const std::string &exprs, double a);

struct SweepRow {
    double param = 0;
    CorrelationReport report;
};

/// Rows are computed concurrently and returned in parameter order.
std::vector<SweepRow> run_sweep(const SweepSpec &spec, const RunConfig &cfg,
                                unsigned threads = 0);

inline constexpr const char *kCsvHeader =
    "param,mutual_information,classical_correlation,discord,min_conditional_entropy,"
    "oracle_min_conditional_entropy,iterations,converged";

/// Fixed 10 decimal places, locale independent.
std::string format_fixed(double v);
std::string format_csv(const std::vector<SweepRow> &rows);
std::string plot_script(const std::string &csv_relative_path, const std::string &png_name,
                        Family family);

std::string report_json(const CorrelationReport &r);
std::string report_text(const CorrelationReport &r);

int cmd_compute(const std::string &state_path, const RunConfig &cfg, std::ostream &out,
                std::ostream &err);
int cmd_sweep(const SweepSpec &spec, const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_oracle(const std::string &state_path, int resolution, double input_tolerance,
               std::ostream &out, std::ostream &err);
int cmd_validate(const std::string &state_path, double tolerance, std::ostream &out,
                 std::ostream &err);

}  // namespace qdisc
