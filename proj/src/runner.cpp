#include "qdisc/runner.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "qdisc/state_io.hpp"

namespace qdisc {

namespace {

using nlohmann::json;

std::string read_text(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path + "'");
    }
    out << text;
}

/// Recursive-descent parser over a single expression string.
class ExpressionParser {
   public:
    ExpressionParser(const std::string &text, double a) : text_(text), a_(a) {}

    double parse() {
        const double v = sum();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return v;
    }

   private:
    double sum() {
        double v = product();
        for (;;) {
            skip_space();
            if (eat('+')) {
                v += product();
            } else if (eat('-')) {
                v -= product();
            } else {
                return v;
            }
        }
    }

    double product() {
        double v = unary();
        for (;;) {
            skip_space();
            if (eat('*')) {
                v *= unary();
            } else if (eat('/')) {
                v /= unary();
            } else {
                return v;
            }
        }
    }

    double unary() {
        skip_space();
        if (eat('-')) {
            return -unary();
        }
        if (eat('+')) {
            return unary();
        }
        return atom();
    }

    double atom() {
        skip_space();
        if (eat('(')) {
            const double v = sum();
            skip_space();
            if (!eat(')')) {
                fail("missing ')'");
            }
            return v;
        }
        if (eat('a')) {
            return a_;
        }
        double v = 0;
        const char *begin = text_.data() + pos_;
        const auto [ptr, ec] = std::from_chars(begin, text_.data() + text_.size(), v);
        if (ec != std::errc() || ptr == begin) {
            fail("expected a number, 'a' or '('");
        }
        pos_ += static_cast<std::size_t>(ptr - begin);
        return v;
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            pos_++;
        }
    }

    bool eat(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            pos_++;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string &what) const {
        std::ostringstream ss;
        ss << "expression '" << text_ << "': " << what << " at position " << pos_;
        throw Error(ss.str());
    }

    const std::string &text_;
    double a_;
    std::size_t pos_ = 0;
};

json vec3_json(const Vec3 &v) { return json::array({v[0], v[1], v[2]}); }

}  // namespace

void RunConfig::validate() const {
    optimizer.validate();
    if (oracle && oracle_resolution < 8) {
        throw Error("oracle resolution must be at least 8");
    }
    if (!(input_tolerance > 0)) {
        throw Error("input tolerance must be positive");
    }
}

void apply_config_json(RunConfig &cfg, const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw Error(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw Error("config: top level must be an object");
    }
    try {
        if (doc.contains("optimizer")) {
            const auto &o = doc["optimizer"];
            auto &opt = cfg.optimizer;
            if (o.contains("method")) {
                opt.method = parse_method(o["method"].get<std::string>());
            }
            if (o.contains("eta")) {
                opt.eta = o["eta"].get<double>();
            }
            if (o.contains("fd_step")) {
                opt.fd_step = o["fd_step"].get<double>();
            }
            if (o.contains("tol")) {
                opt.tol = o["tol"].get<double>();
            }
            if (o.contains("max_iter")) {
                opt.max_iter = o["max_iter"].get<int>();
            }
            if (o.contains("restarts")) {
                opt.restarts = o["restarts"].get<int>();
            }
            if (o.contains("seed")) {
                opt.seed = o["seed"].get<std::uint64_t>();
            }
        }
        if (doc.contains("oracle_resolution")) {
            cfg.oracle_resolution = doc["oracle_resolution"].get<int>();
        }
        if (doc.contains("oracle")) {
            cfg.oracle = doc["oracle"].get<bool>();
        }
        if (doc.contains("output_path")) {
            cfg.output_path = doc["output_path"].get<std::string>();
        }
        if (doc.contains("emit_plot_script")) {
            cfg.emit_plot_script = doc["emit_plot_script"].get<bool>();
        }
        if (doc.contains("plot_script_path")) {
            cfg.plot_script_path = doc["plot_script_path"].get<std::string>();
        }
        if (doc.contains("input_tolerance")) {
            cfg.input_tolerance = doc["input_tolerance"].get<double>();
        }
    } catch (const json::exception &e) {
        throw Error(std::string("config: ") + e.what());
    }
}

void apply_config_file(RunConfig &cfg, const std::string &path) {
    apply_config_json(cfg, read_text(path));
}

Family parse_family(const std::string &name) {
    if (name == "werner") {
        return Family::Werner;
    }
    if (name == "mixed_bell") {
        return Family::MixedBell;
    }
    if (name == "bell_diagonal") {
        return Family::BellDiagonal;
    }
    throw Error("unknown family '" + name + "' (werner, mixed_bell, bell_diagonal)");
}

std::string to_string(Family f) {
    switch (f) {
        case Family::Werner:
            return "werner";
        case Family::MixedBell:
            return "mixed_bell";
        case Family::BellDiagonal:
            return "bell_diagonal";
    }
    return "unknown";
}

void SweepSpec::validate() const {
    if (!(step > 0)) {
        throw Error("sweep: step must be positive");
    }
    if (!(start <= end)) {
        throw Error("sweep: start must not exceed end");
    }
    if (family == Family::BellDiagonal && omega.empty()) {
        throw Error("sweep: bell_diagonal needs --omega");
    }
}

std::vector<double> SweepSpec::parameters() const {
    validate();
    const auto count = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; i++) {
        double p = start + static_cast<double>(i) * step;
        if (std::abs(p - end) < 1e-9 * step) {
            p = end;
        }
        out.push_back(p);
    }
    return out;
}

DensityMatrix SweepSpec::state_at(double a) const {
    try {
        switch (family) {
            case Family::Werner:
                return werner(a);
            case Family::MixedBell:
                return mixed_bell_family(a);
            case Family::BellDiagonal:
                return bell_diagonal(evaluate_omega(omega, a));
        }
    } catch (const Error &e) {
        std::ostringstream ss;
        ss.precision(17);
        ss << "sweep: invalid state at parameter " << a << ": " << e.what();
        throw Error(ss.str());
    }
    throw Error("sweep: unknown family");
}

double evaluate_expression(const std::string &expr, double a) {
    return ExpressionParser(expr, a).parse();
}

Vec3 evaluate_omega(const std::string &exprs, double a) {
    Vec3 out{};
    std::size_t begin = 0;
    for (int k = 0; k < 3; k++) {
        const auto comma = exprs.find(',', begin);
        if ((k < 2) != (comma != std::string::npos)) {
            throw Error("omega: expected three comma-separated expressions");
        }
        const auto piece = exprs.substr(begin, k < 2 ? comma - begin : std::string::npos);
        out[k] = evaluate_expression(piece, a);
        begin = comma + 1;
    }
    return out;
}

std::vector<SweepRow> run_sweep(const SweepSpec &spec, const RunConfig &cfg, unsigned threads) {
    cfg.validate();
    const auto params = spec.parameters();
    std::vector<DensityMatrix> states;
    states.reserve(params.size());
    for (double a : params) {
        states.push_back(spec.state_at(a));
    }

    std::vector<std::optional<SweepRow>> rows(params.size());
    std::vector<std::string> errors(params.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < params.size(); i = next++) {
            try {
                rows[i] = SweepRow{
                    params[i],
                    quantum_discord(states[i], cfg.optimizer,
                                    cfg.oracle ? std::optional<int>(cfg.oracle_resolution)
                                               : std::nullopt)};
            } catch (const std::exception &e) {
                errors[i] = e.what();
            }
        }
    };
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(params.size()));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; t++) {
            pool.emplace_back(worker);
        }
        worker();
    }

    std::vector<SweepRow> out;
    out.reserve(params.size());
    for (std::size_t i = 0; i < params.size(); i++) {
        if (!rows[i]) {
            std::ostringstream ss;
            ss.precision(17);
            ss << "sweep: parameter " << params[i] << ": " << errors[i];
            throw Error(ss.str());
        }
        out.push_back(std::move(*rows[i]));
    }
    return out;
}

std::string format_fixed(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 10);
    if (ec != std::errc()) {
        throw Error("format_fixed: value out of range");
    }
    std::string s(buf, ptr);
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) {
        s.erase(0, 1);
    }
    return s;
}

std::string format_csv(const std::vector<SweepRow> &rows) {
    std::string out = kCsvHeader;
    out += "\n";
    for (const auto &row : rows) {
        const auto &r = row.report;
        out += format_fixed(row.param) + "," + format_fixed(r.mutual_information) + "," +
               format_fixed(r.classical_correlation) + "," + format_fixed(r.discord) + "," +
               format_fixed(r.min_conditional_entropy) + "," +
               (r.oracle_min_conditional_entropy ? format_fixed(*r.oracle_min_conditional_entropy)
                                                 : std::string()) +
               "," + std::to_string(r.iterations) + "," + (r.converged ? "true" : "false") + "\n";
    }
    return out;
}

std::string plot_script(const std::string &csv_relative_path, const std::string &png_name,
                        Family family) {
    std::ostringstream ss;
    ss << "# gnuplot script: classical correlation and discord vs parameter\n"
       << "set datafile separator ','\n"
       << "set terminal pngcairo size 900,600\n"
       << "set output '" << png_name << "'\n"
       << "set title '" << to_string(family) << "'\n"
       << "set xlabel 'a'\n"
       << "set ylabel 'bits'\n"
       << "set key top left\n"
       << "set grid\n"
       << "set key autotitle columnhead\n"
       << "plot '" << csv_relative_path
       << "' using 1:3 with linespoints pt 7 title 'classical correlation', \\\n"
       << "     '' using 1:4 with linespoints pt 5 title 'quantum discord'\n";
    return ss.str();
}

std::string report_json(const CorrelationReport &r) {
    json stats = {{"iterations", r.iterations},
                  {"restarts", r.restarts},
                  {"final_size", r.final_size},
                  {"converged", r.converged},
                  {"used_bell_fast_path", r.used_bell_fast_path},
                  {"clamped", r.clamped}};
    stats["oracle_gap"] = r.oracle_gap ? json(*r.oracle_gap) : json(nullptr);
    json doc = {
        {"mutual_information", r.mutual_information},
        {"classical_correlation", r.classical_correlation},
        {"discord", r.discord},
        {"min_conditional_entropy", r.min_conditional_entropy},
        {"min_conditional_entropy_nats", r.min_conditional_entropy_nats},
        {"optimal_measurement",
         {{"r", r.optimal_measurement.r()},
          {"y", vec3_json(r.optimal_measurement.y())},
          {"bloch_direction", vec3_json(r.optimal_direction)}}},
        {"optimizer_stats", stats},
    };
    doc["oracle_min_conditional_entropy"] = r.oracle_min_conditional_entropy
                                                ? json(*r.oracle_min_conditional_entropy)
                                                : json(nullptr);
    return doc.dump(2) + "\n";
}

std::string report_text(const CorrelationReport &r) {
    std::ostringstream ss;
    ss.precision(10);
    ss << std::fixed;
    ss << "mutual information       " << r.mutual_information << " bits\n"
       << "classical correlation    " << r.classical_correlation << " bits\n"
       << "quantum discord          " << r.discord << " bits\n"
       << "min conditional entropy  " << r.min_conditional_entropy << " bits ("
       << r.min_conditional_entropy_nats << " nats)\n";
    const auto d = r.optimal_direction;
    ss << "optimal projector axis   (" << d[0] << ", " << d[1] << ", " << d[2] << ")\n";
    if (r.oracle_min_conditional_entropy) {
        ss << "oracle min cond. entropy " << *r.oracle_min_conditional_entropy << " bits (gap "
           << std::scientific << std::setprecision(2) << *r.oracle_gap << std::fixed
           << std::setprecision(10) << ")\n";
    }
    ss << "optimizer                " << r.iterations << " iterations, " << r.restarts
       << " starts, " << (r.converged ? "converged" : "NOT converged")
       << (r.used_bell_fast_path ? ", Bell-diagonal closed form" : "") << "\n";
    return ss.str();
}

int cmd_compute(const std::string &state_path, const RunConfig &cfg, std::ostream &out,
                std::ostream &err) {
    CorrelationReport rep;
    try {
        cfg.validate();
        const auto rho = load_density_matrix(state_path, cfg.input_tolerance);
        rep = quantum_discord(rho, cfg.optimizer,
                              cfg.oracle ? std::optional<int>(cfg.oracle_resolution)
                                         : std::nullopt);
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    out << report_text(rep);
    const auto js = report_json(rep);
    if (cfg.output_path.empty()) {
        out << js;
    } else {
        try {
            write_text(cfg.output_path, js);
        } catch (const Error &e) {
            err << "error: " << e.what() << "\n";
            return kExitInputError;
        }
    }
    if (!rep.converged) {
        err << "warning: optimizer did not converge; best values reported\n";
        return kExitNotConverged;
    }
    return kExitOk;
}

int cmd_sweep(const SweepSpec &spec, const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    std::vector<SweepRow> rows;
    try {
        rows = run_sweep(spec, cfg);
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    const auto csv = format_csv(rows);
    try {
        if (cfg.output_path.empty()) {
            out << csv;
        } else {
            write_text(cfg.output_path, csv);
        }
        if (cfg.emit_plot_script) {
            if (cfg.output_path.empty()) {
                throw Error("a plot script needs --out for the CSV it plots");
            }
            namespace fs = std::filesystem;
            const fs::path csv_path(cfg.output_path);
            fs::path script = cfg.plot_script_path.empty()
                                  ? fs::path(csv_path).replace_extension(".gp")
                                  : fs::path(cfg.plot_script_path);
            const auto base = script.parent_path().empty() ? fs::path(".") : script.parent_path();
            const auto rel = fs::relative(fs::absolute(csv_path), fs::absolute(base));
            const auto png = fs::path(csv_path.filename()).replace_extension(".png");
            write_text(script.string(), plot_script(rel.generic_string(), png.string(),
                                                    spec.family));
        }
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    for (const auto &row : rows) {
        if (!row.report.converged) {
            err << "warning: optimizer did not converge at parameter " << format_fixed(row.param)
                << "\n";
            return kExitNotConverged;
        }
    }
    return kExitOk;
}

int cmd_oracle(const std::string &state_path, int resolution, double input_tolerance,
               std::ostream &out, std::ostream &err) {
    try {
        const auto rho = load_density_matrix(state_path, input_tolerance);
        const auto res = grid_oracle(conditional_entropy_cost(rho), resolution);
        std::ostringstream ss;
        ss.precision(10);
        ss << std::fixed;
        ss << "grid minimum             " << res.grid_min << " bits\n"
           << "refined minimum          " << res.min_value << " bits\n"
           << "optimal projector axis   (" << res.direction[0] << ", " << res.direction[1]
           << ", " << res.direction[2] << ")\n"
           << "evaluations              " << res.evaluations << "\n";
        out << ss.str();
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}

int cmd_validate(const std::string &state_path, double tolerance, std::ostream &out,
                 std::ostream &err) {
    try {
        const auto f = read_state_file(state_path);
        const auto rep = is_density_matrix(f.matrix, tolerance);
        out << "hermiticity defect " << rep.hermiticity_defect << "\n"
            << "trace defect " << rep.trace_defect << "\n"
            << "minimum eigenvalue " << rep.min_eigenvalue << "\n"
            << (rep.valid ? "valid" : "invalid") << " at tolerance " << tolerance << "\n";
        if (!rep.valid) {
            err << "error: not a density matrix: " << rep.describe() << "\n";
            return kExitInputError;
        }
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}

}  // namespace qdisc
