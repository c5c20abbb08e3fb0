#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "qdisc/runner.hpp"
#include "qdisc/state_io.hpp"

using namespace qdisc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("qdisc_runner_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string &name, const std::string &content) const {
        const auto p = path / name;
        std::ofstream(p) << content;
        return p.string();
    }
};

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_lines(const std::string &s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("expression parser") {
    CHECK(evaluate_expression("a", 0.3) == 0.3);
    CHECK(evaluate_expression("-a", 0.3) == -0.3);
    CHECK(evaluate_expression("1 - 2*a", 0.25) == 0.5);
    CHECK(evaluate_expression("(1 + a) / 2", 0.5) == 0.75);
    CHECK(evaluate_expression("2*(a - (1 - a))", 1) == 2);
    CHECK(evaluate_expression("1e-1 * 3", 0) == doctest::Approx(0.3));
    CHECK(evaluate_expression(" - - 1 ", 0) == 1);
    CHECK_THROWS_WITH_AS(evaluate_expression("1 +", 0), doctest::Contains("expected"), Error);
    CHECK_THROWS_AS(evaluate_expression("(a", 0), Error);
    CHECK_THROWS_AS(evaluate_expression("a b", 0), Error);
    CHECK_THROWS_AS(evaluate_expression("sin(a)", 0), Error);

    const auto w = evaluate_omega("-a, -a, 1 - 2*a", 0.2);
    CHECK(w[0] == -0.2);
    CHECK(w[1] == -0.2);
    CHECK(w[2] == doctest::Approx(0.6));
    CHECK_THROWS_AS(evaluate_omega("a, a", 0), Error);
    CHECK_THROWS_AS(evaluate_omega("a, a, a, a", 0), Error);
}

TEST_CASE("config JSON overlay") {
    RunConfig cfg;
    apply_config_json(cfg, R"({"optimizer": {"method": "gradient_descent", "eta": 0.1,
                              "restarts": 3, "seed": 7}, "oracle": true,
                              "oracle_resolution": 50})");
    CHECK(cfg.optimizer.method == Method::GradientDescent);
    CHECK(cfg.optimizer.eta == 0.1);
    CHECK(cfg.optimizer.restarts == 3);
    CHECK(cfg.optimizer.seed == 7);
    CHECK(cfg.optimizer.tol == 1e-8);
    CHECK(cfg.oracle);
    CHECK(cfg.oracle_resolution == 50);
    CHECK_NOTHROW(cfg.validate());

    CHECK_THROWS_AS(apply_config_json(cfg, "{"), Error);
    CHECK_THROWS_AS(apply_config_json(cfg, "[1]"), Error);
    CHECK_THROWS_AS(apply_config_json(cfg, R"({"optimizer": {"eta": "fast"}})"), Error);
    CHECK_THROWS_AS(apply_config_json(cfg, R"({"optimizer": {"method": "newton"}})"), Error);

    cfg.oracle_resolution = 4;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.oracle = false;
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("sweep parameters") {
    SweepSpec spec;
    const auto p = spec.parameters();
    REQUIRE(p.size() == 21);
    CHECK(p.front() == 0);
    CHECK(p.back() == 1);
    CHECK(p[10] == doctest::Approx(0.5));

    spec.start = 0.05;
    CHECK(spec.parameters().size() == 20);

    spec.step = 0;
    CHECK_THROWS_AS(spec.parameters(), Error);
    spec.step = 0.1;
    spec.start = 2;
    CHECK_THROWS_AS(spec.parameters(), Error);

    CHECK(parse_family("mixed_bell") == Family::MixedBell);
    CHECK(to_string(parse_family("bell_diagonal")) == "bell_diagonal");
    CHECK_THROWS_AS(parse_family("ghz"), Error);

    SweepSpec bd;
    bd.family = Family::BellDiagonal;
    CHECK_THROWS_AS(bd.validate(), Error);
    bd.omega = "-a,-a,-a";
    CHECK(bd.state_at(0.4).matrix().max_abs_diff(werner(0.4).matrix()) < 1e-15);
    bd.omega = "1,1,1";
    CHECK_THROWS_WITH_AS(bd.state_at(0), doctest::Contains("invalid state at parameter"), Error);
}

TEST_CASE("fixed formatting") {
    CHECK(format_fixed(0) == "0.0000000000");
    CHECK(format_fixed(-0.0) == "0.0000000000");
    CHECK(format_fixed(-1e-13) == "0.0000000000");
    CHECK(format_fixed(-0.25) == "-0.2500000000");
    CHECK(format_fixed(1) == "1.0000000000");
    CHECK(format_fixed(0.123456789151) == "0.1234567892");
}

TEST_CASE("Werner sweep CSV") {
    RunConfig cfg;
    SweepSpec spec;
    const auto rows = run_sweep(spec, cfg, 4);
    REQUIRE(rows.size() == 21);
    const auto csv = format_csv(rows);
    CHECK(csv.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    CHECK(count_lines(csv) == 22);

    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    CHECK(line.rfind("0.0000000000,0.0000000000,0.0000000000,0.0000000000,", 0) == 0);
    // Oracle column is blank when the oracle is off.
    CHECK(line.find(",,") != std::string::npos);

    const auto &last = rows.back().report;
    CHECK(std::abs(last.classical_correlation - 1) < 1e-6);
    CHECK(std::abs(last.discord - 1) < 1e-6);

    // Thread count does not change the output.
    CHECK(format_csv(run_sweep(spec, cfg, 1)) == csv);
}

TEST_CASE("sweep with oracle fills the oracle column") {
    RunConfig cfg;
    cfg.oracle = true;
    cfg.oracle_resolution = 20;
    SweepSpec spec;
    spec.family = Family::MixedBell;
    spec.start = 0.5;
    spec.end = 0.6;
    spec.step = 0.1;
    const auto rows = run_sweep(spec, cfg);
    REQUIRE(rows.size() == 2);
    for (const auto &r : rows) {
        REQUIRE(r.report.oracle_min_conditional_entropy.has_value());
    }
    const auto csv = format_csv(rows);
    CHECK(csv.find(",,") == std::string::npos);
}

TEST_CASE("plot script") {
    const auto s = plot_script("out.csv", "out.png", Family::Werner);
    CHECK(s.find("set datafile separator ','") != std::string::npos);
    CHECK(s.find("'out.csv' using 1:3") != std::string::npos);
    CHECK(s.find("using 1:4") != std::string::npos);
    CHECK(s.find("set output 'out.png'") != std::string::npos);
}

TEST_CASE("validate command") {
    TempDir dir;
    std::ostringstream out;
    std::ostringstream err;

    const auto bad = dir.file(
        "bad.json", R"({"dims": [1, 2], "re": [[0.6, 0], [0, 0.5]], "im": [[0, 0], [0, 0]]})");
    CHECK(cmd_validate(bad, 1e-6, out, err) == kExitInputError);
    CHECK(out.str().find("trace defect 0.1") != std::string::npos);
    CHECK(err.str().find("trace") != std::string::npos);

    const auto ref = dir.file("ref.json", to_state_json(reference_random_matrix(), {2, 2}));
    out.str("");
    err.str("");
    CHECK(cmd_validate(ref, 1e-3, out, err) == kExitOk);
    CHECK(out.str().find("valid at tolerance") != std::string::npos);

    CHECK(cmd_validate((dir.path / "missing.json").string(), 1e-6, out, err) == kExitInputError);
    CHECK(cmd_validate(dir.file("junk.json", "not json"), 1e-6, out, err) == kExitInputError);
}

TEST_CASE("compute command") {
    TempDir dir;
    const auto path = dir.file("w.json", to_state_json(werner(0.5).matrix(), {2, 2}));
    RunConfig cfg;
    cfg.oracle = true;
    cfg.output_path = (dir.path / "report.json").string();
    std::ostringstream out;
    std::ostringstream err;
    CHECK(cmd_compute(path, cfg, out, err) == kExitOk);
    CHECK(out.str().find("quantum discord") != std::string::npos);
    const auto js = slurp(cfg.output_path);
    CHECK(js.find("\"discord\"") != std::string::npos);
    CHECK(js.find("\"oracle_gap\"") != std::string::npos);

    // An iteration cap too small to converge yields exit code 2 with the best values.
    RunConfig capped;
    capped.optimizer.max_iter = 2;
    capped.optimizer.restarts = 1;
    out.str("");
    const auto mb = dir.file("mb.json", to_state_json(mixed_bell_family(0.3).matrix(), {2, 2}));
    CHECK(cmd_compute(mb, capped, out, err) == kExitNotConverged);
    CHECK(out.str().find("NOT converged") != std::string::npos);

    CHECK(cmd_compute(dir.file("bad.json", "{}"), cfg, out, err) == kExitInputError);
}

TEST_CASE("sweep command writes CSV and plot script") {
    TempDir dir;
    RunConfig cfg;
    cfg.output_path = (dir.path / "werner.csv").string();
    cfg.emit_plot_script = true;
    SweepSpec spec;
    spec.step = 0.25;
    std::ostringstream out;
    std::ostringstream err;
    CHECK(cmd_sweep(spec, cfg, out, err) == kExitOk);
    CHECK(count_lines(slurp(cfg.output_path)) == 6);
    const auto gp = slurp(dir.path / "werner.gp");
    CHECK(gp.find("'werner.csv'") != std::string::npos);

    spec.step = -1;
    CHECK(cmd_sweep(spec, cfg, out, err) == kExitInputError);
}

TEST_CASE("oracle command") {
    TempDir dir;
    const auto path = dir.file("w.json", to_state_json(werner(1).matrix(), {2, 2}));
    std::ostringstream out;
    std::ostringstream err;
    CHECK(cmd_oracle(path, 16, 1e-6, out, err) == kExitOk);
    CHECK(out.str().find("refined minimum          0.0000000000") != std::string::npos);
    CHECK(cmd_oracle(path, 4, 1e-6, out, err) == kExitInputError);
}

TEST_CASE("compute on the maximally mixed and reference states") {
    TempDir dir;
    RunConfig cfg;
    cfg.output_path = (dir.path / "r.json").string();
    std::ostringstream out;
    std::ostringstream err;
    const auto mixed =
        dir.file("mixed.json", to_state_json(ComplexMatrix::identity(4) * Complex(0.25), {2, 2}));
    CHECK(cmd_compute(mixed, cfg, out, err) == kExitOk);
    const auto js = slurp(cfg.output_path);
    CHECK(js.find("\"discord\": 0.0") != std::string::npos);
    CHECK(js.find("\"classical_correlation\": 0.0") != std::string::npos);
    CHECK(js.find("\"mutual_information\": 0.0") != std::string::npos);

    // The printed reference matrix carries three significant digits.
    cfg.input_tolerance = 1e-3;
    const auto ref = dir.file("ref.json", to_state_json(reference_random_matrix(), {2, 2}));
    out.str("");
    CHECK(cmd_compute(ref, cfg, out, err) == kExitOk);
    CHECK(out.str().find("(0.2383") != std::string::npos);
}

TEST_CASE("oracle command on product and Werner states") {
    TempDir dir;
    std::ostringstream out;
    std::ostringstream err;
    const ComplexMatrix ra{{0.7, Complex(0.1, 0.2)}, {Complex(0.1, -0.2), 0.3}};
    const ComplexMatrix rb{{0.4, 0.1}, {0.1, 0.6}};
    const auto prod = dir.file("prod.json", to_state_json(kron(ra, rb), {2, 2}));
    CHECK(cmd_oracle(prod, 20, 1e-6, out, err) == kExitOk);
    CHECK(out.str().find("refined minimum          " + format_fixed(von_neumann_entropy(ra))) !=
          std::string::npos);

    out.str("");
    const auto w = dir.file("w.json", to_state_json(werner(0.5).matrix(), {2, 2}));
    CHECK(cmd_oracle(w, 20, 1e-6, out, err) == kExitOk);
    CHECK(out.str().find("grid minimum             " + format_fixed(binary_entropy(0.75))) !=
          std::string::npos);
    CHECK(out.str().find("refined minimum          " + format_fixed(binary_entropy(0.75))) !=
          std::string::npos);
}

TEST_CASE("CSV rows satisfy the discord identity at printed precision") {
    SweepSpec spec;
    spec.family = Family::MixedBell;
    spec.start = 0.05;
    spec.step = 0.05;
    const auto csv = format_csv(run_sweep(spec, RunConfig{}));
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string cell;
        std::vector<double> v;
        for (int k = 0; k < 4 && std::getline(fields, cell, ','); k++) {
            v.push_back(std::stod(cell));
        }
        REQUIRE(v.size() == 4);
        CHECK(std::abs(v[3] - (v[1] - v[2])) <= 1.5e-10);
        rows++;
    }
    CHECK(rows == 20);
}
