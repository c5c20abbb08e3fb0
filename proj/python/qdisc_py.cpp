// Python bindings. Density matrices cross the boundary as complex128 numpy arrays.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qdisc/correlations.hpp"
#include "qdisc/runner.hpp"
#include "qdisc/states.hpp"
#include "qdisc/su_basis.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

using ComplexArray = py::array_t<qdisc::Complex, py::array::c_style | py::array::forcecast>;

qdisc::ComplexMatrix to_matrix(const ComplexArray &a) {
    if (a.ndim() != 2) {
        throw qdisc::Error("expected a 2-d array");
    }
    const auto rows = static_cast<std::size_t>(a.shape(0));
    const auto cols = static_cast<std::size_t>(a.shape(1));
    return {rows, cols, std::vector<qdisc::Complex>(a.data(), a.data() + rows * cols)};
}

ComplexArray to_array(const qdisc::ComplexMatrix &m) {
    ComplexArray out({m.rows(), m.cols()});
    std::copy(m.data().begin(), m.data().end(), out.mutable_data());
    return out;
}

qdisc::Dims to_dims(std::pair<std::size_t, std::size_t> d) { return {d.first, d.second}; }

qdisc::DensityMatrix density(const ComplexArray &rho, std::pair<std::size_t, std::size_t> dims,
                             double tol) {
    return {to_matrix(rho), to_dims(dims), tol};
}

qdisc::OptimizerConfig make_config(const std::string &method, double eta, double tol,
                                   int max_iter, int restarts, std::uint64_t seed) {
    qdisc::OptimizerConfig cfg;
    cfg.method = qdisc::parse_method(method);
    cfg.eta = eta;
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    cfg.restarts = restarts;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
}

py::dict report_dict(const qdisc::CorrelationReport &r) {
    py::dict d;
    d["mutual_information"] = r.mutual_information;
    d["classical_correlation"] = r.classical_correlation;
    d["discord"] = r.discord;
    d["min_conditional_entropy"] = r.min_conditional_entropy;
    d["min_conditional_entropy_nats"] = r.min_conditional_entropy_nats;
    d["optimal_measurement"] = r.optimal_measurement.params();
    d["optimal_direction"] = r.optimal_direction;
    d["iterations"] = r.iterations;
    d["restarts"] = r.restarts;
    d["final_size"] = r.final_size;
    d["converged"] = r.converged;
    d["used_bell_fast_path"] = r.used_bell_fast_path;
    d["clamped"] = r.clamped;
    d["oracle_min_conditional_entropy"] = r.oracle_min_conditional_entropy;
    d["oracle_gap"] = r.oracle_gap;
    return d;
}

}  // namespace

PYBIND11_MODULE(qdisc, m) {
    m.doc() = "Quantum discord and classical correlation of bipartite states";
    m.attr("__version__") = QDISC_VERSION;

    py::register_exception<qdisc::Error>(m, "Error", PyExc_ValueError);

    m.def("werner", [](double a) { return to_array(qdisc::werner(a).matrix()); }, "a"_a);
    m.def("mixed_bell", [](double a) { return to_array(qdisc::mixed_bell_family(a).matrix()); },
          "a"_a);
    m.def("bell_diagonal",
          [](qdisc::Vec3 omega) { return to_array(qdisc::bell_diagonal(omega).matrix()); },
          "omega"_a, "(1/4)(I + sum_i omega_i sigma_i x sigma_i)");
    m.def("reference_random_state",
          [] { return to_array(qdisc::reference_random_state().state.matrix()); });

    m.def("partial_trace",
          [](const ComplexArray &rho, const std::string &keep,
             std::pair<std::size_t, std::size_t> dims) {
              qdisc::Subsystem which;
              if (keep == "A") {
                  which = qdisc::Subsystem::A;
              } else if (keep == "B") {
                  which = qdisc::Subsystem::B;
              } else {
                  throw qdisc::Error("keep must be 'A' or 'B'");
              }
              return to_array(qdisc::partial_trace(to_matrix(rho), which, to_dims(dims)));
          },
          "rho"_a, "keep"_a, "dims"_a = std::pair<std::size_t, std::size_t>{2, 2});
    m.def("von_neumann_entropy",
          [](const ComplexArray &rho) { return qdisc::von_neumann_entropy(to_matrix(rho)); },
          "rho"_a, "Entropy in bits");
    m.def("is_density_matrix",
          [](const ComplexArray &rho, double tol) {
              const auto r = qdisc::is_density_matrix(to_matrix(rho), tol);
              return py::dict("valid"_a = r.valid, "hermiticity_defect"_a = r.hermiticity_defect,
                              "trace_defect"_a = r.trace_defect,
                              "min_eigenvalue"_a = r.min_eigenvalue);
          },
          "rho"_a, "tol"_a = 1e-9);

    m.def("decompose",
          [](const ComplexArray &rho, std::pair<std::size_t, std::size_t> dims) {
              const auto d = qdisc::decompose(to_matrix(rho), to_dims(dims));
              py::array_t<double> corr({d.corr.rows, d.corr.cols});
              std::copy(d.corr.values.begin(), d.corr.values.end(), corr.mutable_data());
              return py::dict("alpha"_a = d.alpha, "beta"_a = d.beta, "corr"_a = corr);
          },
          "rho"_a, "dims"_a = std::pair<std::size_t, std::size_t>{2, 2});

    m.def("mutual_information",
          [](const ComplexArray &rho, std::pair<std::size_t, std::size_t> dims, double tol) {
              return qdisc::mutual_information(density(rho, dims, tol));
          },
          "rho"_a, "dims"_a = std::pair<std::size_t, std::size_t>{2, 2}, "tol"_a = 1e-9);
    m.def("conditional_entropy",
          [](const ComplexArray &rho, qdisc::Vec3 direction,
             std::pair<std::size_t, std::size_t> dims, double tol) {
              return qdisc::conditional_entropy(
                  density(rho, dims, tol),
                  qdisc::VonNeumannMeasurement::from_bloch_direction(direction));
          },
          "rho"_a, "direction"_a, "dims"_a = std::pair<std::size_t, std::size_t>{2, 2},
          "tol"_a = 1e-9, "Conditional entropy after measuring B along a Bloch direction");

    m.def("quantum_discord",
          [](const ComplexArray &rho, std::pair<std::size_t, std::size_t> dims,
             const std::string &method, double eta, double tol, int max_iter, int restarts,
             std::uint64_t seed, std::optional<int> oracle_resolution, double input_tol) {
              const auto state = density(rho, dims, input_tol);
              const auto cfg = make_config(method, eta, tol, max_iter, restarts, seed);
              qdisc::CorrelationReport rep;
              {
                  py::gil_scoped_release release;
                  rep = qdisc::quantum_discord(state, cfg, oracle_resolution);
              }
              return report_dict(rep);
          },
          "rho"_a, "dims"_a = std::pair<std::size_t, std::size_t>{2, 2},
          "method"_a = "nelder_mead", "eta"_a = 0.05, "tol"_a = 1e-8, "max_iter"_a = 5000,
          "restarts"_a = 8, "seed"_a = 42, "oracle_resolution"_a = py::none(),
          "input_tol"_a = 1e-6);

    m.def("grid_oracle",
          [](const ComplexArray &rho, int resolution, std::pair<std::size_t, std::size_t> dims,
             double input_tol) {
              const auto state = density(rho, dims, input_tol);
              qdisc::GridOracleResult r;
              {
                  py::gil_scoped_release release;
                  r = qdisc::grid_oracle(qdisc::conditional_entropy_cost(state), resolution);
              }
              return py::dict("min_value"_a = r.min_value, "grid_min"_a = r.grid_min,
                              "direction"_a = r.direction, "evaluations"_a = r.evaluations);
          },
          "rho"_a, "resolution"_a = 200, "dims"_a = std::pair<std::size_t, std::size_t>{2, 2},
          "input_tol"_a = 1e-6);

    m.def("sweep",
          [](const std::string &family, double start, double end, double step,
             const std::string &omega, const std::string &method, int restarts,
             std::uint64_t seed, std::optional<int> oracle_resolution) {
              qdisc::SweepSpec spec;
              spec.family = qdisc::parse_family(family);
              spec.start = start;
              spec.end = end;
              spec.step = step;
              spec.omega = omega;
              qdisc::RunConfig cfg;
              cfg.optimizer.method = qdisc::parse_method(method);
              cfg.optimizer.restarts = restarts;
              cfg.optimizer.seed = seed;
              if (oracle_resolution) {
                  cfg.oracle = true;
                  cfg.oracle_resolution = *oracle_resolution;
              }
              std::vector<qdisc::SweepRow> rows;
              {
                  py::gil_scoped_release release;
                  rows = qdisc::run_sweep(spec, cfg);
              }
              return qdisc::format_csv(rows);
          },
          "family"_a, "start"_a = 0.0, "end"_a = 1.0, "step"_a = 0.05, "omega"_a = "",
          "method"_a = "nelder_mead", "restarts"_a = 8, "seed"_a = 42,
          "oracle_resolution"_a = py::none(), "Sweep a built-in family; returns CSV text");
}
