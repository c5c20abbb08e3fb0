#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qdisc/measurement.hpp"

namespace qdisc {

enum class Method { GradientDescent, NelderMead, GridThenPolish };

std::string to_string(Method m);
/// Accepts "gradient_descent", "nelder_mead", "grid_then_polish".
Method parse_method(const std::string &name);

struct OptimizerConfig {
    Method method = Method::NelderMead;
    double eta = 0.05;
    double fd_step = 1e-6;
    double tol = 1e-8;
    int max_iter = 5000;
    int restarts = 8;
    std::uint64_t seed = 42;

    /// Throws Error naming the first violated constraint.
    void validate() const;
};

using CostFunction = std::function<double(std::span<const double>)>;
using GradientFunction = std::function<std::vector<double>(std::span<const double>)>;

struct TracePoint {
    int iteration = 0;
    double value = 0;
};

struct OptimizationResult {
    std::vector<double> best_params;
    double best_value = 0;
    int iterations = 0;
    bool converged = false;
    /// Final simplex diameter (Nelder-Mead) or gradient norm (gradient descent).
    double final_size = 0;
    int restarts = 1;
    std::vector<TracePoint> trace;
};

std::vector<double> finite_diff_gradient(const CostFunction &cost, std::span<const double> theta,
                                         double h);

/// Gradient of h((1 + xi(theta))/2) with respect to the three measurement angles, for the
/// Bell-diagonal state with correlation vector omega. Components clamped to |g| <= 1e6.
Vec3 analytic_gradient_bell(const Vec3 &omega, const Vec3 &theta);

/// Largest gradient magnitude the descent uses; beyond it the step falls back to a
/// golden-section line search.
inline constexpr double kGradientClamp = 1e6;

/// theta <- theta - eta * grad, accepting only non-increasing steps (eta is halved on a
/// rejected step, at most 20 times in a row). Stops once an accepted step changes the value
/// by less than cfg.tol.
OptimizationResult gradient_descent(const CostFunction &cost, const GradientFunction &grad,
                                    std::span<const double> theta0, const OptimizerConfig &cfg,
                                    bool record_trace = false);

/// Simplex search with reflection 1, expansion 2, contraction 1/2 and shrink 1/2. Converged
/// once the simplex diameter drops below cfg.tol.
OptimizationResult nelder_mead(const CostFunction &cost, std::span<const double> theta0,
                               const OptimizerConfig &cfg, double initial_step = 0.25,
                               bool record_trace = false);

using MeasurementCost = std::function<double(const VonNeumannMeasurement &)>;

struct GridOracleResult {
    double grid_min = 0;  // before refinement
    double min_value = 0;
    Vec3 direction{};  // Bloch direction of the optimal outcome-0 projector
    VonNeumannMeasurement argmin;
    int evaluations = 0;
};

/// Exhaustive search over Bloch directions: resolution x resolution points uniform in
/// (cos(polar), azimuth), followed by three levels of local 3x refinement around the best
/// point.
GridOracleResult grid_oracle(const MeasurementCost &cost, int resolution);

using InnerOptimizer = std::function<OptimizationResult(const CostFunction &,
                                                        std::span<const double> theta0)>;

/// Runs inner from the six axis-aligned measurements (+-x, +-y, +-z) followed by
/// cfg.restarts seeded random angle vectors; returns the lowest value (earliest start wins
/// ties).
OptimizationResult multi_start(const InnerOptimizer &inner, const CostFunction &cost,
                               const OptimizerConfig &cfg);

/// Convenience: minimizes cost over measurements with the method selected in cfg.
/// bell_omega enables the analytic gradient for gradient descent.
OptimizationResult minimize_measurement(const MeasurementCost &cost, const OptimizerConfig &cfg,
                                        const std::optional<Vec3> &bell_omega = std::nullopt);

/// Uniform draws in [0, 1) built directly on mt19937_64's output (whose sequence the
/// standard fixes), so results do not depend on the library's distribution implementations.
class UniformSource {
   public:
    explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

   private:
    std::mt19937_64 engine_;
};

}  // namespace qdisc
