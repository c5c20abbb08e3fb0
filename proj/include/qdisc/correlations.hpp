#pragma once

#include <optional>

#include "qdisc/measurement.hpp"
#include "qdisc/optimizer.hpp"
#include "qdisc/states.hpp"

namespace qdisc {

/// S(rho_A) + S(rho_B) - S(rho_AB), bits.
double mutual_information(const DensityMatrix &rho);
/// 2 + sum_i nu_i log2 nu_i over the spectrum of bell_diagonal(omega).
double mutual_information_bell(const Vec3 &omega);

/// Correlation vector omega when rho is Bell-diagonal (|alpha|, |beta| and off-diagonal
/// correlations all below 1e-9); nullopt otherwise.
std::optional<Vec3> bell_diagonal_omega(const DensityMatrix &rho);

struct ClassicalCorrelationResult {
    double value = 0;
    double min_conditional_entropy = 0;
    VonNeumannMeasurement argmin;
    OptimizationResult stats;
    bool used_bell_fast_path = false;
    bool clamped = false;
};

/// S(rho_A) - min over projective measurements on B of the conditional entropy.
ClassicalCorrelationResult classical_correlation(const DensityMatrix &rho,
                                                 const OptimizerConfig &cfg);

struct CorrelationReport {
    double mutual_information = 0;
    double classical_correlation = 0;
    double discord = 0;
    double min_conditional_entropy = 0;
    /// Same minimum with natural logarithms, for comparison with nat-based tools.
    double min_conditional_entropy_nats = 0;
    VonNeumannMeasurement optimal_measurement;
    Vec3 optimal_direction{};

    int iterations = 0;
    int restarts = 0;
    double final_size = 0;
    bool converged = false;
    bool used_bell_fast_path = false;
    /// Set when a value in (-1e-9, 0) was reported as 0.
    bool clamped = false;
    std::optional<double> oracle_min_conditional_entropy;
    std::optional<double> oracle_gap;  // optimizer minus oracle
};

CorrelationReport quantum_discord(const DensityMatrix &rho, const OptimizerConfig &cfg,
                                  std::optional<int> oracle_resolution = std::nullopt);

/// Conditional-entropy cost for rho, with the Bell-diagonal closed form when it applies.
MeasurementCost conditional_entropy_cost(const DensityMatrix &rho);

}  // namespace qdisc
