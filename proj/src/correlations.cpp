#include "qdisc/correlations.hpp"

#include <cmath>
#include <numbers>

namespace qdisc {

namespace {

constexpr double kBellThreshold = 1e-9;
constexpr double kClampWindow = 1e-9;

}  // namespace

double mutual_information(const DensityMatrix &rho) {
    return von_neumann_entropy(rho.marginal(Subsystem::A)) +
           von_neumann_entropy(rho.marginal(Subsystem::B)) - von_neumann_entropy(rho.matrix());
}

double mutual_information_bell(const Vec3 &omega) {
    const auto ev = hermitian_eigenvalues(bell_diagonal(omega).matrix());
    return 2 - spectrum_entropy(ev);
}

std::optional<Vec3> bell_diagonal_omega(const DensityMatrix &rho) {
    if (rho.dims() != Dims{2, 2}) {
        return std::nullopt;
    }
    const auto d = decompose(rho.matrix(), rho.dims());
    for (int i = 0; i < 3; i++) {
        if (std::abs(d.alpha[i]) > kBellThreshold || std::abs(d.beta[i]) > kBellThreshold) {
            return std::nullopt;
        }
        for (int j = 0; j < 3; j++) {
            if (i != j && std::abs(d.corr(i, j)) > kBellThreshold) {
                return std::nullopt;
            }
        }
    }
    return Vec3{d.corr(0, 0), d.corr(1, 1), d.corr(2, 2)};
}

MeasurementCost conditional_entropy_cost(const DensityMatrix &rho) {
    if (const auto omega = bell_diagonal_omega(rho)) {
        return [omega = *omega](const VonNeumannMeasurement &m) {
            return bell_conditional_entropy(omega, m);
        };
    }
    return [rho](const VonNeumannMeasurement &m) { return conditional_entropy(rho, m); };
}

ClassicalCorrelationResult classical_correlation(const DensityMatrix &rho,
                                                 const OptimizerConfig &cfg) {
    if (rho.dims().b != 2) {
        throw Error("classical_correlation: subsystem B must be a qubit");
    }
    const auto omega = bell_diagonal_omega(rho);
    ClassicalCorrelationResult out;
    out.used_bell_fast_path = omega.has_value();
    out.stats = minimize_measurement(conditional_entropy_cost(rho), cfg, omega);
    const auto &p = out.stats.best_params;
    out.argmin = VonNeumannMeasurement::from_angles({p[0], p[1], p[2]});
    out.min_conditional_entropy = out.stats.best_value;
    out.value = von_neumann_entropy(rho.marginal(Subsystem::A)) - out.min_conditional_entropy;
    if (out.value < 0 && out.value > -kClampWindow) {
        out.value = 0;
        out.clamped = true;
    }
    return out;
}

CorrelationReport quantum_discord(const DensityMatrix &rho, const OptimizerConfig &cfg,
                                  std::optional<int> oracle_resolution) {
    const auto cc = classical_correlation(rho, cfg);
    CorrelationReport rep;
    rep.mutual_information = mutual_information(rho);
    if (rep.mutual_information < 0 && rep.mutual_information > -kClampWindow) {
        rep.mutual_information = 0;
        rep.clamped = true;
    }
    rep.classical_correlation = cc.value;
    rep.discord = rep.mutual_information - rep.classical_correlation;
    if (rep.discord < 0 && rep.discord > -kClampWindow) {
        // Move the slack into C so that I = C + QD stays exact.
        rep.classical_correlation = rep.mutual_information;
        rep.discord = 0;
        rep.clamped = true;
    }
    rep.clamped = rep.clamped || cc.clamped;
    rep.min_conditional_entropy = cc.min_conditional_entropy;
    rep.min_conditional_entropy_nats = cc.min_conditional_entropy * std::numbers::ln2;
    rep.optimal_measurement = cc.argmin;
    rep.optimal_direction = cc.argmin.bloch_direction();
    rep.iterations = cc.stats.iterations;
    rep.restarts = cc.stats.restarts;
    rep.final_size = cc.stats.final_size;
    rep.converged = cc.stats.converged;
    rep.used_bell_fast_path = cc.used_bell_fast_path;
    if (oracle_resolution) {
        const auto oracle = grid_oracle(conditional_entropy_cost(rho), *oracle_resolution);
        rep.oracle_min_conditional_entropy = oracle.min_value;
        rep.oracle_gap = rep.min_conditional_entropy - oracle.min_value;
    }
    return rep;
}

}  // namespace qdisc
