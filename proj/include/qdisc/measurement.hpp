#pragma once

#include <array>
#include <vector>

#include "qdisc/linalg.hpp"
#include "qdisc/states.hpp"
#include "qdisc/su_basis.hpp"

namespace qdisc {

/// Projective two-outcome measurement on subsystem B, written through the SU(2) element
/// V = r I + i (y1 sx + y2 sy + y3 sz) with r^2 + |y|^2 = 1. Outcome j projects onto V|j>.
class VonNeumannMeasurement {
   public:
    /// Normalizes (r, y); throws if the vector is (numerically) zero.
    VonNeumannMeasurement(double r, double y1, double y2, double y3);
    VonNeumannMeasurement() : VonNeumannMeasurement(1, 0, 0, 0) {}

    /// r = cos p1, y1 = sin p1 cos p2, y2 = sin p1 sin p2 cos p3, y3 = sin p1 sin p2 sin p3.
    static VonNeumannMeasurement from_angles(const Vec3 &angles);
    /// V = exp(-i theta n.sigma / 2) for a unit axis n.
    static VonNeumannMeasurement from_axis_angle(double theta, const Vec3 &axis);
    /// A measurement whose outcome-0 projector is (I + n.sigma)/2.
    static VonNeumannMeasurement from_bloch_direction(const Vec3 &n);

    double r() const { return params_[0]; }
    const std::array<double, 4> &params() const { return params_; }
    Vec3 y() const { return {params_[1], params_[2], params_[3]}; }

    /// Inverse of from_angles (one preimage).
    Vec3 angles() const;
    ComplexMatrix unitary() const;
    /// Bloch vector z of the outcome-0 projector, i.e. the Pauli coefficients of
    /// V sigma_z V^dagger, computed by conjugation.
    Vec3 bloch_direction() const;

   private:
    std::array<double, 4> params_{};
};

struct ProjectorPair {
    ComplexMatrix pi0;
    ComplexMatrix pi1;
};

ProjectorPair projectors(const VonNeumannMeasurement &meas);
/// Pi_j = U|j><j|U^dagger for an arbitrary 2x2 unitary U (global phase irrelevant).
ProjectorPair projectors_from_unitary(const ComplexMatrix &u);

struct MeasurementOutcome {
    double probability = 0;
    /// Normalized post-measurement state; empty when probability < 1e-12.
    std::optional<DensityMatrix> state;
};

struct MeasurementEnsemble {
    std::vector<MeasurementOutcome> outcomes;
};

/// Measures subsystem B (which must be a qubit) with (I x Pi_j).
MeasurementEnsemble apply_measurement(const DensityMatrix &rho, const ProjectorPair &p);

/// sum_j p_j S(rho_j) in bits; each S(rho_j) evaluated on the A-marginal of rho_j.
double conditional_entropy(const DensityMatrix &rho, const ProjectorPair &p);
double conditional_entropy(const DensityMatrix &rho, const VonNeumannMeasurement &meas);

/// Closed form for (1/4)(I + sum omega_j sigma_j x sigma_j): h((1 + xi)/2) with
/// xi = |(omega_i z_i)|.
double bell_conditional_entropy(const Vec3 &omega, const VonNeumannMeasurement &meas);
double bell_xi(const Vec3 &omega, const Vec3 &z);

struct SuperopOutcome {
    /// (K_j x K_j^T)|rho> with K_j = I x Pi_j, stored with devectorization norm so that
    /// devectorize(image) = K_j rho K_j.
    VectorizedState image;
    /// || (K_j x K_j^T)|rho> ||^2 for the unit vector |rho>.
    double squared_norm = 0;
    /// Trace readout <<I| image >>, equal to Tr(K_j rho K_j).
    double probability = 0;
};

std::vector<SuperopOutcome> apply_superop_vectorized(const VectorizedState &v, Dims dims,
                                                     const ProjectorPair &p);

}  // namespace qdisc
