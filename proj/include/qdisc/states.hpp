#pragma once

#include <optional>
#include <vector>

#include "qdisc/linalg.hpp"
#include "qdisc/su_basis.hpp"

namespace qdisc {

/// Bipartite density matrix on H_A (dim m) x H_B (dim n). Construction validates
/// Hermiticity, unit trace and positivity at the given tolerance.
class DensityMatrix {
   public:
    static constexpr double kDefaultTolerance = 1e-9;

    DensityMatrix(ComplexMatrix matrix, Dims dims, double tol = kDefaultTolerance);

    const ComplexMatrix &matrix() const { return matrix_; }
    Dims dims() const { return dims_; }

    ComplexMatrix marginal(Subsystem keep) const { return partial_trace(matrix_, keep, dims_); }

   private:
    ComplexMatrix matrix_;
    Dims dims_;
};

DensityMatrix werner(double a);
/// (1/3)[(1-a)|00><00| + 2|psi+><psi+| + a|11><11|], 0 < a <= 1.
DensityMatrix mixed_bell_family(double a);
/// (1/4)(I x I + sum_j omega_j sigma_j x sigma_j); throws when a Bell-basis weight is negative.
DensityMatrix bell_diagonal(const Vec3 &omega);

struct RepairLog {
    double hermiticity_removed = 0;  // max |rho - rho^dagger| before symmetrization
    double trace_before = 1;
    double min_eigenvalue = 0;  // after repair
    bool changed() const { return hermiticity_removed > 0 || trace_before != 1; }
};

struct RepairedState {
    DensityMatrix state;
    RepairLog log;
};

/// Symmetrizes and renormalizes a matrix read at limited precision. Fails if the repaired
/// matrix has an eigenvalue below -max_negativity.
RepairedState repair_density_matrix(const ComplexMatrix &m, Dims dims,
                                    double max_negativity = 1e-3);

/// The fixed 4x4 two-qubit benchmark state printed to three significant digits.
ComplexMatrix reference_random_matrix();
RepairedState reference_random_state();

struct VectorizedState {
    std::vector<Complex> amplitudes;
    double norm = 0;  // Frobenius norm of the source matrix
};

/// Row-major flattening rho_ij -> |i>|j>, divided by the Frobenius norm.
VectorizedState vectorize(const ComplexMatrix &rho);
ComplexMatrix devectorize(const VectorizedState &v, std::size_t dim);
DensityMatrix devectorize(const VectorizedState &v, Dims dims, double tol = 1e-9);

enum class GateKind { H, CNOT, U2, RPARAM };
enum class Axis { X, Y, Z };

/// One gate of a dense statevector preparation circuit. Qubit 0 is the most significant
/// index bit, so a register reads |q0 q1 ... >.
struct GateOp {
    GateKind kind = GateKind::H;
    std::vector<std::size_t> targets;  // CNOT: {control, target}
    std::optional<ComplexMatrix> payload;  // U2
    double angle = 0;                      // RPARAM: exp(-i angle sigma_axis / 2)
    Axis axis = Axis::Z;

    static GateOp h(std::size_t q) { return {GateKind::H, {q}, std::nullopt, 0, Axis::Z}; }
    static GateOp cnot(std::size_t control, std::size_t target) {
        return {GateKind::CNOT, {control, target}, std::nullopt, 0, Axis::Z};
    }
    static GateOp u2(std::size_t q, ComplexMatrix u) {
        return {GateKind::U2, {q}, std::move(u), 0, Axis::Z};
    }
    static GateOp rotation(std::size_t q, Axis axis, double angle) {
        return {GateKind::RPARAM, {q}, std::nullopt, angle, axis};
    }

    ComplexMatrix single_qubit_matrix() const;
};

std::vector<Complex> apply_gate_sequence(const std::vector<GateOp> &gates,
                                         std::size_t num_qubits);

/// Prepares vectorize(|Phi+><Phi+|) on (physical q0 q1, ancilla q2 q3).
std::vector<GateOp> bell_projector_vectorization_circuit();
/// Prepares vectorize(I/4): each physical qubit maximally entangled with its ancilla.
std::vector<GateOp> maximally_mixed_vectorization_circuit();

}  // namespace qdisc
