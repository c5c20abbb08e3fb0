#include "qdisc/states.hpp"

#include <cmath>
#include <sstream>

namespace qdisc {

namespace {

ComplexMatrix projector(const std::vector<Complex> &psi) {
    ComplexMatrix p(psi.size(), psi.size());
    for (std::size_t i = 0; i < psi.size(); i++) {
        for (std::size_t j = 0; j < psi.size(); j++) {
            p(i, j) = psi[i] * std::conj(psi[j]);
        }
    }
    return p;
}

const double kInvSqrt2 = 1 / std::sqrt(2.0);

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix matrix, Dims dims, double tol)
    : matrix_(std::move(matrix)), dims_(dims) {
    if (dims.a == 0 || dims.b == 0 || matrix_.rows() != dims.total() ||
        matrix_.cols() != dims.total()) {
        std::ostringstream ss;
        ss << "DensityMatrix: " << matrix_.rows() << "x" << matrix_.cols()
           << " matrix does not match dims (" << dims.a << ", " << dims.b << ")";
        throw Error(ss.str());
    }
    const auto report = is_density_matrix(matrix_, tol);
    if (!report.valid) {
        throw Error("DensityMatrix: invalid state: " + report.describe());
    }
}

DensityMatrix werner(double a) {
    if (!(a >= 0 && a <= 1)) {
        std::ostringstream ss;
        ss << "werner: parameter " << a << " outside [0, 1]";
        throw Error(ss.str());
    }
    // |psi-> = (|01> - |10>)/sqrt(2)
    ComplexMatrix rho = projector({0, kInvSqrt2, -kInvSqrt2, 0}) * Complex(a);
    rho += ComplexMatrix::identity(4) * Complex((1 - a) / 4);
    return {std::move(rho), Dims{2, 2}};
}

DensityMatrix mixed_bell_family(double a) {
    if (!(a > 0 && a <= 1)) {
        std::ostringstream ss;
        ss << "mixed_bell_family: parameter " << a << " outside (0, 1]";
        throw Error(ss.str());
    }
    ComplexMatrix rho = projector({1, 0, 0, 0}) * Complex(1 - a);
    rho += projector({0, kInvSqrt2, kInvSqrt2, 0}) * Complex(2);
    rho += projector({0, 0, 0, 1}) * Complex(a);
    rho *= 1.0 / 3.0;
    return {std::move(rho), Dims{2, 2}};
}

DensityMatrix bell_diagonal(const Vec3 &omega) {
    ComplexMatrix rho = ComplexMatrix::identity(4);
    for (int j = 0; j < 3; j++) {
        const auto s = pauli::by_index(j);
        rho += kron(s, s) * Complex(omega[j]);
    }
    rho *= 0.25;
    const double lowest = hermitian_eig(rho).eigenvalues.front();
    if (lowest < -1e-12) {
        std::ostringstream ss;
        ss << "bell_diagonal: omega (" << omega[0] << ", " << omega[1] << ", " << omega[2]
           << ") gives negative eigenvalue " << lowest;
        throw Error(ss.str());
    }
    return {std::move(rho), Dims{2, 2}};
}

RepairedState repair_density_matrix(const ComplexMatrix &m, Dims dims, double max_negativity) {
    if (!m.is_square() || m.rows() != dims.total()) {
        throw Error("repair_density_matrix: matrix does not match dims");
    }
    RepairLog log;
    log.hermiticity_removed = m.max_abs_diff(m.adjoint());
    ComplexMatrix h = m + m.adjoint();
    h *= 0.5;
    log.trace_before = h.trace().real();
    if (!(log.trace_before > 0)) {
        throw Error("repair_density_matrix: non-positive trace");
    }
    if (log.trace_before != 1) {
        h *= 1 / log.trace_before;
    }
    log.min_eigenvalue = hermitian_eig(h).eigenvalues.front();
    if (log.min_eigenvalue < -max_negativity) {
        std::ostringstream ss;
        ss << "repair_density_matrix: eigenvalue " << log.min_eigenvalue
           << " remains after repair";
        throw Error(ss.str());
    }
    return {DensityMatrix(std::move(h), dims, std::max(max_negativity, 1e-9)), log};
}

ComplexMatrix reference_random_matrix() {
    using C = Complex;
    return {
        {C(0.437, 0), C(0.126, 0.197), C(0.0271, -0.0258), C(-0.247, 0.0997)},
        {C(0.126, -0.197), C(0.154, 0), C(-0.0115, -0.0187), C(-0.0315, 0.170)},
        {C(0.0271, 0.0258), C(-0.0115, 0.0187), C(0.0370, 0), C(0.00219, -0.0367)},
        {C(-0.247, -0.0997), C(-0.0315, -0.170), C(0.00219, 0.0367), C(0.372, 0)},
    };
}

RepairedState reference_random_state() {
    return repair_density_matrix(reference_random_matrix(), Dims{2, 2});
}

VectorizedState vectorize(const ComplexMatrix &rho) {
    const double norm = rho.frobenius_norm();
    if (norm == 0) {
        throw Error("vectorize: zero matrix");
    }
    VectorizedState v{{rho.data().begin(), rho.data().end()}, norm};
    for (auto &x : v.amplitudes) {
        x /= norm;
    }
    return v;
}

ComplexMatrix devectorize(const VectorizedState &v, std::size_t dim) {
    if (dim == 0 || v.amplitudes.size() != dim * dim) {
        std::ostringstream ss;
        ss << "devectorize: " << v.amplitudes.size() << " amplitudes do not form a " << dim
           << "x" << dim << " matrix";
        throw Error(ss.str());
    }
    ComplexMatrix m(dim, dim, v.amplitudes);
    m *= v.norm;
    return m;
}

DensityMatrix devectorize(const VectorizedState &v, Dims dims, double tol) {
    return {devectorize(v, dims.total()), dims, tol};
}

ComplexMatrix GateOp::single_qubit_matrix() const {
    const Complex i(0, 1);
    switch (kind) {
        case GateKind::H:
            return ComplexMatrix{{1, 1}, {1, -1}} * Complex(kInvSqrt2);
        case GateKind::U2: {
            if (!payload || payload->rows() != 2 || payload->cols() != 2) {
                throw Error("GateOp: U2 gate needs a 2x2 payload");
            }
            const double defect =
                ((*payload) * payload->adjoint()).max_abs_diff(ComplexMatrix::identity(2));
            if (defect > 1e-10) {
                std::ostringstream ss;
                ss << "GateOp: U2 payload is not unitary (defect " << defect << ")";
                throw Error(ss.str());
            }
            return *payload;
        }
        case GateKind::RPARAM: {
            const auto s = pauli::by_index(static_cast<int>(axis));
            return ComplexMatrix::identity(2) * Complex(std::cos(angle / 2)) -
                   s * (i * std::sin(angle / 2));
        }
        case GateKind::CNOT:
            break;
    }
    throw Error("GateOp: CNOT is not a single-qubit gate");
}

std::vector<Complex> apply_gate_sequence(const std::vector<GateOp> &gates,
                                         std::size_t num_qubits) {
    if (num_qubits == 0 || num_qubits > 16) {
        throw Error("apply_gate_sequence: qubit count must be in [1, 16]");
    }
    const std::size_t dim = std::size_t{1} << num_qubits;
    std::vector<Complex> psi(dim);
    psi[0] = 1;
    auto bit = [&](std::size_t q) { return std::size_t{1} << (num_qubits - 1 - q); };

    for (const auto &g : gates) {
        const std::size_t expected = g.kind == GateKind::CNOT ? 2 : 1;
        if (g.targets.size() != expected) {
            throw Error("apply_gate_sequence: wrong number of targets");
        }
        for (auto q : g.targets) {
            if (q >= num_qubits) {
                std::ostringstream ss;
                ss << "apply_gate_sequence: qubit " << q << " out of range";
                throw Error(ss.str());
            }
        }
        if (g.kind == GateKind::CNOT) {
            const auto c = bit(g.targets[0]);
            const auto t = bit(g.targets[1]);
            if (c == t) {
                throw Error("apply_gate_sequence: CNOT control equals target");
            }
            for (std::size_t k = 0; k < dim; k++) {
                if ((k & c) && !(k & t)) {
                    std::swap(psi[k], psi[k | t]);
                }
            }
            continue;
        }
        const auto u = g.single_qubit_matrix();
        const auto t = bit(g.targets[0]);
        for (std::size_t k = 0; k < dim; k++) {
            if (k & t) {
                continue;
            }
            const Complex a0 = psi[k];
            const Complex a1 = psi[k | t];
            psi[k] = u(0, 0) * a0 + u(0, 1) * a1;
            psi[k | t] = u(1, 0) * a0 + u(1, 1) * a1;
        }
    }
    return psi;
}

std::vector<GateOp> bell_projector_vectorization_circuit() {
    return {GateOp::h(0), GateOp::cnot(0, 1), GateOp::h(2), GateOp::cnot(2, 3)};
}

std::vector<GateOp> maximally_mixed_vectorization_circuit() {
    return {GateOp::h(0), GateOp::cnot(0, 2), GateOp::h(1), GateOp::cnot(1, 3)};
}

}  // namespace qdisc
