#pragma once

#include <array>
#include <vector>

#include "qdisc/linalg.hpp"

namespace qdisc {

/// Generalized Gell-Mann generators of SU(N), normalized so that Tr(l_i l_j) = 2 delta_ij.
/// Order: symmetric U_jk (j < k, lexicographic), antisymmetric V_jk (same order), then
/// diagonal W_1 .. W_{N-1}.
struct GeneratorSet {
    std::size_t dimension = 0;
    std::vector<ComplexMatrix> generators;
};

GeneratorSet generators(std::size_t n);

/// Real row-major matrix for the correlation block.
struct RealMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    RealMatrix() = default;
    RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}
    double &operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

/// rho = (1/mn) (I x I + sum_i alpha_i l_i x I + sum_j beta_j I x l_j
///                + sum_ij corr_ij l_i x l_j)
/// with alpha_i = (m/2) Tr(rho l_i x I), beta_j = (n/2) Tr(rho I x l_j) and
/// corr_ij = (mn/4) Tr(rho l_i x l_j). For two qubits alpha and beta are the Bloch vectors
/// of the marginals and corr_ij = <sigma_i x sigma_j>.
struct SuDecomposition {
    Dims dims;
    std::vector<double> alpha;
    std::vector<double> beta;
    RealMatrix corr;
};

SuDecomposition decompose(const ComplexMatrix &rho, Dims dims);
ComplexMatrix reconstruct(const SuDecomposition &d);

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

/// Thin 3x3 SVD with proper rotations: m = left * diag(values) * right^T, det(left) =
/// det(right) = +1. Values are sorted by descending magnitude; at most one may be negative
/// (the sign absorbed to keep both rotations proper).
struct SignedSvd3 {
    Mat3 left{};
    Vec3 values{};
    Mat3 right{};
};

SignedSvd3 signed_svd3(const Mat3 &m);

/// Maps a proper rotation R of the Bloch ball to U in SU(2) with
/// U sigma_j U^dagger = sum_i R_ij sigma_i.
ComplexMatrix rotation_to_su2(const Mat3 &r);

struct TwoQubitCanonicalForm {
    Vec3 omega{};
    /// (u_a x u_b) rho (u_a x u_b)^dagger has correlation matrix diag(omega).
    ComplexMatrix u_a = ComplexMatrix::identity(2);
    ComplexMatrix u_b = ComplexMatrix::identity(2);
    Vec3 residual_alpha{};
    Vec3 residual_beta{};
};

TwoQubitCanonicalForm canonicalize_two_qubit(const ComplexMatrix &rho);

}  // namespace qdisc
