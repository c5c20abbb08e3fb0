#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdisc {

using Complex = std::complex<double>;

/// Raised for dimension mismatches and out-of-domain numerical inputs.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Dense row-major complex matrix. Sized for the small operators used here (at most 16x16
/// for states and 256x256 for vectorized superoperators).
class ComplexMatrix {
   public:
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zeros(std::size_t rows, std::size_t cols);
    static ComplexMatrix diagonal(std::span<const double> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const Complex> data() const { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conj() const;
    Complex trace() const;
    double frobenius_norm() const;
    /// Largest |a_ij - b_ij|; throws on shape mismatch.
    double max_abs_diff(const ComplexMatrix &other) const;

    ComplexMatrix &operator+=(const ComplexMatrix &o);
    ComplexMatrix &operator-=(const ComplexMatrix &o);
    ComplexMatrix &operator*=(Complex s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);

    bool operator==(const ComplexMatrix &) const = default;

    std::string str() const;

   private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Complex> data_;
};

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
/// sigma_1, sigma_2, sigma_3 for k = 0, 1, 2.
ComplexMatrix by_index(int k);
}  // namespace pauli

/// Subsystem dimensions (m, n) of a bipartite space H_A (dim m) x H_B (dim n).
struct Dims {
    std::size_t a = 2;
    std::size_t b = 2;
    std::size_t total() const { return a * b; }
    bool operator==(const Dims &) const = default;
};

enum class Subsystem { A, B };

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);

/// Returns Tr_B(rho) when keep == A, Tr_A(rho) when keep == B.
ComplexMatrix partial_trace(const ComplexMatrix &rho, Subsystem keep, Dims dims);

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // column k belongs to eigenvalues[k]
};

/// Cyclic complex Jacobi eigensolver for Hermitian matrices. The input is symmetrized as
/// (H + H^dagger)/2 after checking the Hermiticity defect is below 1e-9 * max(1, ||H||).
EigenDecomposition hermitian_eig(const ComplexMatrix &h);
std::vector<double> hermitian_eigenvalues(const ComplexMatrix &h);

/// Entropies are in bits.
double von_neumann_entropy(const ComplexMatrix &rho);
double binary_entropy(double x);
double shannon_entropy(std::span<const double> p);
/// Entropy of a spectrum with the same clamping rules as von_neumann_entropy.
double spectrum_entropy(std::span<const double> eigenvalues);

struct ValidityReport {
    double hermiticity_defect = 0;  // max |H - H^dagger|
    double trace_defect = 0;        // |Tr H - 1|
    double min_eigenvalue = 0;
    bool valid = false;
    std::string describe() const;
};

ValidityReport is_density_matrix(const ComplexMatrix &m, double tol);

}  // namespace qdisc
