#include "qdisc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qdisc {

namespace {

constexpr double kEntropyReject = 1e-8;

void require_same_shape(const ComplexMatrix &a, const ComplexMatrix &b, const char *what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::ostringstream ss;
        ss << what << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows()
           << "x" << b.cols();
        throw Error(ss.str());
    }
}

double plogp(double p) { return p > 0 ? -p * std::log2(p) : 0.0; }

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) {
        throw Error("ComplexMatrix: dimensions must be positive");
    }
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) {
        throw Error("ComplexMatrix: dimensions must be positive");
    }
    if (data_.size() != rows * cols) {
        throw Error("ComplexMatrix: entry count does not match rows x cols");
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    if (rows_ == 0 || cols_ == 0) {
        throw Error("ComplexMatrix: dimensions must be positive");
    }
    data_.reserve(rows_ * cols_);
    for (const auto &row : rows) {
        if (row.size() != cols_) {
            throw Error("ComplexMatrix: ragged initializer");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; i++) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); i++) {
        m(i, i) = values[i];
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; r++) {
        for (std::size_t c = 0; c < cols_; c++) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; r++) {
        for (std::size_t c = 0; c < cols_; c++) {
            out(c, r) = (*this)(r, c);
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::conj() const {
    ComplexMatrix out = *this;
    for (auto &v : out.data_) {
        v = std::conj(v);
    }
    return out;
}

Complex ComplexMatrix::trace() const {
    if (!is_square()) {
        throw Error("trace: matrix is not square");
    }
    Complex t = 0;
    for (std::size_t i = 0; i < rows_; i++) {
        t += (*this)(i, i);
    }
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0;
    for (const auto &v : data_) {
        s += std::norm(v);
    }
    return std::sqrt(s);
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix &other) const {
    require_same_shape(*this, other, "max_abs_diff");
    double d = 0;
    for (std::size_t i = 0; i < data_.size(); i++) {
        d = std::max(d, std::abs(data_[i] - other.data_[i]));
    }
    return d;
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &o) {
    require_same_shape(*this, o, "operator+");
    for (std::size_t i = 0; i < data_.size(); i++) {
        data_[i] += o.data_[i];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &o) {
    require_same_shape(*this, o, "operator-");
    for (std::size_t i = 0; i < data_.size(); i++) {
        data_[i] -= o.data_[i];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(Complex s) {
    for (auto &v : data_) {
        v *= s;
    }
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols() != b.rows()) {
        std::ostringstream ss;
        ss << "operator*: inner dimensions differ (" << a.cols() << " vs " << b.rows() << ")";
        throw Error(ss.str());
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); i++) {
        for (std::size_t k = 0; k < a.cols(); k++) {
            const Complex aik = a(i, k);
            if (aik == Complex(0)) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); j++) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

std::string ComplexMatrix::str() const {
    std::ostringstream ss;
    ss.precision(6);
    for (std::size_t r = 0; r < rows_; r++) {
        for (std::size_t c = 0; c < cols_; c++) {
            const auto v = (*this)(r, c);
            ss << (c ? "  " : "") << v.real() << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag())
               << "i";
        }
        ss << "\n";
    }
    return ss.str();
}

namespace pauli {
ComplexMatrix x() { return {{0, 1}, {1, 0}}; }
ComplexMatrix y() { return {{0, Complex(0, -1)}, {Complex(0, 1), 0}}; }
ComplexMatrix z() { return {{1, 0}, {0, -1}}; }
ComplexMatrix by_index(int k) {
    switch (k) {
        case 0:
            return x();
        case 1:
            return y();
        case 2:
            return z();
    }
    throw Error("pauli::by_index: index must be 0, 1 or 2");
}
}  // namespace pauli

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ar++) {
        for (std::size_t ac = 0; ac < a.cols(); ac++) {
            const Complex s = a(ar, ac);
            for (std::size_t br = 0; br < b.rows(); br++) {
                for (std::size_t bc = 0; bc < b.cols(); bc++) {
                    out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
                }
            }
        }
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix &rho, Subsystem keep, Dims dims) {
    const std::size_t m = dims.a;
    const std::size_t n = dims.b;
    if (m == 0 || n == 0 || rho.rows() != m * n || rho.cols() != m * n) {
        std::ostringstream ss;
        ss << "partial_trace: expected " << m * n << "x" << m * n << " matrix for dims (" << m
           << ", " << n << "), got " << rho.rows() << "x" << rho.cols();
        throw Error(ss.str());
    }
    if (keep == Subsystem::A) {
        ComplexMatrix out(m, m);
        for (std::size_t i = 0; i < m; i++) {
            for (std::size_t j = 0; j < m; j++) {
                Complex s = 0;
                for (std::size_t k = 0; k < n; k++) {
                    s += rho(i * n + k, j * n + k);
                }
                out(i, j) = s;
            }
        }
        return out;
    }
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = 0; j < n; j++) {
            Complex s = 0;
            for (std::size_t k = 0; k < m; k++) {
                s += rho(k * n + i, k * n + j);
            }
            out(i, j) = s;
        }
    }
    return out;
}

EigenDecomposition hermitian_eig(const ComplexMatrix &h) {
    if (!h.is_square()) {
        throw Error("hermitian_eig: matrix is not square");
    }
    const std::size_t n = h.rows();
    const double scale = h.frobenius_norm();
    const double defect = h.max_abs_diff(h.adjoint());
    if (defect > 1e-9 * std::max(1.0, scale)) {
        std::ostringstream ss;
        ss << "hermitian_eig: matrix is not Hermitian (defect " << defect << ")";
        throw Error(ss.str());
    }

    ComplexMatrix a = h;
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = i; j < n; j++) {
            const Complex v = 0.5 * (h(i, j) + std::conj(h(j, i)));
            a(i, j) = v;
            a(j, i) = std::conj(v);
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    auto off_norm = [&] {
        double s = 0;
        for (std::size_t i = 0; i < n; i++) {
            for (std::size_t j = 0; j < n; j++) {
                if (i != j) {
                    s += std::norm(a(i, j));
                }
            }
        }
        return std::sqrt(s);
    };

    const double threshold = 1e-12 * scale;
    for (int sweep = 0; sweep < 100 && scale > 0 && off_norm() > threshold; sweep++) {
        for (std::size_t p = 0; p + 1 < n; p++) {
            for (std::size_t q = p + 1; q < n; q++) {
                const double mag = std::abs(a(p, q));
                if (mag == 0) {
                    continue;
                }
                // Rotation G = D * J: D rephases column q so that a(p, q) becomes real
                // positive, J is the real Jacobi rotation annihilating it.
                const Complex phase = a(p, q) / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2 * mag);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1);
                const double s = t * c;
                const Complex gpp = c;
                const Complex gpq = s;
                const Complex gqp = -s * std::conj(phase);
                const Complex gqq = c * std::conj(phase);

                for (std::size_t k = 0; k < n; k++) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = akp * gpp + akq * gqp;
                    a(k, q) = akp * gpq + akq * gqq;
                }
                for (std::size_t k = 0; k < n; k++) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
                    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
                }
                for (std::size_t k = 0; k < n; k++) {
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = vkp * gpp + vkq * gqp;
                    v(k, q) = vkp * gpq + vkq * gqq;
                }
                a(p, q) = 0;
                a(q, p) = 0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t k = 0; k < n; k++) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; r++) {
            out.eigenvectors(r, k) = v(r, order[k]);
        }
    }
    return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix &h) {
    if (h.rows() == 2 && h.cols() == 2) {
        // Closed form; the hot path of every conditional-entropy evaluation.
        const double defect = h.max_abs_diff(h.adjoint());
        if (defect > 1e-9 * std::max(1.0, h.frobenius_norm())) {
            throw Error("hermitian_eigenvalues: matrix is not Hermitian");
        }
        const double a = h(0, 0).real();
        const double d = h(1, 1).real();
        const Complex b = 0.5 * (h(0, 1) + std::conj(h(1, 0)));
        const double mean = 0.5 * (a + d);
        const double rad = std::hypot(0.5 * (a - d), std::abs(b));
        return {mean - rad, mean + rad};
    }
    return hermitian_eig(h).eigenvalues;
}

double spectrum_entropy(std::span<const double> eigenvalues) {
    double s = 0;
    for (double lambda : eigenvalues) {
        if (lambda < -kEntropyReject) {
            std::ostringstream ss;
            ss << "entropy: matrix is not positive semidefinite (eigenvalue " << lambda << ")";
            throw Error(ss.str());
        }
        // Round-off negatives (a few 1e-16 for a healthy eigensolve) count as 0.
        s += plogp(lambda);
    }
    return s;
}

double von_neumann_entropy(const ComplexMatrix &rho) {
    const auto ev = hermitian_eigenvalues(rho);
    return spectrum_entropy(ev);
}

double binary_entropy(double x) {
    if (x < -1e-12 || x > 1 + 1e-12 || std::isnan(x)) {
        std::ostringstream ss;
        ss << "binary_entropy: argument " << x << " outside [0, 1]";
        throw Error(ss.str());
    }
    x = std::clamp(x, 0.0, 1.0);
    return plogp(x) + plogp(1 - x);
}

double shannon_entropy(std::span<const double> p) {
    double total = 0;
    for (double v : p) {
        if (v < -1e-12 || std::isnan(v)) {
            throw Error("shannon_entropy: negative probability");
        }
        total += v;
    }
    if (std::abs(total - 1) > 1e-9) {
        std::ostringstream ss;
        ss << "shannon_entropy: probabilities sum to " << total;
        throw Error(ss.str());
    }
    double s = 0;
    for (double v : p) {
        s += plogp(std::max(v, 0.0));
    }
    return s;
}

ValidityReport is_density_matrix(const ComplexMatrix &m, double tol) {
    if (!m.is_square()) {
        throw Error("is_density_matrix: matrix is not square");
    }
    ValidityReport r;
    r.hermiticity_defect = m.max_abs_diff(m.adjoint());
    r.trace_defect = std::abs(m.trace() - Complex(1));
    // The eigensolver refuses non-Hermitian input, so take the Hermitian part.
    ComplexMatrix herm = m + m.adjoint();
    herm *= 0.5;
    r.min_eigenvalue = hermitian_eig(herm).eigenvalues.front();
    r.valid = r.hermiticity_defect <= tol && r.trace_defect <= tol && r.min_eigenvalue >= -tol;
    return r;
}

std::string ValidityReport::describe() const {
    std::ostringstream ss;
    ss << "hermiticity defect " << hermiticity_defect << ", trace defect " << trace_defect
       << ", minimum eigenvalue " << min_eigenvalue << (valid ? " (valid)" : " (invalid)");
    return ss.str();
}

}  // namespace qdisc
