#include "qdisc/su_basis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qdisc {

namespace {

constexpr double kImagTolerance = 1e-8;

double real_trace_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    // Tr(a b) without forming the product.
    Complex s = 0;
    for (std::size_t i = 0; i < a.rows(); i++) {
        for (std::size_t k = 0; k < a.cols(); k++) {
            s += a(i, k) * b(k, i);
        }
    }
    if (std::abs(s.imag()) > kImagTolerance) {
        std::ostringstream ss;
        ss << "decompose: coefficient has imaginary part " << s.imag()
           << " (input is not Hermitian)";
        throw Error(ss.str());
    }
    return s.real();
}

double det3(const Mat3 &m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Vec3 column(const Mat3 &m, int c) { return {m[0][c], m[1][c], m[2][c]}; }

void set_column(Mat3 &m, int c, const Vec3 &v) {
    for (int r = 0; r < 3; r++) {
        m[r][c] = v[r];
    }
}

double dot(const Vec3 &a, const Vec3 &b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3 &a, const Vec3 &b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec3 mat_vec(const Mat3 &m, const Vec3 &v) {
    Vec3 out{};
    for (int r = 0; r < 3; r++) {
        out[r] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2];
    }
    return out;
}

Mat3 transposed(const Mat3 &m) {
    Mat3 t{};
    for (int r = 0; r < 3; r++) {
        for (int c = 0; c < 3; c++) {
            t[r][c] = m[c][r];
        }
    }
    return t;
}

}  // namespace

GeneratorSet generators(std::size_t n) {
    if (n < 2) {
        throw Error("generators: dimension must be at least 2");
    }
    GeneratorSet set{n, {}};
    set.generators.reserve(n * n - 1);
    for (std::size_t j = 0; j < n; j++) {
        for (std::size_t k = j + 1; k < n; k++) {
            ComplexMatrix u(n, n);
            u(j, k) = 1;
            u(k, j) = 1;
            set.generators.push_back(std::move(u));
        }
    }
    for (std::size_t j = 0; j < n; j++) {
        for (std::size_t k = j + 1; k < n; k++) {
            ComplexMatrix v(n, n);
            v(j, k) = Complex(0, -1);
            v(k, j) = Complex(0, 1);
            set.generators.push_back(std::move(v));
        }
    }
    for (std::size_t l = 1; l < n; l++) {
        ComplexMatrix w(n, n);
        const double pref = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
        for (std::size_t i = 0; i < l; i++) {
            w(i, i) = pref;
        }
        w(l, l) = -pref * static_cast<double>(l);
        set.generators.push_back(std::move(w));
    }
    return set;
}

SuDecomposition decompose(const ComplexMatrix &rho, Dims dims) {
    const std::size_t m = dims.a;
    const std::size_t n = dims.b;
    if (rho.rows() != m * n || rho.cols() != m * n) {
        std::ostringstream ss;
        ss << "decompose: expected " << m * n << "x" << m * n << " matrix, got " << rho.rows()
           << "x" << rho.cols();
        throw Error(ss.str());
    }
    const auto ga = generators(m).generators;
    const auto gb = generators(n).generators;
    const auto ia = ComplexMatrix::identity(m);
    const auto ib = ComplexMatrix::identity(n);
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);

    SuDecomposition d{dims, {}, {}, RealMatrix(ga.size(), gb.size())};
    d.alpha.reserve(ga.size());
    d.beta.reserve(gb.size());
    for (const auto &g : ga) {
        d.alpha.push_back(0.5 * md * real_trace_product(rho, kron(g, ib)));
    }
    for (const auto &g : gb) {
        d.beta.push_back(0.5 * nd * real_trace_product(rho, kron(ia, g)));
    }
    for (std::size_t i = 0; i < ga.size(); i++) {
        for (std::size_t j = 0; j < gb.size(); j++) {
            d.corr(i, j) = 0.25 * md * nd * real_trace_product(rho, kron(ga[i], gb[j]));
        }
    }
    return d;
}

ComplexMatrix reconstruct(const SuDecomposition &d) {
    const std::size_t m = d.dims.a;
    const std::size_t n = d.dims.b;
    if (m < 2 || n < 2 || d.alpha.size() != m * m - 1 || d.beta.size() != n * n - 1 ||
        d.corr.rows != m * m - 1 || d.corr.cols != n * n - 1 ||
        d.corr.values.size() != d.corr.rows * d.corr.cols) {
        throw Error("reconstruct: coefficient lengths do not match dims");
    }
    const auto ga = generators(m).generators;
    const auto gb = generators(n).generators;
    const auto ia = ComplexMatrix::identity(m);
    const auto ib = ComplexMatrix::identity(n);

    ComplexMatrix rho = ComplexMatrix::identity(m * n);
    for (std::size_t i = 0; i < ga.size(); i++) {
        if (d.alpha[i] != 0) {
            rho += kron(ga[i], ib) * Complex(d.alpha[i]);
        }
    }
    for (std::size_t j = 0; j < gb.size(); j++) {
        if (d.beta[j] != 0) {
            rho += kron(ia, gb[j]) * Complex(d.beta[j]);
        }
    }
    for (std::size_t i = 0; i < ga.size(); i++) {
        for (std::size_t j = 0; j < gb.size(); j++) {
            if (d.corr(i, j) != 0) {
                rho += kron(ga[i], gb[j]) * Complex(d.corr(i, j));
            }
        }
    }
    rho *= 1.0 / static_cast<double>(m * n);
    return rho;
}

SignedSvd3 signed_svd3(const Mat3 &m) {
    // One-sided Jacobi: rotations from the right orthogonalize the columns of m, which
    // diagonalizes m^T m implicitly without squaring the condition number.
    Mat3 a = m;
    Mat3 v{};
    for (int k = 0; k < 3; k++) {
        v[k][k] = 1;
    }
    for (int sweep = 0; sweep < 60; sweep++) {
        bool rotated = false;
        for (int p = 0; p < 2; p++) {
            for (int q = p + 1; q < 3; q++) {
                const Vec3 cp = column(a, p);
                const Vec3 cq = column(a, q);
                const double alpha = dot(cp, cp);
                const double beta = dot(cq, cq);
                const double gamma = dot(cp, cq);
                if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) || gamma == 0) {
                    continue;
                }
                rotated = true;
                const double zeta = (beta - alpha) / (2 * gamma);
                const double t = (zeta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
                const double c = 1 / std::sqrt(1 + t * t);
                const double s = c * t;
                for (auto *mat : {&a, &v}) {
                    for (int r = 0; r < 3; r++) {
                        const double xp = (*mat)[r][p];
                        const double xq = (*mat)[r][q];
                        (*mat)[r][p] = c * xp - s * xq;
                        (*mat)[r][q] = s * xp + c * xq;
                    }
                }
            }
        }
        if (!rotated) {
            break;
        }
    }

    std::array<int, 3> order = {0, 1, 2};
    Vec3 norms{};
    for (int k = 0; k < 3; k++) {
        const Vec3 col = column(a, k);
        norms[k] = std::sqrt(dot(col, col));
    }
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return norms[x] > norms[y]; });

    SignedSvd3 out;
    Mat3 scaled{};
    for (int c = 0; c < 3; c++) {
        out.values[c] = norms[order[c]];
        set_column(out.right, c, column(v, order[c]));
        set_column(scaled, c, column(a, order[c]));
    }

    // Left vectors: u_k = m v_k / s_k for well-conditioned k, completed orthonormally otherwise.
    const double cutoff = 1e-12 * std::max(1.0, out.values[0]);
    int have = 0;
    for (int c = 0; c < 3; c++) {
        if (out.values[c] <= cutoff) {
            break;
        }
        Vec3 u = column(scaled, c);
        for (int p = 0; p < have; p++) {
            const Vec3 prev = column(out.left, p);
            const double proj = dot(u, prev);
            for (int r = 0; r < 3; r++) {
                u[r] -= proj * prev[r];
            }
        }
        const double nu = std::sqrt(dot(u, u));
        for (auto &x : u) {
            x /= nu;
        }
        set_column(out.left, c, u);
        have++;
    }
    for (int axis = 0; have < 3 && axis < 3; axis++) {
        Vec3 u{};
        if (have == 2) {
            u = cross(column(out.left, 0), column(out.left, 1));
        } else {
            u[axis] = 1;
            for (int p = 0; p < have; p++) {
                const Vec3 prev = column(out.left, p);
                const double proj = dot(u, prev);
                for (int r = 0; r < 3; r++) {
                    u[r] -= proj * prev[r];
                }
            }
        }
        const double nu = std::sqrt(dot(u, u));
        if (nu < 0.5) {
            continue;
        }
        for (auto &x : u) {
            x /= nu;
        }
        set_column(out.left, have, u);
        have++;
    }

    if (det3(out.right) < 0) {
        for (int r = 0; r < 3; r++) {
            out.right[r][2] = -out.right[r][2];
            out.left[r][2] = -out.left[r][2];
        }
    }
    if (det3(out.left) < 0) {
        for (int r = 0; r < 3; r++) {
            out.left[r][2] = -out.left[r][2];
        }
        out.values[2] = -out.values[2];
    }
    return out;
}

ComplexMatrix rotation_to_su2(const Mat3 &r) {
    // Unit quaternion (w, x, y, z) of the rotation; U = w I - i (x sx + y sy + z sz).
    double w;
    double x;
    double y;
    double z;
    const double tr = r[0][0] + r[1][1] + r[2][2];
    if (tr > 0) {
        const double s = 2 * std::sqrt(1 + tr);
        w = 0.25 * s;
        x = (r[2][1] - r[1][2]) / s;
        y = (r[0][2] - r[2][0]) / s;
        z = (r[1][0] - r[0][1]) / s;
    } else if (r[0][0] > r[1][1] && r[0][0] > r[2][2]) {
        const double s = 2 * std::sqrt(1 + r[0][0] - r[1][1] - r[2][2]);
        w = (r[2][1] - r[1][2]) / s;
        x = 0.25 * s;
        y = (r[0][1] + r[1][0]) / s;
        z = (r[0][2] + r[2][0]) / s;
    } else if (r[1][1] > r[2][2]) {
        const double s = 2 * std::sqrt(1 + r[1][1] - r[0][0] - r[2][2]);
        w = (r[0][2] - r[2][0]) / s;
        x = (r[0][1] + r[1][0]) / s;
        y = 0.25 * s;
        z = (r[1][2] + r[2][1]) / s;
    } else {
        const double s = 2 * std::sqrt(1 + r[2][2] - r[0][0] - r[1][1]);
        w = (r[1][0] - r[0][1]) / s;
        x = (r[0][2] + r[2][0]) / s;
        y = (r[1][2] + r[2][1]) / s;
        z = 0.25 * s;
    }
    const double norm = std::sqrt(w * w + x * x + y * y + z * z);
    w /= norm;
    x /= norm;
    y /= norm;
    z /= norm;
    const Complex i(0, 1);
    return {{w - i * z, -i * x - y}, {-i * x + y, w + i * z}};
}

TwoQubitCanonicalForm canonicalize_two_qubit(const ComplexMatrix &rho) {
    const auto d = decompose(rho, Dims{2, 2});
    Mat3 corr{};
    Vec3 alpha{};
    Vec3 beta{};
    for (int i = 0; i < 3; i++) {
        alpha[i] = d.alpha[i];
        beta[i] = d.beta[i];
        for (int j = 0; j < 3; j++) {
            corr[i][j] = d.corr(i, j);
        }
    }
    const auto svd = signed_svd3(corr);
    // corr -> R_a corr R_b^T with R_a = left^T, R_b = right^T gives diag(values).
    const Mat3 ra = transposed(svd.left);
    const Mat3 rb = transposed(svd.right);

    TwoQubitCanonicalForm out;
    out.omega = svd.values;
    out.u_a = rotation_to_su2(ra);
    out.u_b = rotation_to_su2(rb);
    out.residual_alpha = mat_vec(ra, alpha);
    out.residual_beta = mat_vec(rb, beta);
    return out;
}

}  // namespace qdisc
