#include "qdisc/measurement.hpp"

#include <cmath>
#include <sstream>

namespace qdisc {

namespace {

constexpr double kNegligibleProbability = 1e-12;

ComplexMatrix lift_to_b(const ComplexMatrix &pi, std::size_t dim_a) {
    return kron(ComplexMatrix::identity(dim_a), pi);
}

void require_qubit_b(Dims dims, const char *what) {
    if (dims.b != 2) {
        std::ostringstream ss;
        ss << what << ": subsystem B must be a qubit (got dimension " << dims.b << ")";
        throw Error(ss.str());
    }
}

}  // namespace

VonNeumannMeasurement::VonNeumannMeasurement(double r, double y1, double y2, double y3) {
    const double n = std::sqrt(r * r + y1 * y1 + y2 * y2 + y3 * y3);
    if (!(n > 1e-300) || !std::isfinite(n)) {
        throw Error("VonNeumannMeasurement: parameter vector must be nonzero and finite");
    }
    params_ = {r / n, y1 / n, y2 / n, y3 / n};
}

VonNeumannMeasurement VonNeumannMeasurement::from_angles(const Vec3 &a) {
    const double s1 = std::sin(a[0]);
    const double s2 = std::sin(a[1]);
    return {std::cos(a[0]), s1 * std::cos(a[1]), s1 * s2 * std::cos(a[2]),
            s1 * s2 * std::sin(a[2])};
}

VonNeumannMeasurement VonNeumannMeasurement::from_axis_angle(double theta, const Vec3 &axis) {
    const double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    if (!(n > 0)) {
        throw Error("from_axis_angle: zero rotation axis");
    }
    const double s = -std::sin(theta / 2) / n;
    return {std::cos(theta / 2), s * axis[0], s * axis[1], s * axis[2]};
}

VonNeumannMeasurement VonNeumannMeasurement::from_bloch_direction(const Vec3 &d) {
    const double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    if (!(n > 0)) {
        throw Error("from_bloch_direction: zero direction");
    }
    // V|0> = (cos(t/2), e^{i f} sin(t/2)) with V|0> = (r + i y3, i y1 - y2) and y3 = 0.
    const double polar = std::acos(std::clamp(d[2] / n, -1.0, 1.0));
    const double azimuth = std::atan2(d[1], d[0]);
    const double sh = std::sin(polar / 2);
    return {std::cos(polar / 2), sh * std::sin(azimuth), -sh * std::cos(azimuth), 0};
}

Vec3 VonNeumannMeasurement::angles() const {
    const auto &[r, y1, y2, y3] = params_;
    return {std::acos(std::clamp(r, -1.0, 1.0)), std::atan2(std::hypot(y2, y3), y1),
            std::atan2(y3, y2)};
}

ComplexMatrix VonNeumannMeasurement::unitary() const {
    const auto &[r, y1, y2, y3] = params_;
    const Complex i(0, 1);
    return {{r + i * y3, i * y1 + y2}, {i * y1 - y2, r - i * y3}};
}

Vec3 VonNeumannMeasurement::bloch_direction() const {
    const auto v = unitary();
    const auto rotated = v * pauli::z() * v.adjoint();
    Vec3 z{};
    for (int k = 0; k < 3; k++) {
        z[k] = 0.5 * (pauli::by_index(k) * rotated).trace().real();
    }
    return z;
}

ProjectorPair projectors_from_unitary(const ComplexMatrix &u) {
    if (u.rows() != 2 || u.cols() != 2) {
        throw Error("projectors_from_unitary: expected a 2x2 unitary");
    }
    ProjectorPair p{ComplexMatrix(2, 2), ComplexMatrix(2, 2)};
    for (int r = 0; r < 2; r++) {
        for (int c = 0; c < 2; c++) {
            p.pi0(r, c) = u(r, 0) * std::conj(u(c, 0));
            p.pi1(r, c) = u(r, 1) * std::conj(u(c, 1));
        }
    }
    return p;
}

ProjectorPair projectors(const VonNeumannMeasurement &meas) {
    return projectors_from_unitary(meas.unitary());
}

MeasurementEnsemble apply_measurement(const DensityMatrix &rho, const ProjectorPair &p) {
    require_qubit_b(rho.dims(), "apply_measurement");
    MeasurementEnsemble ens;
    for (const auto *pi : {&p.pi0, &p.pi1}) {
        const auto k = lift_to_b(*pi, rho.dims().a);
        ComplexMatrix post = k * rho.matrix() * k;
        const double prob = post.trace().real();
        MeasurementOutcome out{std::max(prob, 0.0), std::nullopt};
        if (prob >= kNegligibleProbability) {
            post *= 1 / prob;
            out.state.emplace(std::move(post), rho.dims());
        }
        ens.outcomes.push_back(std::move(out));
    }
    return ens;
}

double conditional_entropy(const DensityMatrix &rho, const ProjectorPair &p) {
    require_qubit_b(rho.dims(), "conditional_entropy");
    const std::size_t m = rho.dims().a;
    const auto &mat = rho.matrix();
    double total = 0;
    for (const auto *pi : {&p.pi0, &p.pi1}) {
        // A-marginal of (I x Pi) rho (I x Pi): sum_{k,l} Pi_lk rho_{(i,k),(j,l)}.
        ComplexMatrix marginal(m, m);
        for (std::size_t i = 0; i < m; i++) {
            for (std::size_t j = 0; j < m; j++) {
                Complex s = 0;
                for (std::size_t k = 0; k < 2; k++) {
                    for (std::size_t l = 0; l < 2; l++) {
                        s += (*pi)(l, k) * mat(i * 2 + k, j * 2 + l);
                    }
                }
                marginal(i, j) = s;
            }
        }
        const double prob = marginal.trace().real();
        if (prob < kNegligibleProbability) {
            continue;
        }
        marginal *= 1 / prob;
        total += prob * von_neumann_entropy(marginal);
    }
    return total;
}

double conditional_entropy(const DensityMatrix &rho, const VonNeumannMeasurement &meas) {
    return conditional_entropy(rho, projectors(meas));
}

double bell_xi(const Vec3 &omega, const Vec3 &z) {
    double s = 0;
    for (int i = 0; i < 3; i++) {
        s += omega[i] * omega[i] * z[i] * z[i];
    }
    return std::sqrt(s);
}

double bell_conditional_entropy(const Vec3 &omega, const VonNeumannMeasurement &meas) {
    const double xi = std::min(bell_xi(omega, meas.bloch_direction()), 1.0);
    return binary_entropy(0.5 * (1 + xi));
}

std::vector<SuperopOutcome> apply_superop_vectorized(const VectorizedState &v, Dims dims,
                                                     const ProjectorPair &p) {
    require_qubit_b(dims, "apply_superop_vectorized");
    const std::size_t d = dims.total();
    if (v.amplitudes.size() != d * d) {
        throw Error("apply_superop_vectorized: vector length does not match dims");
    }
    const ComplexMatrix column(d * d, 1, v.amplitudes);
    std::vector<SuperopOutcome> out;
    for (const auto *pi : {&p.pi0, &p.pi1}) {
        const auto k = lift_to_b(*pi, dims.a);
        const auto image = kron(k, k.transpose()) * column;
        SuperopOutcome o;
        double sq = 0;
        Complex tr = 0;
        for (std::size_t i = 0; i < d * d; i++) {
            sq += std::norm(image(i, 0));
        }
        for (std::size_t i = 0; i < d; i++) {
            tr += image(i * d + i, 0);
        }
        o.squared_norm = sq;
        o.probability = tr.real() * v.norm;
        const double image_norm = std::sqrt(sq);
        o.image.norm = image_norm * v.norm;
        o.image.amplitudes.assign(image.data().begin(), image.data().end());
        if (image_norm > 0) {
            for (auto &x : o.image.amplitudes) {
                x /= image_norm;
            }
        }
        out.push_back(std::move(o));
    }
    return out;
}

}  // namespace qdisc
