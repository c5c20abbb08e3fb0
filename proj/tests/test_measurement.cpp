#include <cmath>
#include <random>

#include "doctest.h"
#include "qdisc/measurement.hpp"
#include "qdisc/states.hpp"
#include "test_helpers.hpp"

using namespace qdisc;

namespace {

Vec3 random_angles(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(0, 2 * M_PI);
    return {u(rng), u(rng), u(rng)};
}

Vec3 random_omega(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    while (true) {
        const Vec3 w{u(rng), u(rng), u(rng)};
        // Bell weights (1 - w1 - w2 - w3)/4 and permutations must be non-negative.
        if (1 - w[0] - w[1] - w[2] >= 0 && 1 - w[0] + w[1] + w[2] >= 0 &&
            1 + w[0] - w[1] + w[2] >= 0 && 1 + w[0] + w[1] - w[2] >= 0) {
            return w;
        }
    }
}

DensityMatrix random_two_qubit(std::mt19937_64 &rng) {
    return DensityMatrix(qdisc::testing::random_density(4, rng), {2, 2});
}

}  // namespace

TEST_CASE("measurement parameterization") {
    const auto id = VonNeumannMeasurement::from_angles({0, 0, 0});
    CHECK(id.params() == std::array<double, 4>{1, 0, 0, 0});

    const auto m = VonNeumannMeasurement::from_angles({M_PI / 2, M_PI / 2, M_PI / 2});
    CHECK(std::abs(m.r()) < 1e-15);
    CHECK(std::abs(m.y()[0]) < 1e-15);
    CHECK(std::abs(m.y()[1]) < 1e-15);
    CHECK(std::abs(m.y()[2] - 1) < 1e-15);

    // Normalization of arbitrary input.
    const VonNeumannMeasurement n(2, 0, 0, 0);
    CHECK(n.r() == 1);
    CHECK_THROWS_AS(VonNeumannMeasurement(0, 0, 0, 0), Error);

    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; t++) {
        const auto a = VonNeumannMeasurement::from_angles(random_angles(rng));
        const auto b = VonNeumannMeasurement::from_angles(a.angles());
        for (int k = 0; k < 4; k++) {
            CHECK(std::abs(a.params()[k] - b.params()[k]) < 1e-12);
        }
        const auto u = a.unitary();
        CHECK((u * u.adjoint()).max_abs_diff(ComplexMatrix::identity(2)) < 1e-14);
        CHECK(std::abs(u.trace() - Complex(2 * a.r())) < 1e-15);
    }
}

TEST_CASE("axis-angle and Bloch direction constructors") {
    // exp(-i pi sx / 2) = -i sx flips |0> to |1>.
    const auto flip = VonNeumannMeasurement::from_axis_angle(M_PI, {1, 0, 0});
    const auto z = flip.bloch_direction();
    CHECK(std::abs(z[2] + 1) < 1e-15);

    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int t = 0; t < 100; t++) {
        Vec3 n{g(rng), g(rng), g(rng)};
        const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
        for (auto &x : n) {
            x /= len;
        }
        const auto d = VonNeumannMeasurement::from_bloch_direction(n).bloch_direction();
        for (int k = 0; k < 3; k++) {
            CHECK(std::abs(d[k] - n[k]) < 1e-12);
        }
        const auto p = projectors(VonNeumannMeasurement::from_bloch_direction(n));
        CHECK(p.pi0.max_abs_diff(qdisc::testing::bloch_projector(n[0], n[1], n[2])) < 1e-12);
    }
    CHECK_THROWS_AS(VonNeumannMeasurement::from_bloch_direction({0, 0, 0}), Error);
}

TEST_CASE("Bloch direction polynomial matches conjugation") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; t++) {
        const auto m = VonNeumannMeasurement::from_angles(random_angles(rng));
        const double r = m.r();
        const auto [y1, y2, y3] = m.y();
        const Vec3 poly{2 * (y1 * y3 - r * y2), 2 * (r * y1 + y2 * y3),
                        r * r + y3 * y3 - y1 * y1 - y2 * y2};
        const auto z = m.bloch_direction();
        CHECK(std::abs(z[0] * z[0] + z[1] * z[1] + z[2] * z[2] - 1) < 1e-14);
        for (int k = 0; k < 3; k++) {
            CHECK(std::abs(z[k] - poly[k]) < 1e-14);
        }
    }
}

TEST_CASE("projector properties") {
    std::mt19937_64 rng(13);
    const auto id = ComplexMatrix::identity(2);
    for (int t = 0; t < 100; t++) {
        const auto p = projectors(VonNeumannMeasurement::from_angles(random_angles(rng)));
        CHECK((p.pi0 * p.pi0).max_abs_diff(p.pi0) < 1e-14);
        CHECK((p.pi1 * p.pi1).max_abs_diff(p.pi1) < 1e-14);
        CHECK((p.pi0 * p.pi1).frobenius_norm() < 1e-14);
        CHECK((p.pi0 + p.pi1).max_abs_diff(id) < 1e-14);
        CHECK(p.pi0.max_abs_diff(p.pi0.adjoint()) < 1e-15);
        CHECK(std::abs(p.pi0.trace() - Complex(1)) < 1e-14);
    }
}

TEST_CASE("global phase does not change projectors") {
    std::mt19937_64 rng(19);
    for (int t = 0; t < 50; t++) {
        const auto u = qdisc::testing::random_unitary(2, rng);
        const auto a = projectors_from_unitary(u);
        const auto b = projectors_from_unitary(u * std::polar(1.0, 0.3 + t));
        CHECK(a.pi0.max_abs_diff(b.pi0) < 1e-14);
        CHECK(a.pi1.max_abs_diff(b.pi1) < 1e-14);
    }
}

TEST_CASE("measurement ensembles") {
    const auto w = werner(0.6);
    std::mt19937_64 rng(23);
    for (int t = 0; t < 20; t++) {
        const auto ens =
            apply_measurement(w, projectors(VonNeumannMeasurement::from_angles(random_angles(rng))));
        REQUIRE(ens.outcomes.size() == 2);
        for (const auto &o : ens.outcomes) {
            CHECK(std::abs(o.probability - 0.5) < 1e-13);
            REQUIRE(o.state.has_value());
            CHECK(std::abs(o.state->matrix().trace() - Complex(1)) < 1e-13);
        }
    }

    // |00> measured in the computational basis: outcome 1 never happens.
    ComplexMatrix zz(4, 4);
    zz(0, 0) = 1;
    const auto ens = apply_measurement(DensityMatrix(zz, {2, 2}), projectors(VonNeumannMeasurement()));
    CHECK(ens.outcomes[0].probability == 1);
    CHECK(ens.outcomes[1].probability == 0);
    CHECK_FALSE(ens.outcomes[1].state.has_value());

    CHECK_THROWS_AS(apply_measurement(DensityMatrix(ComplexMatrix::identity(6) * Complex(1.0 / 6),
                                                    {2, 3}),
                                      projectors(VonNeumannMeasurement())),
                    Error);
}

TEST_CASE("conditional entropy examples") {
    // Product state: measuring B leaves rho_A untouched.
    std::mt19937_64 rng(29);
    for (int t = 0; t < 20; t++) {
        const auto ra = qdisc::testing::random_density(2, rng);
        const auto rb = qdisc::testing::random_density(2, rng);
        const DensityMatrix prod(kron(ra, rb), {2, 2});
        const auto m = VonNeumannMeasurement::from_angles(random_angles(rng));
        CHECK(std::abs(conditional_entropy(prod, m) - von_neumann_entropy(ra)) < 1e-12);
    }
    // Werner(a): every projective measurement leaves h((1 + a)/2).
    for (double a : {0.0, 0.3, 0.7, 1.0}) {
        const auto w = werner(a);
        for (int t = 0; t < 10; t++) {
            const auto m = VonNeumannMeasurement::from_angles(random_angles(rng));
            CHECK(std::abs(conditional_entropy(w, m) - binary_entropy((1 + a) / 2)) < 1e-10);
        }
    }
    // Qutrit A: a product with I/3 gives log2(3).
    const DensityMatrix qutrit(kron(ComplexMatrix::identity(3) * Complex(1.0 / 3),
                                    ComplexMatrix{{1, 0}, {0, 0}}),
                               {3, 2});
    CHECK(std::abs(conditional_entropy(qutrit, VonNeumannMeasurement()) - std::log2(3.0)) <
          1e-12);
}

TEST_CASE("marginal route agrees with full post-measurement states") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 100; t++) {
        const auto rho = random_two_qubit(rng);
        const auto m = VonNeumannMeasurement::from_angles(random_angles(rng));
        const auto z = m.bloch_direction();
        const double full = qdisc::testing::conditional_entropy_full(rho.matrix(), z[0], z[1], z[2]);
        CHECK(std::abs(conditional_entropy(rho, m) - full) < 1e-10);
    }
}

TEST_CASE("Bell-diagonal closed form agrees with the general route") {
    std::mt19937_64 rng(37);
    for (int t = 0; t < 100; t++) {
        const auto omega = random_omega(rng);
        const auto rho = bell_diagonal(omega);
        const auto m = VonNeumannMeasurement::from_angles(random_angles(rng));
        CHECK(std::abs(bell_conditional_entropy(omega, m) - conditional_entropy(rho, m)) < 1e-9);
    }
    CHECK(bell_xi({0.9, 0.2, 0.1}, {1, 0, 0}) == doctest::Approx(0.9));
    CHECK(bell_xi({0.5, 0.5, 0.5}, {0.6, 0.8, 0}) == doctest::Approx(0.5));
}

TEST_CASE("vectorized superoperator agrees with direct measurement") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 50; t++) {
        const auto rho = random_two_qubit(rng);
        const auto p = projectors(VonNeumannMeasurement::from_angles(random_angles(rng)));
        const auto v = vectorize(rho.matrix());
        const auto sup = apply_superop_vectorized(v, rho.dims(), p);
        REQUIRE(sup.size() == 2);
        double total = 0;
        for (int j = 0; j < 2; j++) {
            const auto &pi = j == 0 ? p.pi0 : p.pi1;
            const auto k = kron(ComplexMatrix::identity(2), pi);
            const auto direct = k * rho.matrix() * k;
            CHECK(std::abs(sup[j].probability - direct.trace().real()) < 1e-12);
            CHECK(devectorize(sup[j].image, 4).max_abs_diff(direct) < 1e-12);
            const double f = direct.frobenius_norm() / v.norm;
            CHECK(std::abs(sup[j].squared_norm - f * f) < 1e-12);
            total += sup[j].probability;
        }
        CHECK(std::abs(total - 1) < 1e-12);
    }
    CHECK_THROWS_AS(apply_superop_vectorized(vectorize(werner(0.2).matrix()), {2, 3},
                                             projectors(VonNeumannMeasurement())),
                    Error);
}
