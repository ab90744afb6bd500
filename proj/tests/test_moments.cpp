#include "qgeo/moments.hpp"
#include "qgeo/operators.hpp"

#include "support/oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace qgeo;

TEST_CASE("hermitian operator construction validates and symmetrizes", "[moments]") {
    Matrix good(2, 2);
    good << Complex(1, 0), Complex(0, -0.5), Complex(0, 0.5), Complex(-1, 0);
    REQUIRE_NOTHROW(HermitianOperator(good));

    Matrix bad(2, 2);
    bad << Complex(1, 0), Complex(0.2, 0), Complex(0.3, 0), Complex(-1, 0);
    REQUIRE_THROWS_AS(HermitianOperator(bad), std::invalid_argument);

    Matrix rect(2, 3);
    rect.setZero();
    REQUIRE_THROWS_AS(HermitianOperator(rect), std::invalid_argument);

    // zero matrix is a legal Hermitian operator (drive at t = 0)
    REQUIRE_NOTHROW(zero_operator(3));
}

TEST_CASE("quantum state construction enforces the norm", "[moments]") {
    Vector v(2);
    v << Complex(1, 0), Complex(0, 0);
    REQUIRE_NOTHROW(QuantumState(v));

    Vector unnormalized(2);
    unnormalized << Complex(1, 0), Complex(1, 0);
    REQUIRE_THROWS_AS(QuantumState(unnormalized), std::invalid_argument);
    REQUIRE_NOTHROW(QuantumState::normalized(unnormalized));

    REQUIRE_THROWS_AS(QuantumState::normalized(Vector::Zero(2)), std::invalid_argument);
}

TEST_CASE("expectation on eigenstates and rotated states", "[moments]") {
    const QuantumState zero = basis_state(2, 0);
    CHECK(expectation(zero, pauli_z()) == Catch::Approx(1.0).margin(1e-14));

    // cos(theta)|0> - i sin(theta)|1> has vanishing <sigma_x> for every theta
    for (double theta : {0.1, 0.7, 1.3, 2.9}) {
        Vector v(2);
        v << Complex(std::cos(theta), 0), Complex(0, -std::sin(theta));
        const QuantumState state(v);
        CHECK(std::abs(expectation(state, pauli_x())) <= 1e-14);
    }
}

TEST_CASE("expectation against brute-force summation", "[moments]") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        const Vector psi = oracles::random_state_vector(rng, 4);
        const Matrix m = oracles::random_hermitian_matrix(rng, 4);
        const double value = expectation(QuantumState(psi), HermitianOperator(m));
        const Complex ref = oracles::naive_expectation(psi, m);
        CHECK(std::abs(value - ref.real()) <= 1e-12);
        CHECK(std::abs(ref.imag()) <= 1e-12);
    }
}

TEST_CASE("expectation rejects dimension mismatch", "[moments]") {
    REQUIRE_THROWS_AS(expectation(basis_state(3, 0), pauli_z()), std::invalid_argument);
}

TEST_CASE("variance on eigenstates and the driven two-level state", "[moments]") {
    CHECK(variance(basis_state(2, 0), pauli_z()) == Catch::Approx(0.0).margin(1e-14));

    // state cos(theta)|0> - i sin(theta)|1>, A = J sigma_x with J = 0.5: dA^2 = J^2
    const double theta = 0.83;
    Vector v(2);
    v << Complex(std::cos(theta), 0), Complex(0, -std::sin(theta));
    const QuantumState state(v);
    const HermitianOperator a = 0.5 * pauli_x();
    CHECK(variance(state, a) == Catch::Approx(0.25).margin(1e-14));
}

TEST_CASE("variance against the spectral oracle", "[moments]") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 30; ++rep) {
        const Vector psi = oracles::random_state_vector(rng, 6);
        const Matrix m = oracles::random_hermitian_matrix(rng, 6);
        const double value = variance(QuantumState(psi), HermitianOperator(m));
        CHECK(value == Catch::Approx(oracles::spectral_variance(psi, m)).margin(1e-10));
    }
}

TEST_CASE("variance is zero exactly on eigenvectors", "[moments]") {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix m = oracles::random_hermitian_matrix(rng, 5);
        Eigen::SelfAdjointEigenSolver<Matrix> es(m);
        const QuantumState eigvec(es.eigenvectors().col(rep % 5).eval());
        const HermitianOperator op(m);
        const double var = variance(eigvec, op);
        CHECK(var >= 0.0);
        if (var <= 1e-16) {
            const double mean = expectation(eigvec, op);
            const double residual =
                (op.matrix() * eigvec.amplitudes() - mean * eigvec.amplitudes()).norm();
            CHECK(residual <= 1e-8);
        }
    }
}

TEST_CASE("covariance special cases and symmetry", "[moments]") {
    const QuantumState zero = basis_state(2, 0);
    CHECK(covariance(zero, pauli_x(), pauli_x()) == Catch::Approx(1.0).margin(1e-14));
    CHECK(covariance(zero, pauli_x(), pauli_x()) ==
          Catch::Approx(variance(zero, pauli_x())).margin(1e-14));
    CHECK(covariance(zero, pauli_x(), pauli_y()) == Catch::Approx(0.0).margin(1e-14));

    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 30; ++rep) {
        const Vector psi = oracles::random_state_vector(rng, 4);
        const Matrix a = oracles::random_hermitian_matrix(rng, 4);
        const Matrix b = oracles::random_hermitian_matrix(rng, 4);
        const QuantumState state(psi);
        const HermitianOperator oa(a);
        const HermitianOperator ob(b);
        const double cab = covariance(state, oa, ob);
        CHECK(cab == Catch::Approx(oracles::naive_covariance(psi, a, b)).margin(1e-12));
        CHECK(std::abs(cab - covariance(state, ob, oa)) <= 1e-14);
        CHECK(std::abs(covariance(state, oa, oa) - variance(state, oa)) <= 1e-14);
    }
}

TEST_CASE("commutator mean magnitude", "[moments]") {
    const QuantumState zero = basis_state(2, 0);
    CHECK(commutator_mean_abs(zero, pauli_x(), pauli_x()) == Catch::Approx(0.0).margin(1e-14));
    // [sigma_x, sigma_y] = 2i sigma_z, so |<...>| = 2 on |0>
    CHECK(commutator_mean_abs(zero, pauli_x(), pauli_y()) == Catch::Approx(2.0).margin(1e-14));

    std::mt19937_64 rng(19);
    for (int rep = 0; rep < 30; ++rep) {
        const Vector psi = oracles::random_state_vector(rng, 5);
        const Matrix a = oracles::random_hermitian_matrix(rng, 5);
        const Matrix b = oracles::random_hermitian_matrix(rng, 5);
        const Complex ref = oracles::naive_commutator_mean(psi, a, b);
        CHECK(std::abs(ref.real()) <= 1e-10);  // purely imaginary for Hermitian pairs
        const double value =
            commutator_mean_abs(QuantumState(psi), HermitianOperator(a), HermitianOperator(b));
        CHECK(value == Catch::Approx(std::abs(ref)).margin(1e-11));
    }
}
