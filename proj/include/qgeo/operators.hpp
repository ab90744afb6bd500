#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace qgeo {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Natural units by default: hbar = 1, energies in units of a reference E0.
struct Units {
    double hbar = 1.0;
};

inline void check_units(const Units& units) {
    if (!(units.hbar > 0.0)) {
        throw std::invalid_argument("Units: hbar must be positive");
    }
}

namespace detail {

inline void require(bool condition, const std::string& message) {
    if (!condition) {
        throw std::invalid_argument(message);
    }
}

}  // namespace detail

/// Dense complex Hermitian matrix (energy units). Hermiticity is validated
/// once at construction, with tolerance 1e-12 * max|entry|, and the stored
/// matrix is the symmetrized (M + M^dagger)/2 so downstream algebra can rely
/// on exact Hermiticity.
class HermitianOperator {
public:
    explicit HermitianOperator(Matrix m) {
        detail::require(m.rows() == m.cols(), "HermitianOperator: matrix must be square");
        detail::require(m.rows() >= 1, "HermitianOperator: dimension must be >= 1");
        const double scale = m.cwiseAbs().maxCoeff();
        const double residual = (m - m.adjoint()).cwiseAbs().maxCoeff();
        detail::require(residual <= 1e-12 * scale,
                        "HermitianOperator: matrix is not Hermitian (residual " +
                            std::to_string(residual) + ")");
        matrix_ = 0.5 * (m + m.adjoint().eval());
    }

    int dim() const { return static_cast<int>(matrix_.rows()); }
    const Matrix& matrix() const { return matrix_; }

    HermitianOperator operator+(const HermitianOperator& other) const {
        detail::require(dim() == other.dim(), "HermitianOperator: dimension mismatch in +");
        return HermitianOperator(matrix_ + other.matrix_);
    }
    HermitianOperator operator-(const HermitianOperator& other) const {
        detail::require(dim() == other.dim(), "HermitianOperator: dimension mismatch in -");
        return HermitianOperator(matrix_ - other.matrix_);
    }

private:
    Matrix matrix_;
};

inline HermitianOperator operator*(double scalar, const HermitianOperator& op) {
    return HermitianOperator(scalar * op.matrix());
}

/// [A, B] = AB - BA. Anti-Hermitian for Hermitian inputs, so it is returned
/// as a plain matrix rather than a HermitianOperator.
inline Matrix commutator(const HermitianOperator& a, const HermitianOperator& b) {
    detail::require(a.dim() == b.dim(), "commutator: dimension mismatch");
    return a.matrix() * b.matrix() - b.matrix() * a.matrix();
}

inline double frobenius_norm(const Matrix& m) { return m.norm(); }

/// Normalized pure state. The amplitude vector must have unit norm within
/// 1e-10; construction rejects anything else. States are immutable.
class QuantumState {
public:
    explicit QuantumState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
        detail::require(amplitudes_.size() >= 1, "QuantumState: dimension must be >= 1");
        const double norm = amplitudes_.norm();
        detail::require(std::abs(norm - 1.0) <= 1e-10,
                        "QuantumState: vector is not normalized (norm " +
                            std::to_string(norm) + ")");
    }

    /// Build a state from any nonzero vector by rescaling.
    static QuantumState normalized(const Vector& v) {
        const double norm = v.norm();
        detail::require(norm > 0.0, "QuantumState::normalized: zero vector");
        return QuantumState(v / norm);
    }

    int dim() const { return static_cast<int>(amplitudes_.size()); }
    const Vector& amplitudes() const { return amplitudes_; }

private:
    Vector amplitudes_;
};

inline QuantumState basis_state(int dim, int index) {
    detail::require(dim >= 1 && index >= 0 && index < dim, "basis_state: index out of range");
    Vector v = Vector::Zero(dim);
    v(index) = Complex(1.0, 0.0);
    return QuantumState(std::move(v));
}

inline HermitianOperator pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return HermitianOperator(m);
}

inline HermitianOperator pauli_y() {
    Matrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return HermitianOperator(m);
}

inline HermitianOperator pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return HermitianOperator(m);
}

inline HermitianOperator zero_operator(int dim) {
    return HermitianOperator(Matrix::Zero(dim, dim));
}

}  // namespace qgeo
