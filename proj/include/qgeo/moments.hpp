#pragma once

#include "qgeo/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace qgeo {

namespace detail {

inline void require_dims(const QuantumState& state, const HermitianOperator& op,
                         const char* where) {
    require(state.dim() == op.dim(), std::string(where) + ": dimension mismatch");
}

}  // namespace detail

/// <A> = <psi|A|psi>. The imaginary residue of the complex computation must
/// stay below 1e-12 * scale; it is then discarded.
inline double expectation(const QuantumState& state, const HermitianOperator& op) {
    detail::require_dims(state, op, "expectation");
    const Complex value = state.amplitudes().dot(op.matrix() * state.amplitudes());
    const double scale = std::max(1.0, std::abs(value));
    if (std::abs(value.imag()) > 1e-12 * scale) {
        throw std::logic_error("expectation: imaginary residue " +
                               std::to_string(value.imag()) + " exceeds tolerance");
    }
    return value.real();
}

namespace detail {

/// Centered action (A - <A>)|psi>. Moments built from these residual vectors
/// stay relatively accurate for small fluctuations, where the textbook
/// <A^2> - <A>^2 form loses everything to cancellation.
inline Vector residual_vector(const QuantumState& state, const HermitianOperator& op) {
    const Vector applied = op.matrix() * state.amplitudes();
    const double mean = Complex(state.amplitudes().dot(applied)).real();
    return applied - mean * state.amplitudes();
}

}  // namespace detail

/// Delta A^2 = <A^2> - <A>^2, the squared fluctuation, computed as the
/// squared norm of the centered action. Round-off negatives in
/// [-1e-12*scale, 0) would be clamped to 0 so callers can take square roots;
/// the residual form is non-negative by construction.
inline double variance(const QuantumState& state, const HermitianOperator& op) {
    detail::require_dims(state, op, "variance");
    return detail::residual_vector(state, op).squaredNorm();
}

inline double std_dev(const QuantumState& state, const HermitianOperator& op) {
    return std::sqrt(variance(state, op));
}

/// Cov(A,B) = (1/2)<AB + BA> - <A><B>, symmetrized: the real part of the
/// residual-vector inner product. Cov(A,A) reproduces the variance exactly,
/// and the expression is symmetric in A, B by construction.
inline double covariance(const QuantumState& state, const HermitianOperator& a,
                         const HermitianOperator& b) {
    detail::require_dims(state, a, "covariance");
    detail::require_dims(state, b, "covariance");
    return Complex(detail::residual_vector(state, a).dot(detail::residual_vector(state, b)))
        .real();
}

/// |<[A,B]>|. For Hermitian A, B the commutator mean is purely imaginary;
/// computing it as 2i Im of the residual inner product makes that exact.
inline double commutator_mean_abs(const QuantumState& state, const HermitianOperator& a,
                                  const HermitianOperator& b) {
    detail::require_dims(state, a, "commutator_mean_abs");
    detail::require_dims(state, b, "commutator_mean_abs");
    return 2.0 * std::abs(
                     Complex(detail::residual_vector(state, a)
                                 .dot(detail::residual_vector(state, b)))
                         .imag());
}

}  // namespace qgeo
