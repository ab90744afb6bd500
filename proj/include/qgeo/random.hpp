#pragma once

#include "qgeo/operators.hpp"

#include <random>

namespace qgeo {

/// Deterministic seeded generators for the randomized property sweeps:
/// Haar-random states from normalized complex Gaussian vectors and GUE-style
/// Hermitian matrices A = (G + G^dagger)/2 with standard complex Gaussian
/// entries. The draw order is fixed, so a seed pins the whole ensemble.
class RandomEnsemble {
public:
    explicit RandomEnsemble(std::uint64_t seed) : rng_(seed) {}

    Complex complex_gaussian() {
        const double re = gauss_(rng_);
        const double im = gauss_(rng_);
        return Complex(re, im) / std::sqrt(2.0);
    }

    QuantumState haar_state(int dim) {
        Vector v(dim);
        for (int i = 0; i < dim; ++i) {
            v(i) = complex_gaussian();
        }
        return QuantumState::normalized(v);
    }

    HermitianOperator gue_hermitian(int dim) {
        Matrix g(dim, dim);
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                g(i, j) = complex_gaussian();
            }
        }
        return HermitianOperator(0.5 * (g + g.adjoint().eval()));
    }

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
};

}  // namespace qgeo
