#pragma once

#include "qgeo/operators.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace qgeo {

/// Real-valued schedule t -> value with its exact derivative. Used for the
/// drive strength J(t), the coupling lambda(t), and the interpolation s(t).
class ScalarSchedule {
public:
    ScalarSchedule(std::function<double(double)> f, std::function<double(double)> df,
                   std::string description)
        : f_(std::move(f)), df_(std::move(df)), description_(std::move(description)) {}

    double evaluate(double t) const { return f_(t); }
    double derivative(double t) const { return df_(t); }
    const std::string& description() const { return description_; }

private:
    std::function<double(double)> f_;
    std::function<double(double)> df_;
    std::string description_;
};

inline ScalarSchedule scalar_linear(double a, double b) {
    return ScalarSchedule([=](double t) { return a + b * t; }, [=](double) { return b; },
                          "linear");
}

inline ScalarSchedule scalar_quadratic(double a, double b, double c) {
    return ScalarSchedule([=](double t) { return a + b * t + c * t * t; },
                          [=](double t) { return b + 2.0 * c * t; }, "quadratic");
}

inline ScalarSchedule scalar_sine(double amplitude, double omega, double phase) {
    return ScalarSchedule([=](double t) { return amplitude * std::sin(omega * t + phase); },
                          [=](double t) { return amplitude * omega * std::cos(omega * t + phase); },
                          "sine");
}

/// s(t) = 1 - t/T, the default adiabatic interpolation.
inline ScalarSchedule scalar_adiabatic_ramp(double total_time) {
    return ScalarSchedule([=](double t) { return 1.0 - t / total_time; },
                          [=](double) { return -1.0 / total_time; }, "ramp");
}

namespace detail {

/// Natural cubic spline through strictly increasing knots. Evaluation outside
/// the knot range extends the boundary segment polynomial, which keeps
/// finite-difference probes slightly past the horizon well defined.
class CubicSpline {
public:
    CubicSpline(std::vector<double> xs, std::vector<double> ys)
        : xs_(std::move(xs)), ys_(std::move(ys)) {
        const int n = static_cast<int>(xs_.size());
        require(n >= 2, "CubicSpline: need at least two points");
        require(ys_.size() == xs_.size(), "CubicSpline: size mismatch");
        for (int i = 0; i + 1 < n; ++i) {
            require(xs_[i + 1] > xs_[i], "CubicSpline: abscissae must be strictly increasing");
        }
        second_ = solve_second_derivatives();
    }

    double value(double x) const {
        const int i = segment(x);
        const double h = xs_[i + 1] - xs_[i];
        const double a = (xs_[i + 1] - x) / h;
        const double b = (x - xs_[i]) / h;
        return a * ys_[i] + b * ys_[i + 1] +
               ((a * a * a - a) * second_[i] + (b * b * b - b) * second_[i + 1]) * h * h / 6.0;
    }

    double derivative(double x) const {
        const int i = segment(x);
        const double h = xs_[i + 1] - xs_[i];
        const double a = (xs_[i + 1] - x) / h;
        const double b = (x - xs_[i]) / h;
        return (ys_[i + 1] - ys_[i]) / h +
               ((3.0 * b * b - 1.0) * second_[i + 1] - (3.0 * a * a - 1.0) * second_[i]) * h / 6.0;
    }

private:
    int segment(double x) const {
        const int n = static_cast<int>(xs_.size());
        int lo = 0;
        int hi = n - 2;
        while (lo < hi) {
            const int mid = (lo + hi + 1) / 2;
            if (x >= xs_[mid]) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        return lo;
    }

    std::vector<double> solve_second_derivatives() const {
        const int n = static_cast<int>(xs_.size());
        std::vector<double> m(n, 0.0);
        if (n == 2) {
            return m;
        }
        // Thomas algorithm on the natural-spline tridiagonal system
        std::vector<double> diag(n - 2), upper(n - 2), rhs(n - 2);
        for (int i = 1; i <= n - 2; ++i) {
            const double h0 = xs_[i] - xs_[i - 1];
            const double h1 = xs_[i + 1] - xs_[i];
            diag[i - 1] = 2.0 * (h0 + h1);
            upper[i - 1] = h1;
            rhs[i - 1] =
                6.0 * ((ys_[i + 1] - ys_[i]) / h1 - (ys_[i] - ys_[i - 1]) / h0);
        }
        for (int i = 1; i < n - 2; ++i) {
            const double lower = xs_[i + 1] - xs_[i];
            const double w = lower / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        for (int i = n - 3; i >= 0; --i) {
            const double next = (i + 1 <= n - 3) ? m[i + 2] : 0.0;
            m[i + 1] = (rhs[i] - upper[i] * next) / diag[i];
        }
        return m;
    }

    std::vector<double> xs_;
    std::vector<double> ys_;
    std::vector<double> second_;
};

}  // namespace detail

/// Piecewise-cubic schedule through tabulated samples; the derivative is the
/// analytic derivative of the interpolant.
inline ScalarSchedule scalar_from_table(std::vector<double> times, std::vector<double> values,
                                        std::string description = "table") {
    auto spline = std::make_shared<detail::CubicSpline>(std::move(times), std::move(values));
    return ScalarSchedule([spline](double t) { return spline->value(t); },
                          [spline](double t) { return spline->derivative(t); },
                          std::move(description));
}

/// Two-column text format: "time value" per line, '#' starts a comment,
/// times strictly increasing.
inline ScalarSchedule load_scalar_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open table file: " + path);
    }
    std::vector<double> times;
    std::vector<double> values;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        double t = 0.0;
        double v = 0.0;
        if (!(fields >> t)) {
            continue;  // blank or comment-only line
        }
        if (!(fields >> v)) {
            throw std::runtime_error(path + ":" + std::to_string(line_number) +
                                     ": expected two columns (time value)");
        }
        double trailing;
        if (fields >> trailing) {
            throw std::runtime_error(path + ":" + std::to_string(line_number) +
                                     ": expected exactly two columns");
        }
        if (!times.empty() && t <= times.back()) {
            throw std::runtime_error(path + ":" + std::to_string(line_number) +
                                     ": times must be strictly increasing");
        }
        times.push_back(t);
        values.push_back(v);
    }
    if (times.size() < 2) {
        throw std::runtime_error(path + ": need at least two table rows");
    }
    return scalar_from_table(std::move(times), std::move(values), "table:" + path);
}

/// Sampled check that the schedule never decreases on [t0, t1]. Gates the
/// saturation claims that assume a nondecreasing coupling.
inline bool sampled_nondecreasing(const ScalarSchedule& schedule, double t0, double t1,
                                  int samples = 201) {
    for (int k = 0; k < samples; ++k) {
        const double t = t0 + (t1 - t0) * k / (samples - 1);
        if (schedule.derivative(t) < -1e-12) {
            return false;
        }
    }
    return true;
}

/// Time-parametrized Hamiltonian family H(t) with its derivative dH/dt.
/// Evaluation wraps results in HermitianOperator, so every sampled value is
/// re-validated and symmetrized.
class HamiltonianSchedule {
public:
    HamiltonianSchedule(int dim, double horizon, std::function<Matrix(double)> evaluate,
                        std::function<Matrix(double)> derivative, bool commuting_family,
                        std::string description)
        : dim_(dim),
          horizon_(horizon),
          evaluate_(std::move(evaluate)),
          derivative_(std::move(derivative)),
          commuting_family_(commuting_family),
          description_(std::move(description)) {
        detail::require(dim_ >= 1, "HamiltonianSchedule: dimension must be >= 1");
        detail::require(horizon_ > 0.0, "HamiltonianSchedule: horizon must be positive");
    }

    int dim() const { return dim_; }
    double horizon() const { return horizon_; }
    bool commuting_family() const { return commuting_family_; }
    const std::string& description() const { return description_; }

    HermitianOperator evaluate(double t) const { return HermitianOperator(evaluate_(t)); }
    HermitianOperator derivative(double t) const { return HermitianOperator(derivative_(t)); }

private:
    int dim_;
    double horizon_;
    std::function<Matrix(double)> evaluate_;
    std::function<Matrix(double)> derivative_;
    bool commuting_family_;
    std::string description_;
};

/// H(t) = lambda(t) H0. The family commutes with itself at all times.
inline HamiltonianSchedule make_linear_parametric(const ScalarSchedule& lambda,
                                                  const HermitianOperator& h0, double horizon) {
    const Matrix base = h0.matrix();
    return HamiltonianSchedule(
        h0.dim(), horizon, [lambda, base](double t) { return lambda.evaluate(t) * base; },
        [lambda, base](double t) { return lambda.derivative(t) * base; },
        /*commuting_family=*/true, "linear-parametric(" + lambda.description() + ")");
}

/// H(t) = J(t) sigma_x on a two-level system. The driven-atom convention has
/// J(0) = 0; a violation is reported on stderr but not rejected.
inline HamiltonianSchedule make_two_level_drive(const ScalarSchedule& j, double horizon) {
    if (std::abs(j.evaluate(0.0)) > 1e-12) {
        std::cerr << "qgeo: warning: two-level drive with J(0) = " << j.evaluate(0.0)
                  << " (expected J(0) = 0)\n";
    }
    const Matrix sx = pauli_x().matrix();
    return HamiltonianSchedule(
        2, horizon, [j, sx](double t) { return j.evaluate(t) * sx; },
        [j, sx](double t) { return j.derivative(t) * sx; },
        /*commuting_family=*/true, "two-level-drive(" + j.description() + ")");
}

inline HamiltonianSchedule make_constant(const HermitianOperator& h0, double horizon) {
    const Matrix base = h0.matrix();
    const int dim = h0.dim();
    return HamiltonianSchedule(
        dim, horizon, [base](double) { return base; },
        [dim](double) { return Matrix(Matrix::Zero(dim, dim)); },
        /*commuting_family=*/true, "constant");
}

/// H(t) = s(t) H_I + (1 - s(t)) H_F with s(0) = 1 and s(T) = 0.
inline HamiltonianSchedule make_adiabatic(const HermitianOperator& h_initial,
                                          const HermitianOperator& h_final, double total_time,
                                          const ScalarSchedule& s) {
    detail::require(h_initial.dim() == h_final.dim(), "make_adiabatic: dimension mismatch");
    detail::require(total_time > 0.0, "make_adiabatic: total time must be positive");
    if (std::abs(s.evaluate(0.0) - 1.0) > 1e-12 || std::abs(s.evaluate(total_time)) > 1e-12) {
        throw std::invalid_argument(
            "make_adiabatic: interpolation must satisfy s(0) = 1 and s(T) = 0; got s(0) = " +
            std::to_string(s.evaluate(0.0)) + ", s(T) = " + std::to_string(s.evaluate(total_time)));
    }
    const Matrix hi = h_initial.matrix();
    const Matrix hf = h_final.matrix();
    const double comm_scale = std::max(1.0, hi.norm() * hf.norm());
    const bool commuting = (hi * hf - hf * hi).norm() <= 1e-12 * comm_scale;
    return HamiltonianSchedule(
        h_initial.dim(), total_time,
        [s, hi, hf](double t) {
            const double st = s.evaluate(t);
            return Matrix(st * hi + (1.0 - st) * hf);
        },
        [s, hi, hf](double t) { return Matrix(s.derivative(t) * (hi - hf)); }, commuting,
        "adiabatic(" + s.description() + ")");
}

inline HamiltonianSchedule make_adiabatic(const HermitianOperator& h_initial,
                                          const HermitianOperator& h_final, double total_time) {
    return make_adiabatic(h_initial, h_final, total_time, scalar_adiabatic_ramp(total_time));
}

/// Central difference (H(t+h) - H(t-h)) / 2h, re-Hermitized by averaging with
/// the adjoint. Probes may reach slightly past [0, T].
inline HermitianOperator finite_difference_derivative(const HamiltonianSchedule& schedule,
                                                      double t, double h) {
    detail::require(h > 0.0, "finite_difference_derivative: h must be positive");
    const double margin = 0.01 * schedule.horizon();
    if (t - h < -margin || t + h > schedule.horizon() + margin) {
        throw std::domain_error("finite_difference_derivative: t +- h outside schedule domain");
    }
    const Matrix diff =
        (schedule.evaluate(t + h).matrix() - schedule.evaluate(t - h).matrix()) / (2.0 * h);
    return HermitianOperator(0.5 * (diff + diff.adjoint().eval()));
}

/// Max Frobenius norm of [H(t1), H(t2)] over deterministic low-discrepancy
/// sample pairs; ~0 for genuinely commuting families.
inline double max_pairwise_commutator(const HamiltonianSchedule& schedule, int pairs = 20) {
    constexpr double golden = 0.6180339887498949;
    double worst = 0.0;
    double x = 0.5;
    for (int k = 0; k < pairs; ++k) {
        x = std::fmod(x + golden, 1.0);
        const double t1 = schedule.horizon() * x;
        x = std::fmod(x + golden, 1.0);
        const double t2 = schedule.horizon() * x;
        const Matrix a = schedule.evaluate(t1).matrix();
        const Matrix b = schedule.evaluate(t2).matrix();
        worst = std::max(worst, (a * b - b * a).norm());
    }
    return worst;
}

}  // namespace qgeo
