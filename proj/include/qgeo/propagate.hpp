#pragma once

#include "qgeo/moments.hpp"
#include "qgeo/operators.hpp"
#include "qgeo/schedule.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgeo {

/// Speed threshold below which a ray is treated as stationary; the analytic
/// acceleration route divides by the speed and is undefined past this point.
constexpr double kZeroSpeedEpsilon = 1e-8;

struct TimeGrid {
    double horizon = 1.0;
    int n_steps = 4096;
    int stride = 1;

    TimeGrid() = default;

    TimeGrid(double horizon_, int n_steps_, int stride_ = 1)
        : horizon(horizon_), n_steps(n_steps_), stride(stride_) {
        detail::require(horizon > 0.0, "TimeGrid: horizon must be positive");
        detail::require(n_steps >= 1, "TimeGrid: n_steps must be positive");
        detail::require(stride >= 1, "TimeGrid: stride must be positive");
        detail::require(n_steps % stride == 0, "TimeGrid: stride must divide n_steps");
    }

    double dt() const { return horizon / n_steps; }
    double sample_dt() const { return dt() * stride; }
    int n_samples() const { return n_steps / stride + 1; }
};

enum class Method { midpoint_exponential, rk4 };

inline std::string method_name(Method method) {
    return method == Method::midpoint_exponential ? "midpoint-exponential" : "rk4";
}

inline Method method_from_name(const std::string& name) {
    if (name == "midpoint-exponential") return Method::midpoint_exponential;
    if (name == "rk4") return Method::rk4;
    throw std::invalid_argument("unknown method: " + name);
}

/// Geometric observables evaluated in the sampled state.
struct SampleObservables {
    double delta_h = 0.0;        // dH(t), energy units
    double delta_hdot = 0.0;     // d(dH/dt fluctuation), energy/time
    double speed = 0.0;          // (2/hbar) dH
    double cov_h_hdot = 0.0;     // Cov(H, Hdot)
    double comm_mean_abs = 0.0;  // |<[H, Hdot]>|
    std::optional<double> accel_analytic;  // absent at zero-speed points
    double accel_numeric = 0.0;  // filled from the sampled speed series
};

struct Trajectory {
    TimeGrid grid;
    double hbar = 1.0;
    std::vector<double> times;
    std::vector<QuantumState> states;
    std::vector<SampleObservables> samples;
};

namespace detail {

inline Vector apply_exponential(const Matrix& hermitian, double angle_scale, const Vector& psi) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian);
    const Vector coefficients = es.eigenvectors().adjoint() * psi;
    Vector phased(coefficients.size());
    for (int k = 0; k < coefficients.size(); ++k) {
        phased(k) = std::polar(1.0, angle_scale * es.eigenvalues()(k)) * coefficients(k);
    }
    return es.eigenvectors() * phased;
}

inline SampleObservables observables_at(const QuantumState& state,
                                        const HamiltonianSchedule& schedule, double t,
                                        double hbar) {
    SampleObservables obs;
    const HermitianOperator h = schedule.evaluate(t);
    const HermitianOperator hdot = schedule.derivative(t);
    obs.delta_h = std_dev(state, h);
    obs.delta_hdot = std_dev(state, hdot);
    obs.speed = 2.0 / hbar * obs.delta_h;
    obs.cov_h_hdot = covariance(state, h, hdot);
    obs.comm_mean_abs = commutator_mean_abs(state, h, hdot);
    if (obs.speed > kZeroSpeedEpsilon) {
        obs.accel_analytic = 4.0 / (hbar * hbar) * obs.cov_h_hdot / obs.speed;
    }
    return obs;
}

/// Second-order finite differences on a sampled series: central in the
/// interior, one-sided three-point stencils at the ends.
inline std::vector<double> differentiate_series(const std::vector<double>& values, double dt) {
    const int n = static_cast<int>(values.size());
    require(n >= 3, "differentiate_series: need at least 3 samples");
    std::vector<double> result(n);
    result[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * dt);
    for (int i = 1; i + 1 < n; ++i) {
        result[i] = (values[i + 1] - values[i - 1]) / (2.0 * dt);
    }
    result[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * dt);
    return result;
}

inline void fill_numeric_acceleration(Trajectory& trajectory) {
    if (trajectory.samples.size() < 3) {
        for (auto& s : trajectory.samples) {
            s.accel_numeric = s.accel_analytic.value_or(0.0);
        }
        return;
    }
    std::vector<double> speeds(trajectory.samples.size());
    for (std::size_t i = 0; i < speeds.size(); ++i) {
        speeds[i] = trajectory.samples[i].speed;
    }
    const std::vector<double> accel =
        differentiate_series(speeds, trajectory.grid.sample_dt());
    for (std::size_t i = 0; i < speeds.size(); ++i) {
        trajectory.samples[i].accel_numeric = accel[i];
    }
}

}  // namespace detail

/// Integrate i hbar dpsi/dt = H(t) psi over the grid, recording states and
/// observables every `stride` steps.
///
/// The default stepper applies exp(-i H(t + dt/2) dt / hbar) per step through
/// an eigendecomposition of the midpoint Hamiltonian: second-order accurate
/// and unitary to round-off. rk4 is kept as an independent cross-check and
/// renormalizes whenever the norm drifts beyond 1e-12.
inline Trajectory propagate(const HamiltonianSchedule& schedule, const QuantumState& psi0,
                            const TimeGrid& grid, Method method = Method::midpoint_exponential,
                            const Units& units = {}) {
    check_units(units);
    detail::require(schedule.dim() == psi0.dim(), "propagate: dimension mismatch");
    const double dt = grid.dt();
    const double hbar = units.hbar;

    Trajectory trajectory{grid, hbar, {}, {}, {}};
    trajectory.times.reserve(grid.n_samples());
    trajectory.states.reserve(grid.n_samples());
    trajectory.samples.reserve(grid.n_samples());

    Vector psi = psi0.amplitudes();
    for (int step = 0; step <= grid.n_steps; ++step) {
        const double t = step * dt;
        if (step % grid.stride == 0) {
            if (!psi.allFinite()) {
                throw std::runtime_error("propagate: non-finite amplitudes at step " +
                                         std::to_string(step));
            }
            // snapshots are stored exactly normalized; the marching state is
            // left untouched so integrator drift remains observable
            const QuantumState state(Vector(psi / psi.norm()));
            trajectory.times.push_back(t);
            trajectory.samples.push_back(detail::observables_at(state, schedule, t, hbar));
            trajectory.states.push_back(state);
        }
        if (step == grid.n_steps) {
            break;
        }
        if (method == Method::midpoint_exponential) {
            const Matrix h_mid = schedule.evaluate(t + 0.5 * dt).matrix();
            psi = detail::apply_exponential(h_mid, -dt / hbar, psi);
        } else {
            const auto rhs = [&](double time, const Vector& v) -> Vector {
                return Complex(0.0, -1.0 / hbar) * (schedule.evaluate(time).matrix() * v);
            };
            const Vector k1 = rhs(t, psi);
            const Vector k2 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k1);
            const Vector k3 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k2);
            const Vector k4 = rhs(t + dt, psi + dt * k3);
            psi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            const double norm = psi.norm();
            if (!std::isfinite(norm)) {
                throw std::runtime_error("propagate: non-finite amplitudes at step " +
                                         std::to_string(step + 1));
            }
            if (std::abs(norm - 1.0) > 1e-12) {
                psi /= norm;
            }
        }
    }
    detail::fill_numeric_acceleration(trajectory);
    return trajectory;
}

/// Exact propagator for commuting families: U(t) = exp(-(i/hbar) Phi(t)) with
/// Phi(t) the running integral of H, accumulated by per-step Simpson panels.
/// Exact up to quadrature error; the phase matrix is rediagonalized at each
/// sample because degenerate Phi(t) does not pin down a shared eigenbasis.
inline Trajectory propagate_commuting_oracle(const HamiltonianSchedule& schedule,
                                             const QuantumState& psi0, const TimeGrid& grid,
                                             const Units& units = {}) {
    check_units(units);
    detail::require(schedule.dim() == psi0.dim(),
                    "propagate_commuting_oracle: dimension mismatch");
    if (!schedule.commuting_family()) {
        throw std::invalid_argument(
            "propagate_commuting_oracle: schedule is not a commuting family");
    }
    const double dt = grid.dt();
    const double hbar = units.hbar;

    Trajectory trajectory{grid, hbar, {}, {}, {}};
    Matrix phase_integral = Matrix::Zero(schedule.dim(), schedule.dim());
    Matrix h_left = schedule.evaluate(0.0).matrix();

    for (int step = 0; step <= grid.n_steps; ++step) {
        const double t = step * dt;
        if (step % grid.stride == 0) {
            Vector psi = detail::apply_exponential(phase_integral, -1.0 / hbar,
                                                   psi0.amplitudes());
            psi /= psi.norm();
            const QuantumState state(std::move(psi));
            trajectory.times.push_back(t);
            trajectory.samples.push_back(detail::observables_at(state, schedule, t, hbar));
            trajectory.states.push_back(state);
        }
        if (step == grid.n_steps) {
            break;
        }
        const Matrix h_mid = schedule.evaluate(t + 0.5 * dt).matrix();
        const Matrix h_right = schedule.evaluate(t + dt).matrix();
        phase_integral += dt / 6.0 * (h_left + 4.0 * h_mid + h_right);
        h_left = h_right;
    }
    detail::fill_numeric_acceleration(trajectory);
    return trajectory;
}

namespace detail {

/// Ray distance measured as a phase-aligned vector difference. Unlike
/// sqrt(1 - |overlap|^2) this is linear in the error, so tiny errors are not
/// drowned in the square-root round-off floor.
inline double final_state_error(const Trajectory& run, const Trajectory& reference) {
    const Vector& psi = run.states.back().amplitudes();
    const Vector& ref = reference.states.back().amplitudes();
    const Complex overlap = ref.dot(psi);
    const Complex phase = (std::abs(overlap) > 0.0) ? overlap / std::abs(overlap)
                                                    : Complex(1.0, 0.0);
    return (psi - phase * ref).norm();
}

}  // namespace detail

/// Observed convergence order from end-state errors at n, 2n, 4n steps
/// against a reference (the commuting oracle when available, otherwise a much
/// finer midpoint-exponential run). Returns nullopt when the errors sit at
/// the round-off floor and no order can be measured (e.g. constant H).
inline std::optional<double> convergence_order(const HamiltonianSchedule& schedule,
                                               const QuantumState& psi0, double horizon,
                                               Method method = Method::midpoint_exponential,
                                               int base_steps = 32, const Units& units = {}) {
    const TimeGrid fine_grid(horizon, 128 * base_steps, 128 * base_steps);
    const Trajectory reference =
        schedule.commuting_family()
            ? propagate_commuting_oracle(schedule, psi0, fine_grid, units)
            : propagate(schedule, psi0, fine_grid, Method::midpoint_exponential, units);

    std::vector<double> errors;
    for (int factor : {1, 2, 4}) {
        const int n = base_steps * factor;
        const TimeGrid grid(horizon, n, n);
        errors.push_back(
            detail::final_state_error(propagate(schedule, psi0, grid, method, units), reference));
    }
    if (errors.back() < 1e-13) {
        return std::nullopt;  // at round-off floor: effectively exact
    }
    return 0.5 * std::log2(errors[0] / errors[2]);
}

}  // namespace qgeo
