#pragma once

#include "qgeo/bounds.hpp"
#include "qgeo/geometry.hpp"
#include "qgeo/operators.hpp"
#include "qgeo/propagate.hpp"
#include "qgeo/schedule.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qgeo {

/// Interpolation sweep s(t) H_I + (1 - s(t)) H_F from the ground state of
/// H_I. The run-time certificates below are a-posteriori consistency checks
/// evaluated along a simulated trajectory, not predictive schedulers: the
/// per-sample averages need the evolved state, which needs a run.
struct AdiabaticSpec {
    HermitianOperator h_initial;
    HermitianOperator h_final;
    double total_time;
    ScalarSchedule s;
    bool linear_s;

    AdiabaticSpec(HermitianOperator hi, HermitianOperator hf, double t)
        : AdiabaticSpec(std::move(hi), std::move(hf), t, scalar_adiabatic_ramp(t)) {}

    AdiabaticSpec(HermitianOperator hi, HermitianOperator hf, double t, ScalarSchedule sched)
        : h_initial(std::move(hi)),
          h_final(std::move(hf)),
          total_time(t),
          s(std::move(sched)),
          linear_s(detect_linear(s, t)) {}

    HamiltonianSchedule schedule() const {
        return make_adiabatic(h_initial, h_final, total_time, s);
    }

private:
    static bool detect_linear(const ScalarSchedule& s, double t) {
        const double slope0 = s.derivative(0.0);
        for (int k = 0; k <= 16; ++k) {
            if (std::abs(s.derivative(t * k / 16.0) - slope0) > 1e-12) {
                return false;
            }
        }
        return true;
    }
};

/// Lowest eigenpair with the spectral gap E1 - E0. The eigenvector phase is
/// fixed by making its largest-magnitude amplitude real positive. A gap below
/// 1e-10 is a degenerate ground space and is rejected.
inline std::pair<QuantumState, double> ground_state(const HermitianOperator& h) {
    detail::require(h.dim() >= 2, "ground_state: need dimension >= 2 for a spectral gap");
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
    const double gap = es.eigenvalues()(1) - es.eigenvalues()(0);
    if (gap < 1e-10) {
        throw std::runtime_error("ground_state: degenerate ground space (gap " +
                                 std::to_string(gap) + ")");
    }
    Vector v = es.eigenvectors().col(0);
    int pivot = 0;
    for (int i = 1; i < v.size(); ++i) {
        if (std::abs(v(i)) > std::abs(v(pivot))) {
            pivot = i;
        }
    }
    v *= std::conj(v(pivot)) / std::abs(v(pivot));
    return {QuantumState(std::move(v)), gap};
}

/// Spectral gap E1(t) - E0(t) at each sampled time.
inline std::vector<double> gap_series(const AdiabaticSpec& spec, const TimeGrid& grid) {
    const HamiltonianSchedule schedule = spec.schedule();
    std::vector<double> gaps;
    gaps.reserve(grid.n_samples());
    for (int k = 0; k < grid.n_samples(); ++k) {
        const double t = k * grid.sample_dt();
        Eigen::SelfAdjointEigenSolver<Matrix> es(schedule.evaluate(t).matrix());
        gaps.push_back(es.eigenvalues()(1) - es.eigenvalues()(0));
    }
    return gaps;
}

/// Identity check: dHdot(t) = |sdot(t)| d(H_F - H_I) in the evolved state;
/// for the linear ramp this is the printed (1/T) form. The report carries the
/// maximum normalized deviation over the samples against rhs 1e-10.
inline BoundReport rate_fluctuation_identity_check(const AdiabaticSpec& spec,
                                                   const Trajectory& trajectory) {
    const HermitianOperator difference = spec.h_final - spec.h_initial;
    double worst = 0.0;
    for (std::size_t i = 0; i < trajectory.samples.size(); ++i) {
        const double t = trajectory.times[i];
        const double expected =
            std::abs(spec.s.derivative(t)) * std_dev(trajectory.states[i], difference);
        const double actual = trajectory.samples[i].delta_hdot;
        const double scale = std::max({std::abs(expected), std::abs(actual), 1.0});
        worst = std::max(worst, std::abs(actual - expected) / scale);
    }
    BoundReport report = make_bound_report("eq15", "", worst, 1e-10, 1e-10 - worst);
    report.note = spec.linear_s ? "linear ramp: (1/T) d(H_F - H_I) form"
                                : "generalized |sdot| d(H_F - H_I) form";
    return report;
}

/// Max deviation of [H(t), Hdot(t)] from -sdot(t) [H_I, H_F] over the sampled
/// times (Frobenius norm). For the linear ramp -sdot = 1/T.
inline double commutator_reduction_max_deviation(const AdiabaticSpec& spec,
                                                 const Trajectory& trajectory) {
    const HamiltonianSchedule schedule = spec.schedule();
    const Matrix comm_if = commutator(spec.h_initial, spec.h_final);
    double worst = 0.0;
    for (double t : trajectory.times) {
        const Matrix actual =
            commutator(schedule.evaluate(t), schedule.derivative(t));
        worst = std::max(worst, (actual + spec.s.derivative(t) * comm_if).norm());
    }
    return worst;
}

struct LowerCertificate {
    BoundReport report;
    int admissible = 0;
    int excluded_saturated = 0;
    std::vector<double> value_series;  // NaN where the sample is inadmissible
};

/// Run-time lower certificate: at each admissible sample
///   value(t) = |<[H_I, H_F]>| / (2 dH sqrt(dHdot^2 - hbar^2 a^2 / 4)),
/// all averages in the evolved state; the certificate is the max over the
/// samples and must not exceed the elapsed T. Near saturation the radicand
/// vanishes and the value diverges, so samples are excluded (and counted)
/// when the radicand falls below 1e-14 or below the round-off floor of the
/// moment arithmetic, which scales like dHdot^2 * ||H psi|| / dH.
inline LowerCertificate runtime_lower_certificate(const AdiabaticSpec& spec,
                                                  const Trajectory& trajectory) {
    constexpr double radicand_epsilon = 1e-14;
    const double hbar = trajectory.hbar;
    const double horizon = trajectory.times.back();
    LowerCertificate result;
    result.value_series.assign(trajectory.samples.size(), std::nan(""));

    const Matrix comm_if = commutator(spec.h_initial, spec.h_final);
    const double comm_scale =
        std::max(1.0, spec.h_initial.matrix().norm() * spec.h_final.matrix().norm());
    if (comm_if.norm() <= 1e-12 * comm_scale) {
        result.report = make_bound_report("eq14", "", 0.0, horizon, horizon);
        result.report.note = "commuting pair: certificate trivially zero";
        return result;
    }

    const HamiltonianSchedule schedule = spec.schedule();
    double certificate = 0.0;
    for (std::size_t i = 0; i < trajectory.samples.size(); ++i) {
        const SampleObservables& obs = trajectory.samples[i];
        const double accel = obs.accel_analytic ? *obs.accel_analytic : obs.accel_numeric;
        const double radicand =
            obs.delta_hdot * obs.delta_hdot - 0.25 * hbar * hbar * accel * accel;
        if (obs.delta_h <= 0.5 * kZeroSpeedEpsilon * hbar) {
            continue;
        }
        const Vector& psi = trajectory.states[i].amplitudes();
        const double h_scale =
            (schedule.evaluate(trajectory.times[i]).matrix() * psi).norm();
        const double noise_floor = 1e-9 * obs.delta_hdot * obs.delta_hdot *
                                   (1.0 + h_scale / obs.delta_h);
        if (radicand <= std::max(radicand_epsilon, noise_floor)) {
            ++result.excluded_saturated;
            continue;
        }
        const double comm_mean = std::abs(Complex(psi.dot(comm_if * psi)));
        const double value = comm_mean / (2.0 * obs.delta_h * std::sqrt(radicand));
        result.value_series[i] = value;
        certificate = std::max(certificate, value);
        ++result.admissible;
    }

    if (result.admissible == 0) {
        result.report = make_bound_report("eq14", "", 0.0, horizon, horizon);
        result.report.applicable = false;
        result.report.note = "certificate undefined (saturated everywhere)";
        return result;
    }
    result.report = make_bound_report("eq14", "", certificate, horizon, horizon - certificate);
    result.report.note = std::to_string(result.admissible) + " admissible samples, " +
                         std::to_string(result.excluded_saturated) + " excluded (saturated)";
    return result;
}

struct UpperCertificate {
    BoundReport report;
    std::vector<double> delta_h_initial;
    std::vector<double> delta_h_final;
};

/// Run-time upper certificate:
///   T <= (2/hbar) (1/V(T)) integral (dH_I(t) + dH_F(t)) dt,
/// with both fluctuations in the evolved state. Undefined when the final
/// state is stationary (V(T) below the zero-speed threshold).
inline UpperCertificate runtime_upper_certificate(const AdiabaticSpec& spec,
                                                  const Trajectory& trajectory) {
    const double hbar = trajectory.hbar;
    const double horizon = trajectory.times.back();
    UpperCertificate result;
    const std::size_t n = trajectory.samples.size();
    result.delta_h_initial.resize(n);
    result.delta_h_final.resize(n);
    std::vector<double> integrand(n);
    for (std::size_t i = 0; i < n; ++i) {
        result.delta_h_initial[i] = std_dev(trajectory.states[i], spec.h_initial);
        result.delta_h_final[i] = std_dev(trajectory.states[i], spec.h_final);
        integrand[i] = result.delta_h_initial[i] + result.delta_h_final[i];
    }
    const double v_final = trajectory.samples.back().speed;
    if (v_final <= kZeroSpeedEpsilon) {
        result.report = make_bound_report("eq16", "", horizon, 0.0, 0.0);
        result.report.applicable = false;
        result.report.note = "upper certificate undefined (final state stationary)";
        return result;
    }
    const double value = 2.0 / hbar / v_final *
                         detail::trapezoid(integrand, trajectory.grid.sample_dt());
    result.report = make_bound_report("eq16", "", horizon, value, value - horizon);
    return result;
}

/// The upper certificate divides by V(T), which can be tiny near adiabatic
/// returns; the floor keeps certificates stable to ~1e-4 under refinement.
inline int default_audit_steps(double total_time) {
    return std::max(8192, 256 * static_cast<int>(std::ceil(total_time)));
}

struct AuditOutcome {
    double total_time = 0.0;
    Trajectory trajectory;
    double fidelity = 0.0;  // |<E0(final)|psi(T)>|^2
    double min_gap = 0.0;
    std::vector<double> gaps;
    LowerCertificate lower;
    UpperCertificate upper;
    BoundReport rate_identity;
    double commutator_reduction_max = 0.0;
    BoundReport sum_uncertainty_worst;
    QalTimeReport qal;
};

/// Full audit: simulate from the ground state of H_I and evaluate every
/// certificate, identity, and diagnostic along the run.
inline AuditOutcome run_audit(const AdiabaticSpec& spec, int n_steps = 0, int stride = 1,
                              Method method = Method::midpoint_exponential,
                              const Units& units = {}) {
    if (n_steps == 0) {
        n_steps = default_audit_steps(spec.total_time);
    }
    const TimeGrid grid(spec.total_time, n_steps, stride);
    const HamiltonianSchedule schedule = spec.schedule();
    const QuantumState psi0 = ground_state(spec.h_initial).first;

    AuditOutcome outcome;
    outcome.total_time = spec.total_time;
    outcome.trajectory = propagate(schedule, psi0, grid, method, units);
    outcome.gaps = gap_series(spec, grid);
    outcome.min_gap = *std::min_element(outcome.gaps.begin(), outcome.gaps.end());
    outcome.fidelity = std::norm(ground_state(spec.h_final)
                                     .first.amplitudes()
                                     .dot(outcome.trajectory.states.back().amplitudes()));
    outcome.lower = runtime_lower_certificate(spec, outcome.trajectory);
    outcome.upper = runtime_upper_certificate(spec, outcome.trajectory);
    outcome.rate_identity = rate_fluctuation_identity_check(spec, outcome.trajectory);
    outcome.commutator_reduction_max =
        commutator_reduction_max_deviation(spec, outcome.trajectory);
    outcome.qal = qal_time_report(outcome.trajectory);

    BoundReport worst_sum;
    double worst_slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < outcome.trajectory.states.size(); ++i) {
        BoundReport report = check_sum_uncertainty(outcome.trajectory.states[i], spec.h_final,
                                                   spec.h_initial,
                                                   "t=" + std::to_string(outcome.trajectory.times[i]));
        const double ns = normalized_slack(report);
        if (ns < worst_slack) {
            worst_slack = ns;
            worst_sum = std::move(report);
        }
    }
    outcome.sum_uncertainty_worst = std::move(worst_sum);
    return outcome;
}

/// Final-state fidelity to the ground state of H_F as a function of the run
/// time, using the default linear ramp for every entry.
inline std::vector<std::pair<double, double>> fidelity_curve(const HermitianOperator& h_initial,
                                                             const HermitianOperator& h_final,
                                                             const std::vector<double>& runtimes,
                                                             const Units& units = {}) {
    std::vector<std::pair<double, double>> curve;
    curve.reserve(runtimes.size());
    const QuantumState psi0 = ground_state(h_initial).first;
    const QuantumState target = ground_state(h_final).first;
    for (double t : runtimes) {
        detail::require(t > 0.0, "fidelity_curve: runtimes must be positive");
        const AdiabaticSpec spec(h_initial, h_final, t);
        const int n = default_audit_steps(t);
        const TimeGrid grid(t, n, n);  // endpoints only; fidelity needs psi(T)
        const Trajectory trajectory = propagate(spec.schedule(), psi0, grid,
                                                Method::midpoint_exponential, units);
        curve.emplace_back(
            t, std::norm(target.amplitudes().dot(trajectory.states.back().amplitudes())));
    }
    return curve;
}

}  // namespace qgeo
