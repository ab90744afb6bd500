#pragma once

#include "qgeo/bounds.hpp"
#include "qgeo/moments.hpp"
#include "qgeo/operators.hpp"
#include "qgeo/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgeo {

namespace detail {

inline double trapezoid(const std::vector<double>& values, double dt) {
    require(values.size() >= 2, "trapezoid: need at least 2 samples");
    double acc = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        acc += values[i];
    }
    return acc * dt;
}

}  // namespace detail

/// Geodesic distance between two rays on the projective space:
/// S0 = 2 arccos |<psi1|psi2>|, in [0, pi]. Antipodal (orthogonal) rays sit
/// at distance pi in this convention, matching the path-length scale
/// S = (2/hbar) integral dH dt.
inline double fs_geodesic_distance(const QuantumState& psi1, const QuantumState& psi2) {
    detail::require(psi1.dim() == psi2.dim(), "fs_geodesic_distance: dimension mismatch");
    const double overlap = std::abs(psi1.amplitudes().dot(psi2.amplitudes()));
    return 2.0 * std::acos(std::clamp(overlap, 0.0, 1.0));
}

/// Transport speed V = (2/hbar) dH(t) of the ray on projective space.
inline double speed(const QuantumState& state, const HermitianOperator& h,
                    const Units& units = {}) {
    check_units(units);
    return 2.0 / units.hbar * std_dev(state, h);
}

/// Total distance travelled, S = (2/hbar) integral dH dt, by composite
/// trapezoid over the sampled fluctuation series.
inline double path_length(const Trajectory& trajectory) {
    detail::require(trajectory.samples.size() >= 2, "path_length: need at least 2 samples");
    std::vector<double> speeds(trajectory.samples.size());
    for (std::size_t i = 0; i < speeds.size(); ++i) {
        speeds[i] = trajectory.samples[i].speed;
    }
    return detail::trapezoid(speeds, trajectory.grid.sample_dt());
}

/// Acceleration through the covariance identity V dV/dt = (4/hbar^2) Cov(H, Hdot):
/// a = (4/hbar^2) Cov(H, Hdot) / V. Undefined (nullopt) at stationary points,
/// where callers fall back to the numeric route.
inline std::optional<double> acceleration_analytic(const QuantumState& state,
                                                   const HermitianOperator& h,
                                                   const HermitianOperator& hdot,
                                                   const Units& units = {}) {
    check_units(units);
    const double v = speed(state, h, units);
    if (v <= kZeroSpeedEpsilon) {
        return std::nullopt;
    }
    return 4.0 / (units.hbar * units.hbar) * covariance(state, h, hdot) / v;
}

/// Differentiate a sampled speed series: central differences in the interior,
/// second-order one-sided stencils at the ends.
inline std::vector<double> acceleration_numeric(const std::vector<double>& speed_series,
                                                double dt) {
    return detail::differentiate_series(speed_series, dt);
}

struct QalPointwiseReports {
    BoundReport squared;    // a^2 <= (4/hbar^2) dHdot^2 - |<[H,Hdot]>|^2 / (hbar dH)^2
    BoundReport magnitude;  // |a| <= (2/hbar) dHdot
};

/// Pointwise acceleration bounds in a given state. `numeric_accel` supplies
/// the fallback acceleration at zero-speed points (where the analytic route
/// is singular); without it the magnitude report is marked not applicable
/// there. The squared report is only applicable away from zero speed because
/// its commutator term divides by dH^2.
inline QalPointwiseReports qal_pointwise_check(const QuantumState& state,
                                               const HermitianOperator& h,
                                               const HermitianOperator& hdot,
                                               const Units& units = {},
                                               std::optional<double> numeric_accel = {},
                                               std::string context = {}) {
    check_units(units);
    const double hbar = units.hbar;
    const double dh = std_dev(state, h);
    const double dhdot = std_dev(state, hdot);
    const std::optional<double> analytic = acceleration_analytic(state, h, hdot, units);
    const std::optional<double> accel = analytic ? analytic : numeric_accel;

    QalPointwiseReports reports;
    if (analytic) {
        const double comm = commutator_mean_abs(state, h, hdot);
        const double lhs = *analytic * *analytic;
        const double rhs = 4.0 / (hbar * hbar) * dhdot * dhdot -
                           comm * comm / (hbar * hbar * dh * dh);
        reports.squared = make_bound_report("eq9", context, lhs, rhs, rhs - lhs);
    } else {
        reports.squared = make_bound_report("eq9", context, 0.0, 0.0, 0.0);
        reports.squared.applicable = false;
        reports.squared.note = "zero-speed point: commutator term undefined";
    }

    if (accel) {
        const double lhs = std::abs(*accel);
        const double rhs = 2.0 / hbar * dhdot;
        reports.magnitude = make_bound_report("eq11", context, lhs, rhs, rhs - lhs);
        if (!analytic) {
            reports.magnitude.note = "numeric acceleration (zero-speed point)";
        }
    } else {
        reports.magnitude = make_bound_report("eq11", context, 0.0, 2.0 / hbar * dhdot, 0.0);
        reports.magnitude.applicable = false;
        reports.magnitude.note = "zero-speed point without numeric acceleration";
    }
    return reports;
}

/// Minimal evolution time between two rays at mean fluctuation deltaH:
/// T >= hbar S0 / (2 deltaH). The prefactor is fixed by the constant-field
/// two-level oracle: a geodesic run travels S0 in time hbar S0 / (2 dH)
/// exactly, so the bound saturates there.
inline double mt_qsl_time(const QuantumState& psi0, const QuantumState& psi_final,
                          double delta_h_mean, const Units& units = {}) {
    check_units(units);
    const double s0 = fs_geodesic_distance(psi0, psi_final);
    if (delta_h_mean <= 0.0) {
        if (s0 <= 1e-8) {
            return 0.0;
        }
        throw std::domain_error("mt_qsl_time: zero mean fluctuation with separated rays "
                                "(unreachable target)");
    }
    return units.hbar * s0 / (2.0 * delta_h_mean);
}

/// Minimal-time bound applied to a simulated run, using the time-averaged
/// fluctuation of the (possibly time-dependent) Hamiltonian.
inline BoundReport mt_qsl_report(const Trajectory& trajectory, std::string context = {}) {
    detail::require(trajectory.samples.size() >= 2, "mt_qsl_report: need at least 2 samples");
    const double horizon = trajectory.times.back();
    std::vector<double> fluctuations(trajectory.samples.size());
    for (std::size_t i = 0; i < fluctuations.size(); ++i) {
        fluctuations[i] = trajectory.samples[i].delta_h;
    }
    const double mean_dh = detail::trapezoid(fluctuations, trajectory.grid.sample_dt()) / horizon;
    const double s0 = fs_geodesic_distance(trajectory.states.front(), trajectory.states.back());
    BoundReport report;
    if (mean_dh <= 1e-14) {
        report = make_bound_report("qsl", std::move(context), 0.0, horizon, horizon);
        if (s0 > 1e-8) {
            report.applicable = false;
            report.note = "unreachable target: zero mean fluctuation with separated rays";
        }
        return report;
    }
    const double bound = trajectory.hbar * s0 / (2.0 * mean_dh);
    return make_bound_report("qsl", std::move(context), bound, horizon, horizon - bound);
}

/// Minimum-time-to-accelerate certificate. `printed` is the published form
/// T >= (hbar/2) V(T) / Gamma with Gamma the time-averaged dHdot; `corrected`
/// keeps the V(0) term from the derivation, T >= (hbar/2) |V(T)-V(0)| / Gamma.
/// The two coincide when the run starts at zero speed; `v0_differs` flags
/// runs where they do not (only the corrected form is universally valid
/// there).
struct QalTimeReport {
    bool defined = false;
    double gamma = 0.0;
    double t_qal = 0.0;
    double t_qal_corrected = 0.0;
    bool v0_differs = false;
    BoundReport printed;
    BoundReport corrected;
};

inline QalTimeReport qal_time_report(const Trajectory& trajectory, std::string context = {}) {
    detail::require(trajectory.samples.size() >= 2, "qal_time_report: need at least 2 samples");
    const double horizon = trajectory.times.back();
    std::vector<double> rate_fluctuations(trajectory.samples.size());
    for (std::size_t i = 0; i < rate_fluctuations.size(); ++i) {
        rate_fluctuations[i] = trajectory.samples[i].delta_hdot;
    }
    QalTimeReport result;
    result.gamma =
        detail::trapezoid(rate_fluctuations, trajectory.grid.sample_dt()) / horizon;
    if (result.gamma <= 1e-14) {
        result.printed = make_bound_report("eq12", context, 0.0, horizon, 0.0);
        result.printed.applicable = false;
        result.printed.note = "time-independent regime: quantum acceleration limit undefined";
        result.corrected = result.printed;
        result.corrected.label = "eq12v0";
        return result;
    }
    const double hbar = trajectory.hbar;
    const double v_initial = trajectory.samples.front().speed;
    const double v_final = trajectory.samples.back().speed;
    result.defined = true;
    result.t_qal = 0.5 * hbar * v_final / result.gamma;
    result.t_qal_corrected = 0.5 * hbar * std::abs(v_final - v_initial) / result.gamma;
    result.v0_differs = v_initial > kZeroSpeedEpsilon;
    result.printed =
        make_bound_report("eq12", context, result.t_qal, horizon, horizon - result.t_qal);
    result.corrected = make_bound_report("eq12v0", std::move(context), result.t_qal_corrected,
                                         horizon, horizon - result.t_qal_corrected);
    if (result.v0_differs) {
        result.printed.note = "initial speed nonzero: printed form not guaranteed";
    }
    return result;
}

/// Per-sample geometric series. Accelerations that are undefined on the
/// analytic route are reported as NaN in `accel_analytic`.
struct GeometrySeries {
    std::vector<double> times;
    std::vector<double> path_cumulative;
    std::vector<double> speed;
    std::vector<double> accel_analytic;
    std::vector<double> accel_numeric;
    std::vector<double> gamma_running;
    QalTimeReport qal;
};

inline GeometrySeries geometry_series(const Trajectory& trajectory) {
    const std::size_t n = trajectory.samples.size();
    detail::require(n >= 2, "geometry_series: need at least 2 samples");
    GeometrySeries series;
    series.times = trajectory.times;
    series.speed.resize(n);
    series.accel_analytic.resize(n);
    series.accel_numeric.resize(n);
    series.path_cumulative.resize(n);
    series.gamma_running.resize(n);

    const double dt = trajectory.grid.sample_dt();
    double path = 0.0;
    double rate_integral = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const SampleObservables& obs = trajectory.samples[i];
        series.speed[i] = obs.speed;
        series.accel_analytic[i] =
            obs.accel_analytic ? *obs.accel_analytic : std::nan("");
        series.accel_numeric[i] = obs.accel_numeric;
        if (i > 0) {
            path += 0.5 * dt * (trajectory.samples[i - 1].speed + obs.speed);
            rate_integral +=
                0.5 * dt * (trajectory.samples[i - 1].delta_hdot + obs.delta_hdot);
        }
        series.path_cumulative[i] = path;
        series.gamma_running[i] =
            (i == 0) ? obs.delta_hdot : rate_integral / trajectory.times[i];
    }
    series.qal = qal_time_report(trajectory);
    return series;
}

}  // namespace qgeo
