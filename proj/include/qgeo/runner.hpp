#pragma once

#include "qgeo/adiabatic.hpp"
#include "qgeo/geometry.hpp"
#include "qgeo/outputs.hpp"
#include "qgeo/scenario.hpp"
#include "qgeo/sweep.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qgeo {

struct RunOptions {
    std::filesystem::path out_dir = "qgeo_out";
    std::optional<double> tolerance;  // overrides every per-check gate
    std::optional<int> steps;
    std::optional<std::string> method;
};

/// Normalized-slack gates. --tolerance overrides all of them at once.
inline double default_check_tolerance(const std::string& label) {
    if (label == "eq8" || label == "sum") return 1e-10;
    if (label == "eq9" || label == "eq11") return 1e-8;
    if (label == "eq12" || label == "eq12v0" || label == "eq14" || label == "eq16") return 1e-6;
    if (label == "qsl" || label == "geodesic") return 1e-8;
    if (label == "eq15" || label == "commrel") return 1e-12;
    return 1e-8;
}

struct Violation {
    std::string label;
    std::string context;
    double normalized = 0.0;
};

inline std::optional<Violation> worst_violation(const std::vector<BoundReport>& reports,
                                                std::optional<double> tolerance_override) {
    std::optional<Violation> worst;
    for (const BoundReport& report : reports) {
        if (!report.applicable) {
            continue;
        }
        const double tol =
            tolerance_override ? *tolerance_override : default_check_tolerance(report.label);
        const double normalized = normalized_slack(report);
        if (normalized < -tol && (!worst || normalized < worst->normalized)) {
            worst = Violation{report.label, report.context, normalized};
        }
    }
    return worst;
}

struct RunArtifacts {
    std::filesystem::path series_path;
    std::filesystem::path bounds_path;
    std::filesystem::path summary_json_path;
    std::filesystem::path summary_text_path;
    std::string series_csv;
    std::string bounds_csv;
    std::string summary_json;
    std::string summary_text;
    int exit_status = 0;
    std::string message = "OK";
};

namespace detail {

inline const std::set<std::string>& scenario_checks(Family family) {
    static const std::set<std::string> base = {"eq8", "eq9",  "eq11",    "eq12",
                                               "sum", "qsl", "geodesic"};
    static const std::set<std::string> adiabatic = {"eq8",  "eq9",  "eq11", "eq12",
                                                    "sum",  "qsl",  "geodesic",
                                                    "eq14", "eq15", "eq16", "commrel"};
    return family == Family::adiabatic ? adiabatic : base;
}

inline std::set<std::string> resolve_checks(const ScenarioConfig& config) {
    const std::set<std::string>& available = scenario_checks(config.family);
    if (config.checks.empty()) {
        return available;
    }
    std::set<std::string> selected;
    for (const std::string& token : config.checks) {
        if (!available.count(token)) {
            throw ConfigError(config.name + ": check '" + token + "' is not available for family '" +
                              family_name(config.family) + "'");
        }
        selected.insert(token);
    }
    return selected;
}

inline std::string time_context(double t) { return "t=" + format_g17(t); }

inline nlohmann::json report_json(const BoundReport& report) {
    return {{"lhs", report.lhs},
            {"rhs", report.rhs},
            {"slack", report.slack},
            {"normalized_slack", normalized_slack(report)},
            {"saturated", report.saturated},
            {"applicable", report.applicable},
            {"context", report.context},
            {"note", report.note}};
}

inline std::string report_line(const BoundReport& report) {
    if (!report.applicable) {
        return "  " + report.label + ": not applicable (" + report.note + ")\n";
    }
    std::string line = "  " + report.label + ": lhs=" + format_g17(report.lhs) +
                       " rhs=" + format_g17(report.rhs) + " slack=" + format_g17(report.slack);
    if (report.saturated) {
        line += " [saturated]";
    }
    if (!report.context.empty()) {
        line += " @ " + report.context;
    }
    if (!report.note.empty()) {
        line += " (" + report.note + ")";
    }
    return line + "\n";
}

struct WorstTracker {
    std::optional<BoundReport> report;
    int saturated = 0;
    int applicable = 0;

    void consider(const BoundReport& candidate) {
        if (!candidate.applicable) {
            return;
        }
        ++applicable;
        if (candidate.saturated) {
            ++saturated;
        }
        if (!report || normalized_slack(candidate) < normalized_slack(*report)) {
            report = candidate;
        }
    }
};

}  // namespace detail

/// Simulate one scenario, evaluate every selected bound, and emit the
/// time-series CSV, the bound-report CSV, and the two summaries. Exit status
/// is 0 iff every gated slack stays above its tolerance.
inline RunArtifacts run_scenario(const ScenarioConfig& base_config, const RunOptions& options) {
    ScenarioConfig config = base_config;
    if (options.steps) {
        config.n_steps = *options.steps;
        if (config.n_steps % config.stride != 0) {
            config.stride = 1;
        }
    }
    if (options.method) {
        config.method = *options.method;
    }
    const std::set<std::string> checks = detail::resolve_checks(config);
    const BuiltScenario built = build_scenario(config);

    // adiabatic scenarios run through the audit so certificates share the run
    std::optional<AuditOutcome> audit;
    Trajectory trajectory;
    if (config.family == Family::adiabatic) {
        const AdiabaticSpec spec(HermitianOperator(*config.h_initial),
                                 HermitianOperator(*config.h_final),
                                 built.grid.horizon);
        audit = run_audit(spec, built.grid.n_steps, built.grid.stride, built.method,
                          built.units);
        trajectory = audit->trajectory;
    } else {
        trajectory = propagate(built.schedule, built.initial, built.grid, built.method,
                               built.units);
    }
    const GeometrySeries series = geometry_series(trajectory);

    // per-sample bound checks; eq11 splits by route because the numeric
    // acceleration at zero-speed samples carries O(dt^2) stencil truncation
    detail::WorstTracker worst_eq8, worst_eq9, worst_eq11, worst_eq11_numeric, worst_sum;
    std::vector<double> eq9_slack(trajectory.samples.size(), std::nan(""));
    std::vector<double> eq11_slack(trajectory.samples.size(), std::nan(""));
    for (std::size_t i = 0; i < trajectory.samples.size(); ++i) {
        const double t = trajectory.times[i];
        const QuantumState& state = trajectory.states[i];
        const HermitianOperator h = built.schedule.evaluate(t);
        const HermitianOperator hdot = built.schedule.derivative(t);
        const std::string context = detail::time_context(t);
        if (checks.count("eq8")) {
            worst_eq8.consider(check_schrodinger_robertson(state, h, hdot, context));
        }
        if (checks.count("sum")) {
            worst_sum.consider(check_sum_uncertainty(state, h, hdot, context));
        }
        if (checks.count("eq9") || checks.count("eq11")) {
            const QalPointwiseReports reports = qal_pointwise_check(
                state, h, hdot, built.units, trajectory.samples[i].accel_numeric, context);
            if (reports.squared.applicable) {
                eq9_slack[i] = reports.squared.slack;
            }
            if (reports.magnitude.applicable) {
                eq11_slack[i] = reports.magnitude.slack;
            }
            if (checks.count("eq9")) {
                worst_eq9.consider(reports.squared);
            }
            if (checks.count("eq11")) {
                if (reports.magnitude.note.empty()) {
                    worst_eq11.consider(reports.magnitude);
                } else {
                    worst_eq11_numeric.consider(reports.magnitude);
                }
            }
        }
    }

    // whole-run reports, each with its gate tolerance
    struct Gated {
        BoundReport report;
        double tolerance;
    };
    std::vector<Gated> gated;
    const auto gate_of = [&](const std::string& label) {
        return options.tolerance ? *options.tolerance : default_check_tolerance(label);
    };
    const auto add_worst = [&](const std::string& label, const detail::WorstTracker& tracker,
                               double tolerance) {
        if (checks.count(label) && tracker.report) {
            BoundReport report = *tracker.report;
            const std::string route_note = report.note;
            report.note = std::to_string(tracker.saturated) + "/" +
                          std::to_string(tracker.applicable) + " samples saturated";
            if (!route_note.empty()) {
                report.note += "; " + route_note;
            }
            gated.push_back({std::move(report), tolerance});
        }
    };
    // finite grids truncate: one-sided stencils at ~(2/3) dt^2 |V'''| and
    // composite trapezoids at ~dt^2 |f''| / 12, so gates for the numeric
    // acceleration route and the quadrature-based bounds never demand more
    // than the sampling resolution can deliver
    const double dt2 = built.grid.sample_dt() * built.grid.sample_dt();
    const auto resolution_gate = [&](const std::string& label, double truncation) {
        return options.tolerance ? *options.tolerance
                                 : std::max(default_check_tolerance(label), truncation);
    };
    add_worst("eq8", worst_eq8, gate_of("eq8"));
    add_worst("eq9", worst_eq9, gate_of("eq9"));
    add_worst("eq11", worst_eq11, gate_of("eq11"));
    add_worst("eq11", worst_eq11_numeric, resolution_gate("eq11", 2.0 * dt2));
    add_worst("sum", worst_sum, gate_of("sum"));

    const QalTimeReport qal = series.qal;
    if (checks.count("eq12")) {
        // the universally valid V(0)-corrected form gates the run
        gated.push_back({qal.corrected, resolution_gate("eq12", dt2)});
    }
    BoundReport qsl;
    if (checks.count("qsl")) {
        qsl = mt_qsl_report(trajectory);
        gated.push_back({qsl, resolution_gate("qsl", dt2)});
    }
    BoundReport geodesic;
    if (checks.count("geodesic")) {
        const double s0 =
            fs_geodesic_distance(trajectory.states.front(), trajectory.states.back());
        const double s = series.path_cumulative.back();
        geodesic = make_bound_report("geodesic", "", s0, s, s - s0);
        gated.push_back({geodesic, resolution_gate("geodesic", dt2)});
    }
    if (audit) {
        if (checks.count("eq14")) gated.push_back({audit->lower.report, gate_of("eq14")});
        if (checks.count("eq15")) gated.push_back({audit->rate_identity, gate_of("eq15")});
        if (checks.count("eq16")) gated.push_back({audit->upper.report, gate_of("eq16")});
        if (checks.count("commrel")) {
            gated.push_back(
                {make_bound_report("commrel", "", audit->commutator_reduction_max, 1e-10,
                                   1e-10 - audit->commutator_reduction_max),
                 gate_of("commrel")});
        }
    }

    // series CSV (fixed header; gap column for adiabatic runs)
    std::vector<std::string> header = {"t",         "deltaH",   "deltaHdot",
                                       "V",         "a_analytic", "a_numeric",
                                       "S_cum",     "eq9_slack", "eq11_slack"};
    if (audit) {
        header.push_back("gap");
    }
    CsvBuilder series_csv(header);
    for (std::size_t i = 0; i < trajectory.samples.size(); ++i) {
        const SampleObservables& obs = trajectory.samples[i];
        std::vector<double> row = {trajectory.times[i],
                                   obs.delta_h,
                                   obs.delta_hdot,
                                   obs.speed,
                                   obs.accel_analytic ? *obs.accel_analytic : std::nan(""),
                                   obs.accel_numeric,
                                   series.path_cumulative[i],
                                   eq9_slack[i],
                                   eq11_slack[i]};
        if (audit) {
            row.push_back(audit->gaps[i]);
        }
        series_csv.append_numbers(row);
    }

    CsvBuilder bounds_csv({"check", "context", "lhs", "rhs", "slack", "normalized_slack",
                           "saturated", "applicable", "note"});
    std::vector<BoundReport> reported;
    reported.reserve(gated.size() + 1);
    for (const Gated& entry : gated) {
        reported.push_back(entry.report);
    }
    if (checks.count("eq12") && qal.v0_differs) {
        reported.push_back(qal.printed);  // informational row alongside the gated form
    }
    for (const BoundReport& report : reported) {
        bounds_csv.append_row({report.label, report.context, format_g17(report.lhs),
                               format_g17(report.rhs), format_g17(report.slack),
                               format_g17(normalized_slack(report)),
                               report.saturated ? "1" : "0", report.applicable ? "1" : "0",
                               report.note});
    }

    std::optional<Violation> violation;
    for (const Gated& entry : gated) {
        if (!entry.report.applicable) {
            continue;
        }
        const double normalized = normalized_slack(entry.report);
        if (normalized < -entry.tolerance &&
            (!violation || normalized < violation->normalized)) {
            violation = Violation{entry.report.label, entry.report.context, normalized};
        }
    }

    nlohmann::json j;
    j["name"] = config.name;
    j["family"] = family_name(config.family);
    j["dim"] = built.schedule.dim();
    j["grid"] = {{"T", built.grid.horizon},
                 {"n_steps", built.grid.n_steps},
                 {"stride", built.grid.stride}};
    j["method"] = method_name(built.method);
    j["hbar"] = built.units.hbar;
    j["geometry"] = {{"path_length", series.path_cumulative.back()},
                     {"geodesic", fs_geodesic_distance(trajectory.states.front(),
                                                       trajectory.states.back())},
                     {"gamma", qal.gamma},
                     {"t_qal", qal.defined ? qal.t_qal : 0.0},
                     {"t_qal_corrected", qal.defined ? qal.t_qal_corrected : 0.0},
                     {"t_qal_defined", qal.defined},
                     {"v0_differs", qal.v0_differs}};
    for (const BoundReport& report : reported) {
        auto& slot = j["checks"][report.label];
        // a label can appear twice (analytic and numeric eq11 routes): keep
        // the tighter instance
        if (slot.is_null() || !report.applicable ||
            normalized_slack(report) < slot.value("normalized_slack", 1e300)) {
            slot = detail::report_json(report);
        }
    }
    if (checks.count("eq12") && !qal.defined) {
        j["checks"]["eq12"] = detail::report_json(qal.printed);
    }
    if (audit) {
        j["audit"] = {{"fidelity", audit->fidelity},
                      {"min_gap", audit->min_gap},
                      {"lower_admissible", audit->lower.admissible},
                      {"lower_excluded_saturated", audit->lower.excluded_saturated},
                      {"commutator_reduction_max", audit->commutator_reduction_max}};
    }
    j["status"] = {{"exit_code", violation ? 1 : 0},
                   {"worst", violation ? nlohmann::json{{"check", violation->label},
                                                        {"context", violation->context},
                                                        {"normalized_slack",
                                                         violation->normalized}}
                                       : nlohmann::json()},
                   {"tolerance_override",
                    options.tolerance ? nlohmann::json(*options.tolerance) : nlohmann::json()}};

    std::string text;
    text += "scenario " + config.name + " (" + family_name(config.family) + ", dim " +
            std::to_string(built.schedule.dim()) + ")\n";
    text += "grid: T=" + format_g17(built.grid.horizon) + " n_steps=" +
            std::to_string(built.grid.n_steps) + " stride=" + std::to_string(built.grid.stride) +
            " method=" + method_name(built.method) + " hbar=" + format_g17(built.units.hbar) +
            "\n";
    text += "path length S=" + format_g17(series.path_cumulative.back()) + ", geodesic S0=" +
            format_g17(fs_geodesic_distance(trajectory.states.front(),
                                            trajectory.states.back())) +
            "\n";
    if (qal.defined) {
        text += "T_QAL=" + format_g17(qal.t_qal) + " (gamma=" + format_g17(qal.gamma) + ")";
        if (qal.v0_differs) {
            text += ", V(0)-corrected T_QAL=" + format_g17(qal.t_qal_corrected);
        }
        text += "\n";
    } else {
        text += "T_QAL undefined: " + qal.printed.note + "\n";
    }
    if (audit) {
        text += "audit: fidelity=" + format_g17(audit->fidelity) + " min_gap=" +
                format_g17(audit->min_gap) + " commutator_reduction_max=" +
                format_g17(audit->commutator_reduction_max) + "\n";
    }
    text += "checks:\n";
    for (const BoundReport& report : reported) {
        text += detail::report_line(report);
    }
    text += violation ? "status VIOLATION: " + violation->label + " " + violation->context +
                            " normalized slack " + format_g17(violation->normalized) + "\n"
                      : "status OK\n";

    RunArtifacts artifacts;
    artifacts.series_csv = series_csv.content();
    artifacts.bounds_csv = bounds_csv.content();
    artifacts.summary_json = j.dump(2) + "\n";
    artifacts.summary_text = text;
    artifacts.exit_status = violation ? 1 : 0;
    if (violation) {
        artifacts.message = "bound violation: " + violation->label + " " + violation->context +
                            " normalized slack " + format_g17(violation->normalized);
    }
    artifacts.series_path = options.out_dir / (config.name + "_series.csv");
    artifacts.bounds_path = options.out_dir / (config.name + "_bounds.csv");
    artifacts.summary_json_path = options.out_dir / (config.name + "_summary.json");
    artifacts.summary_text_path = options.out_dir / (config.name + "_summary.txt");
    write_text_file(artifacts.series_path, artifacts.series_csv);
    write_text_file(artifacts.bounds_path, artifacts.bounds_csv);
    write_text_file(artifacts.summary_json_path, artifacts.summary_json);
    write_text_file(artifacts.summary_text_path, artifacts.summary_text);
    return artifacts;
}

namespace detail {

inline std::string runtime_tag(double t) {
    std::string tag = format_g(t);
    for (char& c : tag) {
        if (c == '.') c = 'p';
        if (c == '+') c = '_';
    }
    return tag;
}

inline int audit_stride(int n_steps) {
    int stride = 1;
    while (n_steps % (2 * stride) == 0 && n_steps / (2 * stride) >= 4096) {
        stride *= 2;
    }
    return stride;
}

}  // namespace detail

/// Audit an adiabatic configuration over a list of run times. Each run time
/// gets its own series CSV (with the gap column) and an audit CSV with the
/// per-sample certificate data; one combined summary covers all runs.
inline RunArtifacts run_audit_command(const ScenarioConfig& config,
                                      const std::vector<double>& runtimes,
                                      const RunOptions& options) {
    if (config.family != Family::adiabatic) {
        throw ConfigError(config.name + ": audit needs an adiabatic configuration");
    }
    if (runtimes.empty()) {
        throw ConfigError(config.name + ": audit needs at least one runtime");
    }
    const HermitianOperator hi = detail::checked_operator(config.h_initial, "H_I", config);
    const HermitianOperator hf = detail::checked_operator(config.h_final, "H_F", config);
    const Method method =
        method_from_name(options.method ? *options.method : config.method);
    const Units units{config.hbar};

    nlohmann::json j;
    j["name"] = config.name;
    j["dim"] = hi.dim();
    j["hbar"] = config.hbar;
    j["method"] = method_name(method);
    std::string text = "adiabatic audit " + config.name + " (dim " + std::to_string(hi.dim()) +
                       ")\n";

    std::vector<BoundReport> gated;
    RunArtifacts artifacts;
    for (double total_time : runtimes) {
        if (total_time <= 0.0) {
            throw ConfigError(config.name + ": runtimes must be positive");
        }
        const AdiabaticSpec spec(hi, hf, total_time);
        const int n_steps = options.steps ? *options.steps : default_audit_steps(total_time);
        const int stride = options.steps ? 1 : detail::audit_stride(n_steps);
        const AuditOutcome outcome = run_audit(spec, n_steps, stride, method, units);
        const GeometrySeries series = geometry_series(outcome.trajectory);
        const HamiltonianSchedule schedule = spec.schedule();
        const std::string tag = detail::runtime_tag(total_time);

        CsvBuilder series_csv({"t", "deltaH", "deltaHdot", "V", "a_analytic", "a_numeric",
                               "S_cum", "eq9_slack", "eq11_slack", "gap"});
        CsvBuilder audit_csv({"t", "gap", "eq14_value", "deltaHI", "deltaHF"});
        for (std::size_t i = 0; i < outcome.trajectory.samples.size(); ++i) {
            const SampleObservables& obs = outcome.trajectory.samples[i];
            const QalPointwiseReports reports = qal_pointwise_check(
                outcome.trajectory.states[i],
                schedule.evaluate(outcome.trajectory.times[i]),
                schedule.derivative(outcome.trajectory.times[i]), units,
                obs.accel_numeric);
            series_csv.append_numbers(
                {outcome.trajectory.times[i], obs.delta_h, obs.delta_hdot, obs.speed,
                 obs.accel_analytic ? *obs.accel_analytic : std::nan(""), obs.accel_numeric,
                 series.path_cumulative[i],
                 reports.squared.applicable ? reports.squared.slack : std::nan(""),
                 reports.magnitude.applicable ? reports.magnitude.slack : std::nan(""),
                 outcome.gaps[i]});
            audit_csv.append_numbers({outcome.trajectory.times[i], outcome.gaps[i],
                                      outcome.lower.value_series[i],
                                      outcome.upper.delta_h_initial[i],
                                      outcome.upper.delta_h_final[i]});
        }
        write_text_file(options.out_dir / (config.name + "_T" + tag + "_series.csv"),
                        series_csv.content());
        write_text_file(options.out_dir / (config.name + "_T" + tag + "_audit.csv"),
                        audit_csv.content());

        gated.push_back(outcome.lower.report);
        gated.push_back(outcome.upper.report);
        gated.push_back(outcome.rate_identity);
        gated.push_back(make_bound_report("commrel", "T=" + format_g17(total_time),
                                          outcome.commutator_reduction_max, 1e-10,
                                          1e-10 - outcome.commutator_reduction_max));
        gated.push_back(outcome.sum_uncertainty_worst);

        nlohmann::json entry;
        entry["T"] = total_time;
        entry["n_steps"] = n_steps;
        entry["stride"] = stride;
        entry["fidelity"] = outcome.fidelity;
        entry["min_gap"] = outcome.min_gap;
        entry["lower"] = detail::report_json(outcome.lower.report);
        entry["upper"] = detail::report_json(outcome.upper.report);
        entry["rate_identity"] = detail::report_json(outcome.rate_identity);
        entry["commutator_reduction_max"] = outcome.commutator_reduction_max;
        entry["lower_admissible"] = outcome.lower.admissible;
        entry["lower_excluded_saturated"] = outcome.lower.excluded_saturated;
        entry["qal_defined"] = outcome.qal.defined;
        if (outcome.qal.defined) {
            entry["t_qal"] = outcome.qal.t_qal;
        }
        j["runs"].push_back(entry);

        text += "T=" + format_g17(total_time) + ": fidelity=" + format_g17(outcome.fidelity) +
                " min_gap=" + format_g17(outcome.min_gap) + "\n";
        text += detail::report_line(outcome.lower.report);
        text += detail::report_line(outcome.upper.report);
        text += detail::report_line(outcome.rate_identity);
        text += "  commutator reduction max deviation " +
                format_g17(outcome.commutator_reduction_max) + "\n";
    }

    const std::optional<Violation> violation = worst_violation(gated, options.tolerance);
    j["status"] = {{"exit_code", violation ? 1 : 0}};
    text += violation ? "status VIOLATION: " + violation->label + " normalized slack " +
                            format_g17(violation->normalized) + "\n"
                      : "status OK\n";

    artifacts.summary_json = j.dump(2) + "\n";
    artifacts.summary_text = text;
    artifacts.exit_status = violation ? 1 : 0;
    if (violation) {
        artifacts.message = "bound violation: " + violation->label + " normalized slack " +
                            format_g17(violation->normalized);
    }
    artifacts.summary_json_path = options.out_dir / (config.name + "_audit_summary.json");
    artifacts.summary_text_path = options.out_dir / (config.name + "_audit_summary.txt");
    write_text_file(artifacts.summary_json_path, artifacts.summary_json);
    write_text_file(artifacts.summary_text_path, artifacts.summary_text);
    return artifacts;
}

/// Measure the observed convergence order of both steppers on a scenario.
inline RunArtifacts run_convergence_command(const ScenarioConfig& config,
                                            const RunOptions& options) {
    const BuiltScenario built = build_scenario(config);
    nlohmann::json j;
    j["name"] = config.name;
    std::string text = "convergence " + config.name + "\n";
    int exit_status = 0;

    const auto measure = [&](Method method, double low, double high) {
        const std::optional<double> order = convergence_order(
            built.schedule, built.initial, built.grid.horizon, method, 32, built.units);
        nlohmann::json entry;
        entry["gate"] = {low, high};
        if (!order) {
            entry["skipped"] = "errors at round-off floor (stepper effectively exact)";
            text += "  " + method_name(method) + ": skipped (round-off floor)\n";
        } else {
            entry["order"] = *order;
            const bool ok = *order >= low && *order <= high;
            entry["within_gate"] = ok;
            text += "  " + method_name(method) + ": observed order " + format_g17(*order) +
                    (ok ? " [ok]\n" : " [OUT OF GATE]\n");
            if (!ok) {
                exit_status = 1;
            }
        }
        j["methods"][method_name(method)] = entry;
    };
    measure(Method::midpoint_exponential, 1.9, 2.3);
    measure(Method::rk4, 3.8, 4.3);

    j["status"] = {{"exit_code", exit_status}};
    text += exit_status == 0 ? "status OK\n" : "status VIOLATION: order out of gate\n";

    RunArtifacts artifacts;
    artifacts.summary_json = j.dump(2) + "\n";
    artifacts.summary_text = text;
    artifacts.exit_status = exit_status;
    if (exit_status != 0) {
        artifacts.message = "convergence order out of gate";
    }
    artifacts.summary_json_path = options.out_dir / (config.name + "_convergence.json");
    artifacts.summary_text_path = options.out_dir / (config.name + "_convergence.txt");
    write_text_file(artifacts.summary_json_path, artifacts.summary_json);
    write_text_file(artifacts.summary_text_path, artifacts.summary_text);
    return artifacts;
}

/// Randomized sweep command: CSV of every instance plus summary statistics.
inline RunArtifacts run_sweep_command(const SweepOptions& sweep_options,
                                      const RunOptions& options) {
    SweepOptions resolved = sweep_options;
    if (options.tolerance) {
        resolved.tolerance = *options.tolerance;
    }
    const SweepResult result = random_sweep(resolved);

    RunArtifacts artifacts;
    artifacts.series_csv = sweep_csv(result);
    artifacts.summary_json = sweep_summary_json(result);
    artifacts.summary_text = sweep_summary_text(result);
    artifacts.exit_status = result.exit_status;
    if (result.exit_status != 0) {
        artifacts.message = "bound violation: " + result.worst_message;
    }
    artifacts.series_path = options.out_dir / "sweep_instances.csv";
    artifacts.summary_json_path = options.out_dir / "sweep_summary.json";
    artifacts.summary_text_path = options.out_dir / "sweep_summary.txt";
    write_text_file(artifacts.series_path, artifacts.series_csv);
    write_text_file(artifacts.summary_json_path, artifacts.summary_json);
    write_text_file(artifacts.summary_text_path, artifacts.summary_text);
    return artifacts;
}

}  // namespace qgeo
