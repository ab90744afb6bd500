#pragma once

#include "qgeo/bounds.hpp"
#include "qgeo/geometry.hpp"
#include "qgeo/outputs.hpp"
#include "qgeo/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qgeo {

struct SweepOptions {
    std::uint64_t seed = 42;
    std::vector<int> dims = {2, 3, 4, 5, 6, 7, 8};
    int count = 1000;
    std::vector<std::string> checks = {"eq8", "eq9", "eq11", "sum"};
    double hbar = 1.0;
    double tolerance = 1e-8;
};

struct SweepRow {
    int instance;
    int dim;
    std::string check;
    double lhs;
    double rhs;
    double slack;
    double normalized;
};

struct SlackStats {
    int count = 0;
    double min = 0.0;
    double q05 = 0.0;
    double median = 0.0;
    double mean = 0.0;
    double max = 0.0;
};

struct SweepResult {
    SweepOptions options;
    std::vector<SweepRow> rows;
    std::map<std::string, SlackStats> stats;
    // Dominance identity between the two acceleration bounds: the gap of the
    // squared-form rhs below the plain bound squared equals the commutator
    // term; tracked wherever the squared form applies.
    int dominance_checked = 0;
    double dominance_min_gap = 0.0;
    double dominance_max_identity_dev = 0.0;
    int exit_status = 0;
    std::string worst_message;
};

namespace detail {

inline SlackStats slack_stats(std::vector<double> values) {
    SlackStats stats;
    stats.count = static_cast<int>(values.size());
    if (values.empty()) {
        return stats;
    }
    std::sort(values.begin(), values.end());
    stats.min = values.front();
    stats.max = values.back();
    stats.q05 = values[static_cast<std::size_t>(0.05 * (values.size() - 1))];
    stats.median = values[values.size() / 2];
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    stats.mean = sum / static_cast<double>(values.size());
    return stats;
}

}  // namespace detail

/// Deterministic randomized property sweep: Haar states and GUE pairs drive
/// the uncertainty-relation and acceleration-bound checkers.
inline SweepResult random_sweep(const SweepOptions& options) {
    detail::require(options.count >= 1, "random_sweep: count must be >= 1");
    detail::require(!options.dims.empty(), "random_sweep: dims must not be empty");
    for (int dim : options.dims) {
        detail::require(dim >= 2, "random_sweep: dims must be >= 2");
    }

    RandomEnsemble ensemble(options.seed);
    const Units units{options.hbar};
    SweepResult result;
    result.options = options;
    result.dominance_min_gap = std::numeric_limits<double>::infinity();

    const auto enabled = [&](const std::string& check) {
        return std::find(options.checks.begin(), options.checks.end(), check) !=
               options.checks.end();
    };

    std::map<std::string, std::vector<double>> slacks;
    double worst_normalized = std::numeric_limits<double>::infinity();

    const auto record = [&](int instance, int dim, const BoundReport& report) {
        if (!report.applicable) {
            return;
        }
        const double normalized = normalized_slack(report);
        result.rows.push_back(SweepRow{instance, dim, report.label, report.lhs, report.rhs,
                                       report.slack, normalized});
        slacks[report.label].push_back(normalized);
        if (normalized < worst_normalized) {
            worst_normalized = normalized;
            result.worst_message = report.label + " instance " + std::to_string(instance) +
                                   " (dim " + std::to_string(dim) +
                                   "): normalized slack " + format_g17(normalized);
        }
    };

    for (int instance = 0; instance < options.count; ++instance) {
        const int dim = options.dims[instance % options.dims.size()];
        const QuantumState state = ensemble.haar_state(dim);
        const HermitianOperator a = ensemble.gue_hermitian(dim);
        const HermitianOperator b = ensemble.gue_hermitian(dim);
        const std::string context = "instance " + std::to_string(instance);

        if (enabled("eq8")) {
            record(instance, dim, check_schrodinger_robertson(state, a, b, context));
        }
        if (enabled("sum")) {
            record(instance, dim, check_sum_uncertainty(state, a, b, context));
        }
        if (enabled("eq9") || enabled("eq11")) {
            const QalPointwiseReports reports = qal_pointwise_check(state, a, b, units, {},
                                                                    context);
            if (enabled("eq9")) {
                record(instance, dim, reports.squared);
            }
            if (enabled("eq11")) {
                record(instance, dim, reports.magnitude);
            }
            if (reports.squared.applicable) {
                const double gap =
                    reports.magnitude.rhs * reports.magnitude.rhs - reports.squared.rhs;
                const double direct = commutator_mean_abs(state, a, b) *
                                      commutator_mean_abs(state, a, b) /
                                      (options.hbar * options.hbar * variance(state, a));
                const double scale = std::max({gap, direct, 1.0});
                ++result.dominance_checked;
                result.dominance_min_gap = std::min(result.dominance_min_gap, gap / scale);
                result.dominance_max_identity_dev =
                    std::max(result.dominance_max_identity_dev, std::abs(gap - direct) / scale);
            }
        }
    }

    for (auto& [label, values] : slacks) {
        result.stats[label] = detail::slack_stats(std::move(values));
    }
    if (worst_normalized < -options.tolerance) {
        result.exit_status = 1;
    }
    return result;
}

inline std::string sweep_csv(const SweepResult& result) {
    CsvBuilder csv({"instance", "dim", "check", "lhs", "rhs", "slack", "normalized_slack"});
    for (const SweepRow& row : result.rows) {
        csv.append_row({std::to_string(row.instance), std::to_string(row.dim), row.check,
                        format_g17(row.lhs), format_g17(row.rhs), format_g17(row.slack),
                        format_g17(row.normalized)});
    }
    return csv.content();
}

inline std::string sweep_summary_json(const SweepResult& result) {
    nlohmann::json j;
    j["seed"] = result.options.seed;
    j["count"] = result.options.count;
    j["dims"] = result.options.dims;
    j["hbar"] = result.options.hbar;
    j["tolerance"] = result.options.tolerance;
    for (const auto& [label, stats] : result.stats) {
        j["checks"][label] = {{"count", stats.count},     {"min", stats.min},
                              {"q05", stats.q05},         {"median", stats.median},
                              {"mean", stats.mean},       {"max", stats.max}};
    }
    j["dominance"] = {{"checked", result.dominance_checked},
                      {"min_normalized_gap", result.dominance_checked
                                                 ? result.dominance_min_gap
                                                 : 0.0},
                      {"max_identity_deviation", result.dominance_max_identity_dev}};
    j["exit_code"] = result.exit_status;
    j["worst"] = result.worst_message;
    return j.dump(2) + "\n";
}

inline std::string sweep_summary_text(const SweepResult& result) {
    std::string text;
    text += "random sweep: seed " + std::to_string(result.options.seed) + ", " +
            std::to_string(result.options.count) + " instances, dims";
    for (int dim : result.options.dims) {
        text += " " + std::to_string(dim);
    }
    text += "\n";
    for (const auto& [label, stats] : result.stats) {
        text += "  " + label + ": n=" + std::to_string(stats.count) +
                " min=" + format_g17(stats.min) + " q05=" + format_g17(stats.q05) +
                " median=" + format_g17(stats.median) + " mean=" + format_g17(stats.mean) +
                " max=" + format_g17(stats.max) + "\n";
    }
    if (result.dominance_checked > 0) {
        text += "  dominance: checked " + std::to_string(result.dominance_checked) +
                " min gap " + format_g17(result.dominance_min_gap) + " max identity dev " +
                format_g17(result.dominance_max_identity_dev) + "\n";
    }
    text += result.exit_status == 0 ? "status OK\n"
                                    : "status VIOLATION: " + result.worst_message + "\n";
    return text;
}

}  // namespace qgeo
