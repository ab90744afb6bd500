#pragma once

#include "qgeo/moments.hpp"
#include "qgeo/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qgeo {

/// One inequality instance. Sign convention, fixed artifact-wide: slack >= 0
/// means the inequality holds; for "lhs <= rhs" bounds slack = rhs - lhs, for
/// ">=" bounds slack = lhs - rhs.
struct BoundReport {
    std::string label;
    std::string context;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    bool saturated = false;
    bool applicable = true;
    std::string note;
};

inline double bound_scale(double lhs, double rhs) {
    return std::max({std::abs(lhs), std::abs(rhs), 1.0});
}

inline double normalized_slack(const BoundReport& report) {
    return report.slack / bound_scale(report.lhs, report.rhs);
}

inline bool bound_holds(const BoundReport& report, double tolerance) {
    return !report.applicable || normalized_slack(report) >= -tolerance;
}

inline BoundReport make_bound_report(std::string label, std::string context, double lhs,
                                     double rhs, double slack) {
    BoundReport report;
    report.label = std::move(label);
    report.context = std::move(context);
    report.lhs = lhs;
    report.rhs = rhs;
    report.slack = slack;
    report.saturated = std::abs(slack) <= 1e-6 * bound_scale(lhs, rhs);
    return report;
}

/// Robertson-Schroedinger relation:
///   dA^2 dB^2 >= Cov(A,B)^2 + (1/4)|<[A,B]>|^2.
/// lhs is the product of squared fluctuations, slack = lhs - rhs.
inline BoundReport check_schrodinger_robertson(const QuantumState& state,
                                               const HermitianOperator& a,
                                               const HermitianOperator& b,
                                               std::string context = {}) {
    const double lhs = variance(state, a) * variance(state, b);
    const double cov = covariance(state, a, b);
    const double comm = commutator_mean_abs(state, a, b);
    const double rhs = cov * cov + 0.25 * comm * comm;
    return make_bound_report("eq8", std::move(context), lhs, rhs, lhs - rhs);
}

/// Sum uncertainty relation: d(A - B) <= dA + dB. slack = rhs - lhs.
inline BoundReport check_sum_uncertainty(const QuantumState& state,
                                         const HermitianOperator& a,
                                         const HermitianOperator& b,
                                         std::string context = {}) {
    const HermitianOperator difference = a - b;
    const double lhs = std_dev(state, difference);
    const double rhs = std_dev(state, a) + std_dev(state, b);
    return make_bound_report("sum", std::move(context), lhs, rhs, rhs - lhs);
}

}  // namespace qgeo
