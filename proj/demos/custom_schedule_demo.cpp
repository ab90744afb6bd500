// Builds a user-defined non-commuting schedule H(t) = sin(t) A + (1-cos t) B,
// propagates it, and prints the acceleration-bound slack and the minimal-time
// reports. Shows how to plug an arbitrary family into the library.

#include "qgeo/geometry.hpp"
#include "qgeo/propagate.hpp"

#include <cmath>
#include <cstdio>

int main() {
    using namespace qgeo;
    const Matrix a = pauli_x().matrix();
    const Matrix b = pauli_z().matrix();
    const HamiltonianSchedule schedule(
        2, 2.0, [=](double t) { return Matrix(std::sin(t) * a + (1.0 - std::cos(t)) * b); },
        [=](double t) { return Matrix(std::cos(t) * a + std::sin(t) * b); },
        /*commuting_family=*/false, "demo");

    const Trajectory traj = propagate(schedule, basis_state(2, 0), TimeGrid(2.0, 2048, 1));
    double worst = 1e300;
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const auto reports = qal_pointwise_check(
            traj.states[i], schedule.evaluate(traj.times[i]),
            schedule.derivative(traj.times[i]), Units{}, traj.samples[i].accel_numeric);
        if (reports.magnitude.applicable) {
            worst = std::min(worst, normalized_slack(reports.magnitude));
        }
    }
    const QalTimeReport qal = qal_time_report(traj);
    std::printf("worst |a| <= (2/hbar) dHdot slack: %.3e\n", worst);
    if (qal.defined) {
        std::printf("T = 2, T_QAL = %.6f (corrected %.6f)\n", qal.t_qal, qal.t_qal_corrected);
    }
    const BoundReport qsl = mt_qsl_report(traj);
    std::printf("minimal-time bound %.6f <= elapsed %.6f\n", qsl.lhs, qsl.rhs);
    return 0;
}
