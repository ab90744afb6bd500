// Drives a two-level atom with J(t) = sin(t) and prints the transport speed,
// the acceleration, and the acceleration bound along the run: the bound holds
// with equality, and the minimum acceleration time reproduces the horizon.

#include "qgeo/geometry.hpp"
#include "qgeo/propagate.hpp"
#include "qgeo/schedule.hpp"

#include <cmath>
#include <cstdio>

int main() {
    using namespace qgeo;
    const double horizon = M_PI / 2;
    const HamiltonianSchedule drive = make_two_level_drive(scalar_sine(1.0, 1.0, 0.0), horizon);
    const Trajectory traj = propagate(drive, basis_state(2, 0), TimeGrid(horizon, 4096, 256));

    std::printf("%10s %12s %12s %14s\n", "t", "V", "|a|", "(2/hbar) dHdot");
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const SampleObservables& obs = traj.samples[i];
        const double accel = obs.accel_analytic ? *obs.accel_analytic : obs.accel_numeric;
        std::printf("%10.6f %12.8f %12.8f %14.8f\n", traj.times[i], obs.speed,
                    std::abs(accel), 2.0 * obs.delta_hdot);
    }

    const QalTimeReport qal = qal_time_report(traj);
    if (qal.defined) {
        std::printf("\nhorizon T        = %.12f\n", horizon);
        std::printf("T_QAL            = %.12f\n", qal.t_qal);
        std::printf("path length      = %.12f\n", path_length(traj));
        std::printf("geodesic distance= %.12f\n",
                    fs_geodesic_distance(traj.states.front(), traj.states.back()));
    }
    return 0;
}
