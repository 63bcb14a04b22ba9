#pragma once

#include <cstddef>

namespace crowdflow {

/// Ledger entry for one time step. Flux and source entries are amounts
/// integrated over the step, so that
///   mass - previous mass = reaction_integral - adv_outflux_D - pressure_outflux_D.
struct StepDiagnostics {
    std::size_t step = 0;
    double t = 0.0;   ///< time at the end of the step
    double dt = 0.0;
    double mass = 0.0;
    double adv_outflux_D = 0.0;
    double pressure_outflux_D = 0.0;
    double reaction_integral = 0.0;
    double p_max = 0.0;          ///< max |p|
    double comp_residual = 0.0;  ///< complementarity residual after the step
    double pressure_energy = 0.0;  ///< (1/3) dt sum_f |grad_h p|^2 A_f d_f
    double u_max = 0.0;
    double u_min = 0.0;
    std::size_t sweeps = 0;
    std::size_t newton_iterations = 0;
};

}  // namespace crowdflow
