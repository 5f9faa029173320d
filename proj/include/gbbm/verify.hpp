#pragma once

#include <vector>

#include "gbbm/config.hpp"
#include "gbbm/evolve.hpp"
#include "gbbm/problem.hpp"

namespace gbbm {

/**
 * Discrete energy-identity audit of a snapshot trajectory.
 *
 * E_h1 = |v|^2_L2 + |grad v|^2_L2 and E_h2 = |grad v|^2 + |Lap v|^2 are
 * evaluated spectrally. The time derivative d/dt (E/2) is approximated
 * by centered differences of the snapshots and compared with the exact
 * semi-discrete pairing of the forcing against v (for E_h1) and against
 * -Lap v (for E_h2); both pairings are Parseval-exact grid sums, so the
 * residual measures only time discretization.
 *
 * Arrays indexed per snapshot: times, e_h1, e_h2, boundary_flux.
 * Arrays indexed per interior snapshot (centered differences):
 * res_times, dt_*, rhs_*, resid_*.
 */
struct EnergyReport {
  std::vector<double> times, e_h1, e_h2, boundary_flux;
  std::vector<double> res_times;
  std::vector<double> dt_e_h1, rhs_h1, resid_h1;
  std::vector<double> dt_e_h2, rhs_h2, resid_h2;

  double max_resid_h1() const;
  double max_resid_h2() const;
};

/// Requires at least 3 snapshots with uniform spacing.
EnergyReport h1_identity_check(const std::vector<SimState>& traj,
                               const BoundarySignal& h, const FluxSpec& flux);
EnergyReport h2_identity_check(const std::vector<SimState>& traj,
                               const BoundarySignal& h, const FluxSpec& flux);

/**
 * Smallest C >= 0 such that
 *   |v(t)|_H1 <= sqrt(E0 + C t H^2 (1+H)) * exp(C t (1+H))
 * holds at every snapshot (H = h_norm, E0 = E_h1(0)), found by
 * bisection with 1e-8 relative slack. The envelope dominates the
 * trajectory by construction.
 */
struct GronwallFit {
  double C = 0.0;
  std::vector<double> envelope;  // per snapshot time
};
GronwallFit gronwall_envelope(const EnergyReport& rep, double h_norm);

/**
 * Data-to-solution continuity experiment: for each epsilon, runs the
 * base data (g, h) and the perturbed data (g + eps*dg, h + eps*dh) and
 * measures delta(eps) = max_t |u1 - u2|_H2. The fitted constant C is
 * the smallest one with delta <= denom * e^{C T} across all epsilons,
 * where denom = |gtilde1 - gtilde2|_H2 + |eps*dh|_C1tH2.
 */
struct DependenceReport {
  std::vector<double> epsilons, deltas, denominators;
  std::vector<double> ratios_eps;   // delta / eps
  std::vector<double> ratios_data;  // delta / denom
  double fitted_c = 0.0;
  std::vector<double> envelope;  // denom * e^{C T}, dominates deltas
};
DependenceReport dependence_experiment(const RunConfig& cfg,
                                       const InitialData& dg,
                                       const BoundarySignal& dh,
                                       const std::vector<double>& epsilons);

/// dt-halving self-convergence (endpoint H2 differences at dt, dt/2,
/// dt/4, dt/8) and the L2-doubling truncation check at fixed dx2.
struct ConvergenceStudy {
  std::vector<double> dts;
  std::vector<double> dt_errors;   // |u_dt(T) - u_{dt/2}(T)|_H2
  std::vector<double> dt_factors;  // successive error ratios, ~16 for RK4
  double l2_base_norm = 0.0;       // final |u|_H2 at L2
  double l2_doubled_norm = 0.0;    // final |u|_H2 at 2*L2, same dx2
  double l2_rel_change = 0.0;
};
ConvergenceStudy convergence_study(const RunConfig& cfg);

}  // namespace gbbm
