#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "gbbm/config.hpp"
#include "gbbm/helmholtz.hpp"
#include "gbbm/problem.hpp"

namespace gbbm {

/// Lifted solution v at time t plus the run parameters it was produced
/// with. The physical solution is u = v + h(.,t) e^{-x2}.
struct SimState {
  Field v;
  double t = 0.0;
  long step_count = 0;
  std::string flux_name;
  double nu1 = 0.0;
  double dt = 0.0;
};

struct PicardReport {
  double S = 0.0;  // window length
  double R = 0.0;  // contraction ball radius, 2*C1
  std::vector<double> diffs;  // CtH2 distance between successive iterates
  int iterations = 0;
  bool converged = false;
  bool ball_exceeded = false;
  double max_norm = 0.0;  // largest CtH2 iterate norm observed
};

/// Non-convergence (or ball escape) of the fixed-point iteration;
/// signals that the window S is too large.
struct PicardError : NumericalError {
  PicardReport report;
  explicit PicardError(PicardReport rep)
      : NumericalError("picard iteration did not converge within the window"),
        report(std::move(rep)) {}
};

struct PicardResult {
  std::vector<Field> trajectory;  // states at the n_quad window nodes
  std::vector<double> times;
  PicardReport report;
  const Field& endpoint() const { return trajectory.back(); }
};

/**
 * Fixed-point iteration for the integral form
 *   v = v0 + B h + C v
 * on the window [t0, t0+S], where B h(t) = solve({hxx(t)-hxx(t0)} e^{-x2})
 * and C v(t) = -int_{t0}^t solve(div(phi(v+h e^{-x2}))) dtau, discretized
 * by composite trapezoid on n_quad uniformly spaced nodes (n_quad >= 2
 * node count, n_quad-1 cells).
 *
 * Returns the converged node trajectory and a report. Throws PicardError
 * (carrying the report) on non-convergence within max_iter or when an
 * iterate leaves the ball of radius R = 2*C1.
 */
PicardResult picard_window(const Field& v0, const BoundarySignal& h,
                           const FluxSpec& flux, double t0, double S,
                           int n_quad, double tol, int max_iter,
                           const HelmholtzSolver& solver,
                           bool dealias_products = false);

/// Empirical Lipschitz calibration of the C-operator integrand on a ball
/// of H2 radius ball_radius, by seeded random probing.
struct WindowCalibration {
  double c2_hat = 0.0;  // measured Lipschitz constant
  double c_b = 0.0;     // lifting factor for the boundary-term constant
  double ball_radius = 0.0;
  int n_probes = 0;
};
WindowCalibration calibrate_contraction(const GridPtr& grid,
                                        const HelmholtzSolver& solver,
                                        const BoundarySignal& h,
                                        const FluxSpec& flux, double t,
                                        double ball_radius, int n_probes,
                                        std::uint64_t seed);

/// Heuristic window seed S = 1 / (2*C2*(1+2*C1)) with
/// C1 = gtilde_h2 + c_b * h_norm, capped at max_window. Zero data
/// returns the cap. Callers halve on Picard failure.
double suggest_window(double gtilde_h2, double h_norm,
                      const WindowCalibration& cal, double max_window);

/**
 * Classical four-stage Runge-Kutta on v_t = rhs(v, t), with the rhs of
 * the dispersive problem (nu1 = 0) or the dissipative variant (nu1 > 0)
 * and h evaluated at stage times. Deterministic. Throws NumericalError
 * naming the step when the H2 norm exceeds blowup_ceiling or goes
 * non-finite.
 */
SimState rk4_advance(SimState state, double dt, long n_steps,
                     const BoundarySignal& h, const FluxSpec& flux,
                     double nu1, const HelmholtzSolver& solver,
                     double blowup_ceiling,
                     bool dealias_products = false);

struct RunResult {
  std::vector<SimState> snapshots;
  std::vector<PicardReport> picard_reports;
  double gtilde_corner_mismatch = 0.0;
  double gtilde_far_wall = 0.0;
  double gtilde_interior_max = 0.0;
  // max H2 gap between the Picard and RK4 trajectories (mode = both)
  double cross_method_h2 = std::numeric_limits<double>::quiet_NaN();
};

/// Full run to time T: chained RK4 steps (production), chained Picard
/// windows (verification), or both with a cross-method comparison.
RunResult run(const RunConfig& cfg);
RunResult run_core(const RunConfig& cfg, const GridPtr& grid,
                   const InitialData& g, const BoundarySignal& h,
                   const FluxSpec& flux);

/// max over Picard window nodes of |v_picard - v_rk4|_H2 on [0, T].
double compare_methods(const RunConfig& cfg, const GridPtr& grid,
                       const InitialData& g, const BoundarySignal& h,
                       const FluxSpec& flux);

}  // namespace gbbm
