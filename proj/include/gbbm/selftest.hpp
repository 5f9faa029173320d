#pragma once

#include <cstdint>
#include <string>

#include "gbbm/helmholtz.hpp"

namespace gbbm {

/**
 * Randomized audit of the elliptic inverse against an independent dense
 * route: the (I - Lap) matrix is assembled column-by-column from the
 * forward operator and factored by pivoted Gaussian elimination, so the
 * inversion path under test (diagonal reciprocal) never feeds the
 * reference.
 */
struct HelmholtzSuiteResult {
  int n_rhs = 0;
  double max_solution_err = 0.0;    // max-norm gap vs dense solve
  double max_residual_rel = 0.0;    // |(I-Lap)u - f|_L2 / |f|_L2
  double max_h2_ratio = 0.0;        // |solve(f)|_H2 / |f|_L2
  double max_selfadjoint_rel = 0.0; // |<solve(f),g> - <f,solve(g)>| scaled
  bool pass = false;
  std::string summary() const;
};

HelmholtzSuiteResult run_helmholtz_suite(const GridPtr& grid, int n_rhs,
                                         std::uint64_t seed);

}  // namespace gbbm
