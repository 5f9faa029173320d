#pragma once

#include <utility>
#include <vector>

#include "gbbm/grid.hpp"

namespace gbbm {

/**
 * Inverse of the modified Helmholtz operator I - Laplacian with
 * homogeneous Dirichlet data in x2 and periodicity in x1.
 *
 * The operator is diagonal in the grid's tensor basis, so the inverse is
 * an exact coefficient division by 1 + lambda. Immutable after
 * construction; solve() is pure and reentrant.
 */
class HelmholtzSolver {
public:
  explicit HelmholtzSolver(GridPtr grid);

  const GridPtr& grid() const { return grid_; }

  /// u with (I - Lap) u = f in coefficient space. Grid mismatch is a
  /// hard error.
  Field solve(const Field& f) const;

  /// The forward operator (I - Lap) u, used by residual checks.
  Field apply(const Field& u) const;

  /// Returns (|solve(f)|_H2, |f|_L2). The discrete bound constant is
  /// exactly 1: first <= second up to roundoff for every f.
  std::pair<double, double> h2_bound_check(const Field& f) const;

private:
  Field multiply_symbol(const Field& f, const std::vector<double>& sym) const;

  GridPtr grid_;
  std::vector<double> recip_;  // 1/(1+lambda), entries in (0, 1]
  std::vector<double> fwd_;    // 1+lambda
};

}  // namespace gbbm
