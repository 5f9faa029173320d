#include "gbbm/helmholtz.hpp"

#include <cmath>

namespace gbbm {

HelmholtzSolver::HelmholtzSolver(GridPtr grid) : grid_(std::move(grid)) {
  const GridSpec& g = *grid_;
  recip_.resize(g.size());
  fwd_.resize(g.size());
  for (int r = 0; r < g.nx(); ++r) {
    for (int k = 0; k < g.ny(); ++k) {
      const std::size_t n = static_cast<std::size_t>(r) * g.ny() + k;
      fwd_[n] = 1.0 + g.lambda(r, k);
      recip_[n] = 1.0 / fwd_[n];
    }
  }
}

Field HelmholtzSolver::multiply_symbol(const Field& f,
                                       const std::vector<double>& sym) const {
  if (f.grid().get() != grid_.get()) {
    throw std::invalid_argument("HelmholtzSolver: field grid mismatch");
  }
  const GridSpec& g = *grid_;
  std::vector<double> raw(g.size());
  g.exec_forward(f.data(), raw.data());
  for (std::size_t n = 0; n < raw.size(); ++n) raw[n] *= sym[n];
  Field out(grid_);
  g.exec_inverse(raw.data(), out.data());
  out *= 1.0 / (static_cast<double>(g.nx()) * 2.0 * g.N2());
  return out;
}

Field HelmholtzSolver::solve(const Field& f) const {
  return multiply_symbol(f, recip_);
}

Field HelmholtzSolver::apply(const Field& u) const {
  return multiply_symbol(u, fwd_);
}

std::pair<double, double> HelmholtzSolver::h2_bound_check(
    const Field& f) const {
  return {sobolev_norm(solve(f), 2.0), sobolev_norm(f, 0.0)};
}

}  // namespace gbbm
