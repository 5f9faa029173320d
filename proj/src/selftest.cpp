#include "gbbm/selftest.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

namespace gbbm {

namespace {

/// Dense LU with partial pivoting; a is n x n row-major, overwritten.
class DenseLU {
public:
  explicit DenseLU(std::vector<double> a, int n) : a_(std::move(a)), n_(n) {
    piv_.resize(n_);
    for (int c = 0; c < n_; ++c) {
      int p = c;
      for (int r = c + 1; r < n_; ++r) {
        if (std::abs(a_[r * n_ + c]) > std::abs(a_[p * n_ + c])) p = r;
      }
      piv_[c] = p;
      if (p != c) {
        for (int j = 0; j < n_; ++j) std::swap(a_[c * n_ + j], a_[p * n_ + j]);
      }
      const double d = a_[c * n_ + c];
      if (d == 0.0) throw NumericalError("dense oracle: singular matrix");
      for (int r = c + 1; r < n_; ++r) {
        const double m = a_[r * n_ + c] / d;
        a_[r * n_ + c] = m;
        for (int j = c + 1; j < n_; ++j) a_[r * n_ + j] -= m * a_[c * n_ + j];
      }
    }
  }

  std::vector<double> solve(std::vector<double> b) const {
    for (int c = 0; c < n_; ++c) {
      if (piv_[c] != c) std::swap(b[c], b[piv_[c]]);
      for (int r = c + 1; r < n_; ++r) b[r] -= a_[r * n_ + c] * b[c];
    }
    for (int r = n_ - 1; r >= 0; --r) {
      for (int j = r + 1; j < n_; ++j) b[r] -= a_[r * n_ + j] * b[j];
      b[r] /= a_[r * n_ + r];
    }
    return b;
  }

private:
  std::vector<double> a_;
  std::vector<int> piv_;
  int n_;
};

}  // namespace

HelmholtzSuiteResult run_helmholtz_suite(const GridPtr& grid, int n_rhs,
                                         std::uint64_t seed) {
  const GridSpec& g = *grid;
  const HelmholtzSolver solver(grid);
  const int dim = static_cast<int>(g.size());

  // Assemble the operator matrix from its action on unit fields.
  std::vector<double> mat(static_cast<std::size_t>(dim) * dim);
  for (int col = 0; col < dim; ++col) {
    Field e(grid);
    e.data()[col] = 1.0;
    const Field ae = solver.apply(e);
    for (int row = 0; row < dim; ++row) {
      mat[static_cast<std::size_t>(row) * dim + col] = ae.data()[row];
    }
  }
  const DenseLU lu(std::move(mat), dim);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  HelmholtzSuiteResult res;
  res.n_rhs = n_rhs;
  Field prev_f(grid);
  Field prev_u(grid);
  for (int trial = 0; trial < n_rhs; ++trial) {
    Field f(grid);
    for (double& x : f.values()) x = gauss(rng);

    const Field u = solver.solve(f);
    const std::vector<double> u_ref =
        lu.solve(std::vector<double>(f.data(), f.data() + dim));
    for (int n = 0; n < dim; ++n) {
      res.max_solution_err =
          std::max(res.max_solution_err, std::abs(u.data()[n] - u_ref[n]));
    }

    Field resid = solver.apply(u);
    resid -= f;
    res.max_residual_rel = std::max(
        res.max_residual_rel, l2_norm(resid) / std::max(l2_norm(f), 1e-300));

    const auto [h2, l2] = solver.h2_bound_check(f);
    res.max_h2_ratio = std::max(res.max_h2_ratio, h2 / std::max(l2, 1e-300));

    if (trial > 0) {
      const double lhs = inner_l2(u, prev_f);
      const double rhs = inner_l2(f, prev_u);
      res.max_selfadjoint_rel =
          std::max(res.max_selfadjoint_rel,
                   std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300));
    }
    prev_f = f;
    prev_u = u;
  }

  res.pass = res.max_solution_err <= 1e-10 && res.max_residual_rel <= 1e-11 &&
             res.max_h2_ratio <= 1.0 + 1e-12 &&
             res.max_selfadjoint_rel <= 1e-11;
  return res;
}

std::string HelmholtzSuiteResult::summary() const {
  std::ostringstream out;
  out << (pass ? "PASS" : "FAIL") << " helmholtz suite: n_rhs=" << n_rhs
      << " max_solution_err=" << max_solution_err
      << " max_residual_rel=" << max_residual_rel
      << " max_h2_ratio=" << max_h2_ratio
      << " max_selfadjoint_rel=" << max_selfadjoint_rel;
  return out.str();
}

}  // namespace gbbm
