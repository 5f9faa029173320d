#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "gbbm/errors.hpp"

// FFTW plan handles are opaque pointers; avoid pulling fftw3.h into every
// translation unit.
struct fftw_plan_s;

namespace gbbm {

class GridSpec;
using GridPtr = std::shared_ptr<const GridSpec>;

/**
 * Tensor-product discretization of the channel strip [0,L1) x [0,L2]:
 * uniform nodes, periodic in x1, homogeneous Dirichlet in x2.
 *
 * Interior x2 nodes are j*L2/N2 for j=1..N2-1; values at x2=0 and x2=L2
 * are identically zero in this representation. The spectral basis is
 * exp(2*pi*i*m*x1/L1) * sin(pi*j*x2/L2), in which I - Laplacian is
 * diagonal with symbol 1 + lambda(m,j),
 * lambda(m,j) = (2*pi*m/L1)^2 + (pi*j/L2)^2.
 *
 * The object is immutable after construction and safe to share across
 * threads; transform execution is reentrant on distinct buffers.
 */
class GridSpec {
public:
  /// Validates L1,L2 > 0, N1 even >= 8, N2 >= 8.
  static GridPtr make(double L1, double L2, int N1, int N2);
  ~GridSpec();
  GridSpec(const GridSpec&) = delete;
  GridSpec& operator=(const GridSpec&) = delete;

  double L1() const { return l1_; }
  double L2() const { return l2_; }
  int N1() const { return n1_; }
  int N2() const { return n2_; }

  /// Number of x1 nodes.
  int nx() const { return n1_; }
  /// Number of interior x2 nodes (N2 - 1).
  int ny() const { return n2_ - 1; }
  std::size_t size() const { return static_cast<std::size_t>(nx()) * ny(); }

  double dx1() const { return l1_ / n1_; }
  double dx2() const { return l2_ / n2_; }
  /// x1 coordinate of node i, i = 0..N1-1.
  double x1(int i) const { return dx1() * i; }
  /// x2 coordinate of interior node k, k = 0..N2-2 (node j = k+1).
  double x2(int k) const { return dx2() * (k + 1); }
  /// Quadrature weight of one grid cell, dx1*dx2.
  double cell_weight() const { return dx1() * dx2(); }

  /// |m| of half-complex storage row r (rows 0 and N1/2 are the real
  /// DC and Nyquist rows; rows q and N1-q hold Re/Im of mode q).
  int mode_m(int r) const { return r <= n1_ / 2 ? r : n1_ - r; }
  /// Symbol lambda at storage entry (r, k), k indexing sine mode j = k+1.
  double lambda(int r, int k) const { return k1sq_[r] + k2sq_[k]; }
  /// x1 wavenumber magnitude 2*pi*m(r)/L1.
  double k1(int r) const { return k1_[r]; }
  /// x2 wavenumber pi*(k+1)/L2.
  double k2(int k) const { return k2_[k]; }
  /// Parseval normalization of storage row r (folds the half-complex
  /// mode multiplicity and the cell measure).
  double coeff_scale(int r) const { return scale_[r]; }

  // Raw unnormalized transform kernels. Buffers must not alias.
  void exec_forward(const double* in, double* out) const;   // DFT x DST-I
  void exec_inverse(const double* in, double* out) const;   // unscaled
  void exec_dst_cols(const double* in, double* out) const;  // DST-I in x2 only
  void exec_dct_eval(const double* in, double* out) const;  // DCT-I, N2+1 nodes
  void exec_row_forward(const double* in, double* out) const;  // 1D DFT, N1
  void exec_row_inverse(const double* in, double* out) const;

private:
  GridSpec(double L1, double L2, int N1, int N2);

  double l1_, l2_;
  int n1_, n2_;
  std::vector<double> k1_, k1sq_, k2_, k2sq_, scale_;
  fftw_plan_s* fwd2d_ = nullptr;
  fftw_plan_s* inv2d_ = nullptr;
  fftw_plan_s* dst_cols_ = nullptr;
  fftw_plan_s* dct_eval_ = nullptr;
  fftw_plan_s* row_fwd_ = nullptr;
  fftw_plan_s* row_inv_ = nullptr;
};

/// Real scalar field on the grid interior, row-major [i1][k2].
class Field {
public:
  Field() = default;
  explicit Field(GridPtr grid);
  static Field from_function(GridPtr grid,
                             const std::function<double(double, double)>& f);

  const GridPtr& grid() const { return grid_; }
  bool empty() const { return !grid_; }
  std::size_t size() const { return v_.size(); }

  double& at(int i, int k) { return v_[static_cast<std::size_t>(i) * ny_ + k]; }
  double at(int i, int k) const {
    return v_[static_cast<std::size_t>(i) * ny_ + k];
  }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::span<double> values() { return v_; }
  std::span<const double> values() const { return v_; }

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double a);
  /// this += a*o
  Field& axpy(double a, const Field& o);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double a, Field f) { return f *= a; }

private:
  GridPtr grid_;
  int ny_ = 0;
  std::vector<double> v_;
};

/// Parseval-normalized coefficients of the DFT x DST-I basis, stored in
/// the half-complex row layout of the grid. The sum of squared entries
/// equals the grid L2 norm squared.
class SpectralField {
public:
  SpectralField() = default;
  explicit SpectralField(GridPtr grid);

  const GridPtr& grid() const { return grid_; }
  double& at(int r, int k) { return c_[static_cast<std::size_t>(r) * ny_ + k]; }
  double at(int r, int k) const {
    return c_[static_cast<std::size_t>(r) * ny_ + k];
  }
  double* data() { return c_.data(); }
  const double* data() const { return c_.data(); }
  std::span<const double> values() const { return c_; }

private:
  GridPtr grid_;
  int ny_ = 0;
  std::vector<double> c_;
};

SpectralField forward(const Field& f);
Field inverse(const SpectralField& c);

/// Spectral d/dx1. Exact on trig polynomials below the Nyquist mode;
/// the Nyquist row is annihilated.
Field ddx1(const Field& f);

/// d/dx2 of the sine interpolant, evaluated at interior nodes.
Field ddx2_dirichlet(const Field& f);

/// As ddx2_dirichlet, but also returns the derivative on the two walls.
struct WallDerivatives {
  Field interior;
  std::vector<double> wall0;   // x2 = 0, per x1 node
  std::vector<double> wall_l;  // x2 = L2
};
WallDerivatives ddx2_dirichlet_full(const Field& f);

/// Spectral Laplacian (coefficient multiplication by -lambda).
Field laplacian(const Field& f);

/// Discrete H^s norm: (sum (1+lambda)^s |c|^2)^(1/2). Requires s >= 0;
/// s = 0 is the grid L2 norm by Parseval.
double sobolev_norm(const Field& f, double s);
double sobolev_norm(const SpectralField& c, double s);

/// sum lambda*|c|^2, the squared L2 norm of the gradient.
double grad_norm_sq(const SpectralField& c);

/// Grid quadrature: (L1*L2/(N1*N2)) * sum f*g. Equals the coefficient
/// inner product of the interpolants.
double inner_l2(const Field& f, const Field& g);
double l2_norm(const Field& f);

/// Zeroes modes with m > N1/3 or j > 2*N2/3 (2/3-rule dealiasing).
Field dealias(const Field& f);

/// Smooth random field: normal coefficients damped by (1+lambda)^(-decay/2),
/// rescaled so the H^2 norm equals target_h2. Deterministic in seed.
Field random_smooth_field(GridPtr grid, std::uint64_t seed, double decay,
                          double target_h2);

// 1D helpers on periodic x1 rows (length N1).
std::vector<double> row_ddx1(const GridSpec& g, std::span<const double> row);
double row_sobolev_norm(const GridSpec& g, std::span<const double> row,
                        double s);

}  // namespace gbbm
