#include "gbbm/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <random>

namespace gbbm {

namespace {

constexpr double kPi = std::numbers::pi;

void check_same_grid(const Field& a, const Field& b) {
  if (a.grid().get() != b.grid().get()) {
    throw std::invalid_argument("fields live on different grids");
  }
}

}  // namespace

GridSpec::GridSpec(double L1, double L2, int N1, int N2)
    : l1_(L1), l2_(L2), n1_(N1), n2_(N2) {
  if (!(L1 > 0.0) || !(L2 > 0.0)) {
    throw std::invalid_argument("grid lengths must be positive");
  }
  if (N1 < 8 || N1 % 2 != 0) {
    throw std::invalid_argument("N1 must be even and >= 8");
  }
  if (N2 < 8) {
    throw std::invalid_argument("N2 must be >= 8");
  }

  const int ny = n2_ - 1;
  k1_.resize(n1_);
  k1sq_.resize(n1_);
  scale_.resize(n1_);
  k2sq_.resize(ny);
  for (int r = 0; r < n1_; ++r) {
    const int m = mode_m(r);
    k1_[r] = 2.0 * kPi * m / l1_;
    k1sq_[r] = k1_[r] * k1_[r];
    const double mult = (r == 0 || r == n1_ / 2) ? 1.0 : 2.0;
    scale_[r] = std::sqrt(mult * l1_ * l2_ / 2.0) / (static_cast<double>(n1_) * n2_);
  }
  k2_.resize(ny);
  for (int k = 0; k < ny; ++k) {
    k2_[k] = kPi * (k + 1) / l2_;
    k2sq_[k] = k2_[k] * k2_[k];
  }

  // Plans use FFTW_UNALIGNED so they can execute on any caller buffer.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::vector<double> a(size()), b(size());
  fwd2d_ = fftw_plan_r2r_2d(n1_, ny, a.data(), b.data(), FFTW_R2HC,
                            FFTW_RODFT00, flags);
  inv2d_ = fftw_plan_r2r_2d(n1_, ny, a.data(), b.data(), FFTW_HC2R,
                            FFTW_RODFT00, flags);
  {
    int n[1] = {ny};
    fftw_r2r_kind kind[1] = {FFTW_RODFT00};
    dst_cols_ = fftw_plan_many_r2r(1, n, n1_, a.data(), nullptr, 1, ny,
                                   b.data(), nullptr, 1, ny, kind, flags);
  }
  {
    int n[1] = {n2_ + 1};
    fftw_r2r_kind kind[1] = {FFTW_REDFT00};
    std::vector<double> c(static_cast<std::size_t>(n1_) * (n2_ + 1));
    std::vector<double> d(c.size());
    dct_eval_ = fftw_plan_many_r2r(1, n, n1_, c.data(), nullptr, 1, n2_ + 1,
                                   d.data(), nullptr, 1, n2_ + 1, kind,
                                   flags);
  }
  {
    std::vector<double> r0(n1_), r1(n1_);
    row_fwd_ = fftw_plan_r2r_1d(n1_, r0.data(), r1.data(), FFTW_R2HC, flags);
    row_inv_ = fftw_plan_r2r_1d(n1_, r0.data(), r1.data(), FFTW_HC2R, flags);
  }
}

GridSpec::~GridSpec() {
  fftw_destroy_plan(fwd2d_);
  fftw_destroy_plan(inv2d_);
  fftw_destroy_plan(dst_cols_);
  fftw_destroy_plan(dct_eval_);
  fftw_destroy_plan(row_fwd_);
  fftw_destroy_plan(row_inv_);
}

GridPtr GridSpec::make(double L1, double L2, int N1, int N2) {
  return GridPtr(new GridSpec(L1, L2, N1, N2));
}

void GridSpec::exec_forward(const double* in, double* out) const {
  fftw_execute_r2r(fwd2d_, const_cast<double*>(in), out);
}
void GridSpec::exec_inverse(const double* in, double* out) const {
  fftw_execute_r2r(inv2d_, const_cast<double*>(in), out);
}
void GridSpec::exec_dst_cols(const double* in, double* out) const {
  fftw_execute_r2r(dst_cols_, const_cast<double*>(in), out);
}
void GridSpec::exec_dct_eval(const double* in, double* out) const {
  fftw_execute_r2r(dct_eval_, const_cast<double*>(in), out);
}
void GridSpec::exec_row_forward(const double* in, double* out) const {
  fftw_execute_r2r(row_fwd_, const_cast<double*>(in), out);
}
void GridSpec::exec_row_inverse(const double* in, double* out) const {
  fftw_execute_r2r(row_inv_, const_cast<double*>(in), out);
}

Field::Field(GridPtr grid)
    : grid_(std::move(grid)), ny_(grid_->ny()), v_(grid_->size(), 0.0) {}

Field Field::from_function(GridPtr grid,
                           const std::function<double(double, double)>& f) {
  Field out(std::move(grid));
  const GridSpec& g = *out.grid();
  for (int i = 0; i < g.nx(); ++i) {
    for (int k = 0; k < g.ny(); ++k) {
      out.at(i, k) = f(g.x1(i), g.x2(k));
    }
  }
  return out;
}

Field& Field::operator+=(const Field& o) {
  check_same_grid(*this, o);
  for (std::size_t n = 0; n < v_.size(); ++n) v_[n] += o.v_[n];
  return *this;
}
Field& Field::operator-=(const Field& o) {
  check_same_grid(*this, o);
  for (std::size_t n = 0; n < v_.size(); ++n) v_[n] -= o.v_[n];
  return *this;
}
Field& Field::operator*=(double a) {
  for (double& x : v_) x *= a;
  return *this;
}
Field& Field::axpy(double a, const Field& o) {
  check_same_grid(*this, o);
  for (std::size_t n = 0; n < v_.size(); ++n) v_[n] += a * o.v_[n];
  return *this;
}

SpectralField::SpectralField(GridPtr grid)
    : grid_(std::move(grid)), ny_(grid_->ny()), c_(grid_->size(), 0.0) {}

SpectralField forward(const Field& f) {
  if (f.empty()) throw std::invalid_argument("forward: empty field");
  const GridSpec& g = *f.grid();
  SpectralField out(f.grid());
  g.exec_forward(f.data(), out.data());
  for (int r = 0; r < g.nx(); ++r) {
    const double s = g.coeff_scale(r);
    for (int k = 0; k < g.ny(); ++k) out.at(r, k) *= s;
  }
  return out;
}

Field inverse(const SpectralField& c) {
  if (!c.grid()) throw std::invalid_argument("inverse: empty coefficients");
  const GridSpec& g = *c.grid();
  // Undo the forward normalization and the FFTW round-trip factor N1*2*N2.
  std::vector<double> raw(g.size());
  for (int r = 0; r < g.nx(); ++r) {
    const double s = 1.0 / (g.coeff_scale(r) * g.nx() * 2.0 * g.N2());
    for (int k = 0; k < g.ny(); ++k) {
      raw[static_cast<std::size_t>(r) * g.ny() + k] = c.at(r, k) * s;
    }
  }
  Field out(c.grid());
  g.exec_inverse(raw.data(), out.data());
  return out;
}

Field ddx1(const Field& f) {
  const GridSpec& g = *f.grid();
  const int nx = g.nx(), ny = g.ny();
  std::vector<double> raw(g.size()), draw(g.size(), 0.0);
  g.exec_forward(f.data(), raw.data());
  // Multiply mode q by i*k1: Re' = -k1*Im, Im' = k1*Re. DC and Nyquist
  // rows vanish.
  for (int q = 1; q < nx / 2; ++q) {
    const double k1 = g.k1(q);
    const std::size_t re = static_cast<std::size_t>(q) * ny;
    const std::size_t im = static_cast<std::size_t>(nx - q) * ny;
    for (int k = 0; k < ny; ++k) {
      draw[re + k] = -k1 * raw[im + k];
      draw[im + k] = k1 * raw[re + k];
    }
  }
  Field out(f.grid());
  g.exec_inverse(draw.data(), out.data());
  const double s = 1.0 / (static_cast<double>(nx) * 2.0 * g.N2());
  out *= s;
  return out;
}

WallDerivatives ddx2_dirichlet_full(const Field& f) {
  const GridSpec& g = *f.grid();
  const int nx = g.nx(), ny = g.ny(), n2 = g.N2();
  std::vector<double> sine(g.size());
  g.exec_dst_cols(f.data(), sine.data());
  // Term-by-term derivative of the sine series is a cosine series;
  // evaluate it on all N2+1 nodes with a DCT-I.
  std::vector<double> cosc(static_cast<std::size_t>(nx) * (n2 + 1), 0.0);
  for (int i = 0; i < nx; ++i) {
    for (int k = 0; k < ny; ++k) {
      const double bj = sine[static_cast<std::size_t>(i) * ny + k] / n2;
      cosc[static_cast<std::size_t>(i) * (n2 + 1) + (k + 1)] =
          0.5 * bj * g.k2(k);
    }
  }
  std::vector<double> eval(cosc.size());
  g.exec_dct_eval(cosc.data(), eval.data());

  WallDerivatives out{Field(f.grid()), std::vector<double>(nx),
                      std::vector<double>(nx)};
  for (int i = 0; i < nx; ++i) {
    const std::size_t base = static_cast<std::size_t>(i) * (n2 + 1);
    out.wall0[i] = eval[base];
    out.wall_l[i] = eval[base + n2];
    for (int k = 0; k < ny; ++k) {
      out.interior.at(i, k) = eval[base + k + 1];
    }
  }
  return out;
}

Field ddx2_dirichlet(const Field& f) {
  return ddx2_dirichlet_full(f).interior;
}

Field laplacian(const Field& f) {
  const GridSpec& g = *f.grid();
  std::vector<double> raw(g.size());
  g.exec_forward(f.data(), raw.data());
  for (int r = 0; r < g.nx(); ++r) {
    for (int k = 0; k < g.ny(); ++k) {
      raw[static_cast<std::size_t>(r) * g.ny() + k] *= -g.lambda(r, k);
    }
  }
  Field out(f.grid());
  g.exec_inverse(raw.data(), out.data());
  out *= 1.0 / (static_cast<double>(g.nx()) * 2.0 * g.N2());
  return out;
}

double sobolev_norm(const SpectralField& c, double s) {
  if (s < 0.0) throw std::invalid_argument("sobolev_norm: s must be >= 0");
  const GridSpec& g = *c.grid();
  double acc = 0.0;
  if (s == 0.0) {
    for (double x : c.values()) acc += x * x;
  } else {
    for (int r = 0; r < g.nx(); ++r) {
      for (int k = 0; k < g.ny(); ++k) {
        const double w = std::pow(1.0 + g.lambda(r, k), s);
        acc += w * c.at(r, k) * c.at(r, k);
      }
    }
  }
  return std::sqrt(acc);
}

double sobolev_norm(const Field& f, double s) {
  return sobolev_norm(forward(f), s);
}

double grad_norm_sq(const SpectralField& c) {
  const GridSpec& g = *c.grid();
  double acc = 0.0;
  for (int r = 0; r < g.nx(); ++r) {
    for (int k = 0; k < g.ny(); ++k) {
      acc += g.lambda(r, k) * c.at(r, k) * c.at(r, k);
    }
  }
  return acc;
}

double inner_l2(const Field& f, const Field& g) {
  check_same_grid(f, g);
  double acc = 0.0;
  const auto fv = f.values();
  const auto gv = g.values();
  for (std::size_t n = 0; n < fv.size(); ++n) acc += fv[n] * gv[n];
  return acc * f.grid()->cell_weight();
}

double l2_norm(const Field& f) { return std::sqrt(inner_l2(f, f)); }

Field dealias(const Field& f) {
  const GridSpec& g = *f.grid();
  const int m_cut = g.N1() / 3;
  const int j_cut = (2 * g.N2()) / 3;
  std::vector<double> raw(g.size());
  g.exec_forward(f.data(), raw.data());
  for (int r = 0; r < g.nx(); ++r) {
    const bool kill_row = g.mode_m(r) > m_cut;
    for (int k = 0; k < g.ny(); ++k) {
      if (kill_row || (k + 1) > j_cut) {
        raw[static_cast<std::size_t>(r) * g.ny() + k] = 0.0;
      }
    }
  }
  Field out(f.grid());
  g.exec_inverse(raw.data(), out.data());
  out *= 1.0 / (static_cast<double>(g.nx()) * 2.0 * g.N2());
  return out;
}

Field random_smooth_field(GridPtr grid, std::uint64_t seed, double decay,
                          double target_h2) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectralField c(grid);
  const GridSpec& g = *grid;
  for (int r = 0; r < g.nx(); ++r) {
    for (int k = 0; k < g.ny(); ++k) {
      c.at(r, k) = gauss(rng) * std::pow(1.0 + g.lambda(r, k), -0.5 * decay);
    }
  }
  const double h2 = sobolev_norm(c, 2.0);
  if (h2 > 0.0 && target_h2 > 0.0) {
    const double s = target_h2 / h2;
    for (int r = 0; r < g.nx(); ++r) {
      for (int k = 0; k < g.ny(); ++k) c.at(r, k) *= s;
    }
  }
  return inverse(c);
}

std::vector<double> row_ddx1(const GridSpec& g, std::span<const double> row) {
  if (static_cast<int>(row.size()) != g.nx()) {
    throw std::invalid_argument("row_ddx1: row length != N1");
  }
  const int nx = g.nx();
  std::vector<double> raw(nx), draw(nx, 0.0);
  g.exec_row_forward(row.data(), raw.data());
  for (int q = 1; q < nx / 2; ++q) {
    const double k1 = g.k1(q);
    draw[q] = -k1 * raw[nx - q];
    draw[nx - q] = k1 * raw[q];
  }
  std::vector<double> out(nx);
  g.exec_row_inverse(draw.data(), out.data());
  for (double& x : out) x /= nx;
  return out;
}

double row_sobolev_norm(const GridSpec& g, std::span<const double> row,
                        double s) {
  if (s < 0.0) throw std::invalid_argument("row_sobolev_norm: s must be >= 0");
  if (static_cast<int>(row.size()) != g.nx()) {
    throw std::invalid_argument("row_sobolev_norm: row length != N1");
  }
  const int nx = g.nx();
  std::vector<double> raw(nx);
  g.exec_row_forward(row.data(), raw.data());
  double acc = 0.0;
  for (int q = 0; q < nx; ++q) {
    const double mult = (q == 0 || q == nx / 2) ? 1.0 : 2.0;
    const double chat = raw[q] * std::sqrt(mult * g.L1()) / nx;
    const double k1 = g.k1(q);
    acc += std::pow(1.0 + k1 * k1, s) * chat * chat;
  }
  return std::sqrt(acc);
}

}  // namespace gbbm
