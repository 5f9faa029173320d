#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "gbbm/grid.hpp"
#include "gbbm/helmholtz.hpp"

namespace gbbm {

/**
 * Vector flux phi: R -> R^2 from a closed-form family, with exact
 * derivative, exact antiderivative (Phi' = phi, Phi(0) = 0) and a
 * certified sup bound on |phi''|. All families satisfy phi(0) = 0.
 *
 * Families:
 *   zero        phi = (0, 0)
 *   linear      phi = (a*u, b*u)
 *   bbm         phi = (u + u^2/2, 0)
 *   oblique     phi = (u + u^2/2, u^2/2)
 *   saturating  phi = (u + u^3/(1+u^2), 0), |phi''| <= (3+2*sqrt(2))/4
 */
class FluxSpec {
public:
  enum class Kind { Zero, Linear, Bbm, Oblique, Saturating };

  static FluxSpec zero() { return FluxSpec(Kind::Zero, 0, 0); }
  static FluxSpec linear(double a, double b) {
    return FluxSpec(Kind::Linear, a, b);
  }
  static FluxSpec bbm() { return FluxSpec(Kind::Bbm, 0, 0); }
  static FluxSpec oblique() { return FluxSpec(Kind::Oblique, 0, 0); }
  static FluxSpec saturating() { return FluxSpec(Kind::Saturating, 0, 0); }

  Kind kind() const { return kind_; }
  double param_a() const { return a_; }
  double param_b() const { return b_; }
  std::string name() const;

  std::array<double, 2> phi(double u) const {
    switch (kind_) {
      case Kind::Zero:
        return {0.0, 0.0};
      case Kind::Linear:
        return {a_ * u, b_ * u};
      case Kind::Bbm:
        return {u + 0.5 * u * u, 0.0};
      case Kind::Oblique:
        return {u + 0.5 * u * u, 0.5 * u * u};
      case Kind::Saturating:
        return {u + u * u * u / (1.0 + u * u), 0.0};
    }
    return {0.0, 0.0};
  }

  std::array<double, 2> dphi(double u) const {
    switch (kind_) {
      case Kind::Zero:
        return {0.0, 0.0};
      case Kind::Linear:
        return {a_, b_};
      case Kind::Bbm:
        return {1.0 + u, 0.0};
      case Kind::Oblique:
        return {1.0 + u, u};
      case Kind::Saturating: {
        const double s = 1.0 + u * u;
        return {1.0 + (3.0 * u * u + u * u * u * u) / (s * s), 0.0};
      }
    }
    return {0.0, 0.0};
  }

  /// Phi with Phi' = phi and Phi(0) = 0.
  std::array<double, 2> antiderivative(double u) const {
    switch (kind_) {
      case Kind::Zero:
        return {0.0, 0.0};
      case Kind::Linear:
        return {0.5 * a_ * u * u, 0.5 * b_ * u * u};
      case Kind::Bbm:
        return {0.5 * u * u + u * u * u / 6.0, 0.0};
      case Kind::Oblique:
        return {0.5 * u * u + u * u * u / 6.0, u * u * u / 6.0};
      case Kind::Saturating:
        return {u * u - 0.5 * std::log1p(u * u), 0.0};
    }
    return {0.0, 0.0};
  }

  double d2phi_bound() const {
    switch (kind_) {
      case Kind::Zero:
      case Kind::Linear:
        return 0.0;
      case Kind::Bbm:
      case Kind::Oblique:
        return 1.0;
      case Kind::Saturating:
        // max of |6u - 2u^3| / (1+u^2)^3, attained at u = sqrt(2)-1.
        return (3.0 + 2.0 * std::sqrt(2.0)) / 4.0;
    }
    return 0.0;
  }

private:
  FluxSpec(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  Kind kind_;
  double a_, b_;
};

/**
 * Wavemaker datum h(x1, t) with exact t-derivative: a sum of modulated
 * Gaussian pulses a * exp(-((x1-c)/w)^2) * sin(omega*t). The empty sum
 * is the zero signal. Pulses must decay below 1e-10 of their peak at
 * the periodic seam x1 = 0; see check_seam().
 */
class BoundarySignal {
public:
  struct Pulse {
    double amp, center, width, omega;
  };

  static BoundarySignal zero() { return BoundarySignal({}); }
  static BoundarySignal pulse(double amp, double center, double width,
                              double omega) {
    return BoundarySignal({Pulse{amp, center, width, omega}});
  }
  explicit BoundarySignal(std::vector<Pulse> terms)
      : terms_(std::move(terms)) {}

  bool is_zero() const { return terms_.empty(); }
  const std::vector<Pulse>& terms() const { return terms_; }

  double eval(double x1, double t) const {
    double s = 0.0;
    for (const Pulse& p : terms_) {
      const double z = (x1 - p.center) / p.width;
      s += p.amp * std::exp(-z * z) * std::sin(p.omega * t);
    }
    return s;
  }
  double eval_dt(double x1, double t) const {
    double s = 0.0;
    for (const Pulse& p : terms_) {
      const double z = (x1 - p.center) / p.width;
      s += p.amp * std::exp(-z * z) * p.omega * std::cos(p.omega * t);
    }
    return s;
  }

  std::vector<double> sample(const GridSpec& g, double t) const;
  std::vector<double> sample_dt(const GridSpec& g, double t) const;

  /// Scaled-sum composition, used by the dependence experiment.
  BoundarySignal scaled(double factor) const;
  friend BoundarySignal operator+(const BoundarySignal& a,
                                  const BoundarySignal& b);

  /// Throws ConfigError unless the time-independent spatial envelope at
  /// the seam is below 1e-10 of its peak on the grid.
  void check_seam(const GridSpec& g) const;

private:
  std::vector<Pulse> terms_;
};

/**
 * Initial datum g(x1, x2) from closed-form families:
 *   gaussian  amp * exp(-((x1-c1)^2 + (x2-c2)^2) / w^2)
 *   mode      amp * cos(2*pi*m*x1/L1) * sin(pi*j*x2/L2)
 * The empty sum is the zero datum.
 */
class InitialData {
public:
  struct Term {
    enum class Kind { Gaussian, Mode } kind;
    double amp = 0, c1 = 0, c2 = 0, width = 1;
    int m = 0, j = 1;
  };

  static InitialData zero() { return InitialData({}); }
  static InitialData gaussian(double amp, double c1, double c2, double width) {
    Term t;
    t.kind = Term::Kind::Gaussian;
    t.amp = amp;
    t.c1 = c1;
    t.c2 = c2;
    t.width = width;
    return InitialData({t});
  }
  static InitialData mode(double amp, int m, int j) {
    Term t;
    t.kind = Term::Kind::Mode;
    t.amp = amp;
    t.m = m;
    t.j = j;
    return InitialData({t});
  }
  explicit InitialData(std::vector<Term> terms) : terms_(std::move(terms)) {}

  bool is_zero() const { return terms_.empty(); }
  double eval(double x1, double x2, const GridSpec& g) const;

  InitialData scaled(double factor) const;
  friend InitialData operator+(const InitialData& a, const InitialData& b);

private:
  std::vector<Term> terms_;
};

/// e^{-x2} at the interior nodes.
std::vector<double> lifting_profile(const GridSpec& g);

/// Cached lifting fields at one time: products of h, its spectral x1
/// derivatives and t-derivatives with the e^{-x2} profile.
struct LiftingFields {
  std::vector<double> h_row, hxx_row, ht_row, hxxt_row;
  Field hE, hxxE, htE, hxxtE;
};
LiftingFields make_lifting(const GridPtr& grid, const BoundarySignal& h,
                           double t);

/// Lifted initial datum gtilde = g - h(.,0) e^{-x2}, with the wall
/// diagnostics incurred by the Dirichlet representation.
struct GtildeResult {
  Field gtilde;
  double corner_mismatch;  // max |g - h| on x2 = 0
  double far_wall_max;     // max |gtilde| on x2 = L2
  double interior_max;     // max |gtilde| on interior nodes
};
GtildeResult make_gtilde(const GridPtr& grid, const InitialData& g,
                         const BoundarySignal& h);

/// div(phi(w)) with w = v + h(.,t) e^{-x2}: pointwise chain rule
/// phi1'(w) dw/dx1 + phi2'(w) dw/dx2, with dw/dx1 spectral and
/// dw/dx2 = ddx2_dirichlet(v) - h e^{-x2}.
Field div_flux(const Field& v, const BoundarySignal& h, double t,
               const FluxSpec& flux, bool dealias_products = false);

/// v_t of the dispersive problem: solve(h_x1x1t e^{-x2} - div_flux).
Field rhs_gbbm(const Field& v, const BoundarySignal& h, double t,
               const FluxSpec& flux, const HelmholtzSolver& solver,
               bool dealias_products = false);

/// v_t of the dissipative variant: solve(nu1*Lap(v) - div_flux + htilde
/// e^{-x2}) with htilde = h_x1x1t + nu1*(h_x1x1 + h). nu1 = 0 reproduces
/// rhs_gbbm exactly; nu1 < 0 is a hard error.
Field rhs_burgers(const Field& v, const BoundarySignal& h, double t,
                  const FluxSpec& flux, double nu1,
                  const HelmholtzSolver& solver,
                  bool dealias_products = false);

/// Wall line integral of v * phi(w) . n at x2 = 0. The sine
/// representation vanishes on the wall, so this is exactly zero; it is
/// reported as a computed diagnostic.
double boundary_flux_integral(const Field& v, const BoundarySignal& h,
                              double t, const FluxSpec& flux);

/// Divergence-theorem balance for the antiderivative flux: area integral
/// of div(Phi(w)) against the boundary line integral of Phi . n. The
/// area quadrature is the x2 trapezoid including analytically known wall
/// rows; scale is a magnitude reference for relative comparison.
struct FluxBalance {
  double area_integral;
  double line_integral;
  double scale;
};
FluxBalance flux_divergence_balance(const Field& v, const BoundarySignal& h,
                                    double t, const FluxSpec& flux);

}  // namespace gbbm
