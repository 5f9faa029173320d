#include "gbbm/verify.hpp"

#include <algorithm>
#include <cmath>

namespace gbbm {

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Forcing F with (I - Lap) v_t = F, matching the evolution rhs.
Field assemble_forcing(const SimState& s, const BoundarySignal& h,
                       const FluxSpec& flux) {
  const LiftingFields lift = make_lifting(s.v.grid(), h, s.t);
  Field f = lift.hxxtE;
  f -= div_flux(s.v, h, s.t, flux);
  if (s.nu1 > 0.0) {
    f.axpy(s.nu1, laplacian(s.v));
    f.axpy(s.nu1, lift.hxxE);
    f.axpy(s.nu1, lift.hE);
  }
  return f;
}

EnergyReport identity_check(const std::vector<SimState>& traj,
                            const BoundarySignal& h, const FluxSpec& flux) {
  if (traj.size() < 3) {
    throw std::invalid_argument(
        "identity check needs at least 3 snapshots");
  }
  const std::size_t n = traj.size();
  EnergyReport rep;
  rep.times.resize(n);
  rep.e_h1.resize(n);
  rep.e_h2.resize(n);
  rep.boundary_flux.resize(n);

  std::vector<double> rhs1(n), rhs2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const SimState& s = traj[i];
    rep.times[i] = s.t;
    const SpectralField c = forward(s.v);
    const double h1n = sobolev_norm(c, 1.0);
    const double h2n = sobolev_norm(c, 2.0);
    rep.e_h1[i] = h1n * h1n;              // sum (1+lam) |c|^2
    rep.e_h2[i] = h2n * h2n - h1n * h1n;  // sum (lam+lam^2) |c|^2
    rep.boundary_flux[i] = boundary_flux_integral(s.v, h, s.t, flux);

    const Field f = assemble_forcing(s, h, flux);
    rhs1[i] = inner_l2(f, s.v);
    Field neg_lap = laplacian(s.v);
    neg_lap *= -1.0;
    rhs2[i] = inner_l2(f, neg_lap);
  }

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double dt_c = rep.times[i + 1] - rep.times[i - 1];
    rep.res_times.push_back(rep.times[i]);
    const double d1 = (rep.e_h1[i + 1] - rep.e_h1[i - 1]) / dt_c / 2.0;
    const double d2 = (rep.e_h2[i + 1] - rep.e_h2[i - 1]) / dt_c / 2.0;
    rep.dt_e_h1.push_back(d1);
    rep.rhs_h1.push_back(rhs1[i]);
    rep.resid_h1.push_back(std::abs(d1 - rhs1[i]));
    rep.dt_e_h2.push_back(d2);
    rep.rhs_h2.push_back(rhs2[i]);
    rep.resid_h2.push_back(std::abs(d2 - rhs2[i]));
  }
  return rep;
}

}  // namespace

double EnergyReport::max_resid_h1() const { return max_abs(resid_h1); }
double EnergyReport::max_resid_h2() const { return max_abs(resid_h2); }

EnergyReport h1_identity_check(const std::vector<SimState>& traj,
                               const BoundarySignal& h, const FluxSpec& flux) {
  return identity_check(traj, h, flux);
}

EnergyReport h2_identity_check(const std::vector<SimState>& traj,
                               const BoundarySignal& h, const FluxSpec& flux) {
  return identity_check(traj, h, flux);
}

GronwallFit gronwall_envelope(const EnergyReport& rep, double h_norm) {
  const double e0 = rep.e_h1.empty() ? 0.0 : rep.e_h1.front();
  const double hn = h_norm;
  auto envelope_at = [&](double t, double c) {
    return std::sqrt(e0 + c * t * hn * hn * (1.0 + hn)) *
           std::exp(c * t * (1.0 + hn));
  };
  auto dominates = [&](double c) {
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
      const double lhs = std::sqrt(std::max(0.0, rep.e_h1[i]));
      const double env = envelope_at(rep.times[i], c);
      if (lhs > env * (1.0 + 1e-8) + 1e-300) return false;
    }
    return true;
  };

  GronwallFit fit;
  if (!dominates(0.0)) {
    double lo = 0.0, hi = 1.0;
    while (!dominates(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e12) break;
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (dominates(mid) ? hi : lo) = mid;
    }
    fit.C = hi;
  }
  fit.envelope.resize(rep.times.size());
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    fit.envelope[i] = envelope_at(rep.times[i], fit.C);
  }
  return fit;
}

DependenceReport dependence_experiment(const RunConfig& cfg,
                                       const InitialData& dg,
                                       const BoundarySignal& dh,
                                       const std::vector<double>& epsilons) {
  const GridPtr grid = build_grid(cfg);
  const GridSpec& g = *grid;
  const InitialData base_g = build_initial(cfg);
  const BoundarySignal base_h = build_signal(cfg);
  const FluxSpec flux = build_flux(cfg);

  RunConfig rc = cfg;
  rc.mode = "rk4";
  const RunResult base = run_core(rc, grid, base_g, base_h, flux);
  const Field gtilde_base = make_gtilde(grid, base_g, base_h).gtilde;
  const std::vector<double> e_profile = lifting_profile(g);

  DependenceReport rep;
  for (const double eps : epsilons) {
    const InitialData g2 = base_g + dg.scaled(eps);
    const BoundarySignal h2 = base_h + dh.scaled(eps);
    const RunResult pert = run_core(rc, grid, g2, h2, flux);

    const BoundarySignal h_diff = dh.scaled(eps);
    double delta = 0.0;
    const std::size_t n = std::min(base.snapshots.size(),
                                   pert.snapshots.size());
    for (std::size_t i = 0; i < n; ++i) {
      // u1 - u2 = (v1 - v2) + (h1 - h2) e^{-x2}
      Field d = base.snapshots[i].v;
      d -= pert.snapshots[i].v;
      const std::vector<double> hrow =
          h_diff.sample(g, base.snapshots[i].t);
      for (int i1 = 0; i1 < g.nx(); ++i1) {
        for (int k = 0; k < g.ny(); ++k) {
          d.at(i1, k) -= hrow[i1] * e_profile[k];
        }
      }
      delta = std::max(delta, sobolev_norm(d, 2.0));
    }

    Field gt_diff = make_gtilde(grid, g2, h2).gtilde;
    gt_diff -= gtilde_base;
    double dh_norm = 0.0;
    for (const SimState& s : base.snapshots) {
      dh_norm = std::max(
          dh_norm, row_sobolev_norm(g, h_diff.sample(g, s.t), 2.0) +
                       row_sobolev_norm(g, h_diff.sample_dt(g, s.t), 2.0));
    }
    const double denom = sobolev_norm(gt_diff, 2.0) + dh_norm;

    rep.epsilons.push_back(eps);
    rep.deltas.push_back(delta);
    rep.denominators.push_back(denom);
    rep.ratios_eps.push_back(eps > 0.0 ? delta / eps : 0.0);
    rep.ratios_data.push_back(denom > 0.0 ? delta / denom : 0.0);
  }

  double c = 0.0;
  for (std::size_t i = 0; i < rep.epsilons.size(); ++i) {
    if (rep.denominators[i] > 0.0 && rep.deltas[i] > rep.denominators[i] &&
        cfg.T > 0.0) {
      c = std::max(c, std::log(rep.deltas[i] / rep.denominators[i]) / cfg.T);
    }
  }
  rep.fitted_c = c;
  for (std::size_t i = 0; i < rep.epsilons.size(); ++i) {
    rep.envelope.push_back(rep.denominators[i] * std::exp(c * cfg.T));
  }
  return rep;
}

ConvergenceStudy convergence_study(const RunConfig& cfg) {
  ConvergenceStudy st;
  RunConfig rc = cfg;
  rc.mode = "rk4";
  // Snapshots only at the endpoint.
  rc.snapshot_every = 1 << 28;

  const GridPtr grid = build_grid(rc);
  const InitialData g = build_initial(rc);
  const BoundarySignal h = build_signal(rc);
  const FluxSpec flux = build_flux(rc);

  std::vector<Field> endpoints;
  for (int level = 0; level < 4; ++level) {
    RunConfig c = rc;
    c.dt = rc.dt / static_cast<double>(1 << level);
    st.dts.push_back(c.dt);
    endpoints.push_back(run_core(c, grid, g, h, flux).snapshots.back().v);
  }
  for (int level = 0; level + 1 < 4; ++level) {
    Field d = endpoints[level];
    d -= endpoints[level + 1];
    st.dt_errors.push_back(sobolev_norm(d, 2.0));
  }
  for (std::size_t i = 0; i + 1 < st.dt_errors.size(); ++i) {
    st.dt_factors.push_back(
        st.dt_errors[i + 1] > 0.0 ? st.dt_errors[i] / st.dt_errors[i + 1]
                                  : 0.0);
  }

  auto final_u_norm = [&](const RunConfig& c) {
    const GridPtr gr = build_grid(c);
    const RunResult r =
        run_core(c, gr, build_initial(c), build_signal(c), build_flux(c));
    const SimState& s = r.snapshots.back();
    Field u = s.v;
    const std::vector<double> hrow = build_signal(c).sample(*gr, s.t);
    const std::vector<double> e = lifting_profile(*gr);
    for (int i = 0; i < gr->nx(); ++i) {
      for (int k = 0; k < gr->ny(); ++k) {
        u.at(i, k) += hrow[i] * e[k];
      }
    }
    return sobolev_norm(u, 2.0);
  };
  RunConfig doubled = rc;
  doubled.L2 *= 2.0;
  doubled.N2 *= 2;
  st.l2_base_norm = final_u_norm(rc);
  st.l2_doubled_norm = final_u_norm(doubled);
  st.l2_rel_change = std::abs(st.l2_base_norm - st.l2_doubled_norm) /
                     std::max(st.l2_base_norm, 1e-300);
  return st;
}

}  // namespace gbbm
