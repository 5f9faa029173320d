#include "gbbm/evolve.hpp"

#include <algorithm>
#include <cmath>

namespace gbbm {

namespace {

Field eval_rhs(const Field& v, double t, const BoundarySignal& h,
               const FluxSpec& flux, double nu1, const HelmholtzSolver& solver,
               bool dealias_products) {
  return nu1 == 0.0
             ? rhs_gbbm(v, h, t, flux, solver, dealias_products)
             : rhs_burgers(v, h, t, flux, nu1, solver, dealias_products);
}

/// C1_t H2 norm estimate of h over [t0, t1], sampled.
double signal_c1h2_norm(const GridSpec& g, const BoundarySignal& h, double t0,
                        double t1, int samples = 33) {
  if (h.is_zero()) return 0.0;
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double t = t0 + (t1 - t0) * s / std::max(1, samples - 1);
    const double n0 = row_sobolev_norm(g, h.sample(g, t), 2.0);
    const double n1 = row_sobolev_norm(g, h.sample_dt(g, t), 2.0);
    best = std::max(best, n0 + n1);
  }
  return best;
}

}  // namespace

PicardResult picard_window(const Field& v0, const BoundarySignal& h,
                           const FluxSpec& flux, double t0, double S,
                           int n_quad, double tol, int max_iter,
                           const HelmholtzSolver& solver,
                           bool dealias_products) {
  if (!(S > 0.0)) throw std::invalid_argument("picard_window: S must be > 0");
  if (n_quad < 2) {
    throw std::invalid_argument("picard_window: need at least 2 nodes");
  }
  const GridPtr& grid = v0.grid();
  const GridSpec& g = *grid;
  const double dtau = S / (n_quad - 1);

  std::vector<double> times(n_quad);
  for (int q = 0; q < n_quad; ++q) times[q] = t0 + dtau * q;

  // Boundary term B h(t) = solve({hxx(t) - hxx(t0)} e^{-x2}), exact in t
  // at the nodes.
  const std::vector<double> e = lifting_profile(g);
  const std::vector<double> hxx0 = row_ddx1(g, row_ddx1(g, h.sample(g, t0)));
  std::vector<Field> base;
  base.reserve(n_quad);
  double max_b = 0.0;
  for (int q = 0; q < n_quad; ++q) {
    Field bh(grid);
    const std::vector<double> hxx =
        row_ddx1(g, row_ddx1(g, h.sample(g, times[q])));
    for (int i = 0; i < g.nx(); ++i) {
      for (int k = 0; k < g.ny(); ++k) {
        bh.at(i, k) = (hxx[i] - hxx0[i]) * e[k];
      }
    }
    bh = solver.solve(bh);
    max_b = std::max(max_b, sobolev_norm(bh, 2.0));
    bh += v0;
    base.push_back(std::move(bh));
  }

  PicardReport rep;
  rep.S = S;
  const double c1 = sobolev_norm(v0, 2.0) + max_b;
  rep.R = 2.0 * c1;

  std::vector<Field> traj = base;  // iterate 0: v0 + B h
  std::vector<Field> integrand(n_quad, Field(grid));
  for (int iter = 1; iter <= max_iter; ++iter) {
    rep.iterations = iter;
    for (int q = 0; q < n_quad; ++q) {
      integrand[q] =
          solver.solve(div_flux(traj[q], h, times[q], flux, dealias_products));
    }
    // next_q = base_q - trapezoid of the integrand over [t0, t_q]
    std::vector<Field> next;
    next.reserve(n_quad);
    Field prefix(grid);
    next.push_back(base[0]);
    for (int q = 1; q < n_quad; ++q) {
      prefix.axpy(0.5 * dtau, integrand[q - 1]);
      prefix.axpy(0.5 * dtau, integrand[q]);
      Field vq = base[q];
      vq.axpy(-1.0, prefix);
      next.push_back(std::move(vq));
    }

    double diff = 0.0, norm = 0.0;
    for (int q = 0; q < n_quad; ++q) {
      Field d = next[q];
      d -= traj[q];
      diff = std::max(diff, sobolev_norm(d, 2.0));
      norm = std::max(norm, sobolev_norm(next[q], 2.0));
    }
    rep.diffs.push_back(diff);
    rep.max_norm = std::max(rep.max_norm, norm);
    traj = std::move(next);

    if (!std::isfinite(diff) || (rep.R > 0.0 && norm > rep.R)) {
      rep.ball_exceeded = true;
      throw PicardError(rep);
    }
    if (diff < tol) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged) throw PicardError(rep);
  return PicardResult{std::move(traj), std::move(times), std::move(rep)};
}

WindowCalibration calibrate_contraction(const GridPtr& grid,
                                        const HelmholtzSolver& solver,
                                        const BoundarySignal& h,
                                        const FluxSpec& flux, double t,
                                        double ball_radius, int n_probes,
                                        std::uint64_t seed) {
  WindowCalibration cal;
  cal.ball_radius = ball_radius;
  cal.n_probes = n_probes;
  const double l2 = grid->L2();
  // |psi(x1) e^{-x2}|_L2 = |psi|_L2 * sqrt((1 - e^{-2 L2})/2); the factor
  // 2 covers the two boundary evaluations in B.
  cal.c_b = 2.0 * std::sqrt((1.0 - std::exp(-2.0 * l2)) / 2.0);

  const double r = ball_radius > 0.0 ? ball_radius : 1.0;
  for (int p = 0; p < n_probes; ++p) {
    Field va = random_smooth_field(grid, seed + 2 * p, 3.0, r);
    Field delta = random_smooth_field(grid, seed + 2 * p + 1, 3.0, 0.1 * r);
    Field vb = va;
    vb += delta;
    Field fa = solver.solve(div_flux(va, h, t, flux));
    Field fb = solver.solve(div_flux(vb, h, t, flux));
    fb -= fa;
    const double dn = sobolev_norm(delta, 2.0);
    if (dn > 0.0) {
      cal.c2_hat = std::max(cal.c2_hat, sobolev_norm(fb, 2.0) / dn);
    }
  }
  return cal;
}

double suggest_window(double gtilde_h2, double h_norm,
                      const WindowCalibration& cal, double max_window) {
  const double c1 = gtilde_h2 + cal.c_b * h_norm;
  if (c1 <= 0.0 || cal.c2_hat <= 0.0) return max_window;
  return std::min(max_window, 1.0 / (2.0 * cal.c2_hat * (1.0 + 2.0 * c1)));
}

SimState rk4_advance(SimState state, double dt, long n_steps,
                     const BoundarySignal& h, const FluxSpec& flux,
                     double nu1, const HelmholtzSolver& solver,
                     double blowup_ceiling, bool dealias_products) {
  auto rhs = [&](const Field& v, double t) {
    return eval_rhs(v, t, h, flux, nu1, solver, dealias_products);
  };
  for (long s = 0; s < n_steps; ++s) {
    const double t = state.t;
    const Field k1 = rhs(state.v, t);
    Field tmp = state.v;
    tmp.axpy(0.5 * dt, k1);
    const Field k2 = rhs(tmp, t + 0.5 * dt);
    tmp = state.v;
    tmp.axpy(0.5 * dt, k2);
    const Field k3 = rhs(tmp, t + 0.5 * dt);
    tmp = state.v;
    tmp.axpy(dt, k3);
    const Field k4 = rhs(tmp, t + dt);

    state.v.axpy(dt / 6.0, k1);
    state.v.axpy(dt / 3.0, k2);
    state.v.axpy(dt / 3.0, k3);
    state.v.axpy(dt / 6.0, k4);
    state.t = t + dt;
    ++state.step_count;

    const double h2 = sobolev_norm(state.v, 2.0);
    if (!std::isfinite(h2) || h2 > blowup_ceiling) {
      throw NumericalError("blow-up guard tripped at step " +
                           std::to_string(state.step_count) + " (t = " +
                           std::to_string(state.t) + ", |v|_H2 = " +
                           std::to_string(h2) + ")");
    }
  }
  return state;
}

namespace {

struct Problem {
  GridPtr grid;
  InitialData g;
  BoundarySignal h;
  FluxSpec flux;
  Field v0;
  double blowup_ceiling = 0.0;
};

Problem setup_problem(const RunConfig& cfg, const GridPtr& grid,
                      const InitialData& g, const BoundarySignal& h,
                      const FluxSpec& flux, RunResult& result) {
  h.check_seam(*grid);
  GtildeResult gt = make_gtilde(grid, g, h);
  result.gtilde_corner_mismatch = gt.corner_mismatch;
  result.gtilde_far_wall = gt.far_wall_max;
  result.gtilde_interior_max = gt.interior_max;
  if (gt.interior_max > 0.0 &&
      gt.far_wall_max >= 1e-8 * gt.interior_max) {
    char ratio[32];
    std::snprintf(ratio, sizeof ratio, "%.3g",
                  gt.far_wall_max / gt.interior_max);
    throw ConfigError(
        "initial data does not decay at the truncation wall x2 = L2 "
        "(|gtilde| there is " +
        std::string(ratio) + " of its peak); increase L2");
  }
  Problem p{grid, g, h, flux, std::move(gt.gtilde), 0.0};
  p.blowup_ceiling =
      cfg.blowup_factor * std::max(sobolev_norm(p.v0, 2.0), 1e-12);
  return p;
}

SimState initial_state(const RunConfig& cfg, const Problem& p) {
  SimState s;
  s.v = p.v0;
  s.t = 0.0;
  s.step_count = 0;
  s.flux_name = p.flux.name();
  s.nu1 = cfg.nu1;
  s.dt = cfg.dt;
  return s;
}

void run_rk4_mode(const RunConfig& cfg, const Problem& p,
                  const HelmholtzSolver& solver, RunResult& out) {
  SimState state = initial_state(cfg, p);
  out.snapshots.push_back(state);
  const long n_full = static_cast<long>(std::floor(cfg.T / cfg.dt + 1e-9));
  const double t_rem = cfg.T - n_full * cfg.dt;
  long done = 0;
  while (done < n_full) {
    const long chunk = std::min<long>(cfg.snapshot_every, n_full - done);
    state = rk4_advance(std::move(state), cfg.dt, chunk, p.h, p.flux, cfg.nu1,
                        solver, p.blowup_ceiling, cfg.dealias);
    done += chunk;
    out.snapshots.push_back(state);
  }
  if (t_rem > 1e-12 * std::max(1.0, cfg.T)) {
    state = rk4_advance(std::move(state), t_rem, 1, p.h, p.flux, cfg.nu1,
                        solver, p.blowup_ceiling, cfg.dealias);
    out.snapshots.push_back(state);
  }
}

/// One Picard window with halving-on-failure. Returns the accepted
/// result and pushes every attempt's report.
PicardResult picard_step_with_halving(const RunConfig& cfg, const Problem& p,
                                      const HelmholtzSolver& solver,
                                      const Field& v, double t, double S0,
                                      std::vector<PicardReport>& reports) {
  double S = S0;
  for (int attempt = 0; attempt <= cfg.halvings; ++attempt) {
    try {
      PicardResult res =
          picard_window(v, p.h, p.flux, t, S, cfg.n_quad, cfg.picard_tol,
                        cfg.picard_max_iter, solver, cfg.dealias);
      reports.push_back(res.report);
      return res;
    } catch (const PicardError& err) {
      reports.push_back(err.report);
      S *= 0.5;
    }
  }
  throw NumericalError("picard windows failed to converge after " +
                       std::to_string(cfg.halvings) +
                       " halvings at t = " + std::to_string(t));
}

void run_picard_mode(const RunConfig& cfg, const Problem& p,
                     const HelmholtzSolver& solver, RunResult& out,
                     std::vector<SimState>* node_states) {
  const GridSpec& g = *p.grid;
  const WindowCalibration cal = calibrate_contraction(
      p.grid, solver, p.h, p.flux, 0.0,
      2.0 * std::max(sobolev_norm(p.v0, 2.0), 1.0), 8, cfg.seed);
  const double h_norm = signal_c1h2_norm(g, p.h, 0.0, cfg.T);

  SimState state = initial_state(cfg, p);
  auto emit = [&](const SimState& s) {
    if (node_states) {
      node_states->push_back(s);
    } else {
      out.snapshots.push_back(s);
    }
  };
  emit(state);

  long node_index = 0;
  while (state.t < cfg.T - 1e-12 * std::max(1.0, cfg.T)) {
    const double cap = std::min(cfg.max_window, cfg.T - state.t);
    const double S =
        suggest_window(sobolev_norm(state.v, 2.0), h_norm, cal, cap);
    PicardResult res = picard_step_with_halving(cfg, p, solver, state.v,
                                                state.t, S, out.picard_reports);
    for (std::size_t q = 1; q < res.trajectory.size(); ++q) {
      ++node_index;
      SimState ns = state;
      ns.v = res.trajectory[q];
      ns.t = res.times[q];
      ns.step_count = node_index;
      const bool last_node = q + 1 == res.trajectory.size();
      if (node_states || node_index % cfg.snapshot_every == 0 ||
          (last_node && ns.t >= cfg.T - 1e-12)) {
        emit(ns);
      }
      if (last_node) state = std::move(ns);
    }
  }
}

}  // namespace

RunResult run_core(const RunConfig& cfg, const GridPtr& grid,
                   const InitialData& g, const BoundarySignal& h,
                   const FluxSpec& flux) {
  RunResult out;
  const Problem p = setup_problem(cfg, grid, g, h, flux, out);
  const HelmholtzSolver solver(grid);

  if (cfg.mode == "rk4") {
    run_rk4_mode(cfg, p, solver, out);
  } else if (cfg.mode == "picard") {
    run_picard_mode(cfg, p, solver, out, nullptr);
  } else {  // both: RK4 production output plus cross-method comparison
    run_rk4_mode(cfg, p, solver, out);
    std::vector<SimState> nodes;
    RunResult aux;
    run_picard_mode(cfg, p, solver, aux, &nodes);
    out.picard_reports = aux.picard_reports;
    double gap = 0.0;
    SimState ref = initial_state(cfg, p);
    for (const SimState& ns : nodes) {
      const double delta = ns.t - ref.t;
      if (delta > 1e-14) {
        const long n_sub =
            std::max<long>(1, static_cast<long>(std::ceil(delta / cfg.dt - 1e-9)));
        ref = rk4_advance(std::move(ref), delta / n_sub, n_sub, p.h, p.flux,
                          cfg.nu1, solver, p.blowup_ceiling, cfg.dealias);
      }
      Field d = ns.v;
      d -= ref.v;
      gap = std::max(gap, sobolev_norm(d, 2.0));
    }
    out.cross_method_h2 = gap;
  }
  return out;
}

RunResult run(const RunConfig& cfg) {
  return run_core(cfg, build_grid(cfg), build_initial(cfg), build_signal(cfg),
                  build_flux(cfg));
}

double compare_methods(const RunConfig& cfg, const GridPtr& grid,
                       const InitialData& g, const BoundarySignal& h,
                       const FluxSpec& flux) {
  RunConfig c = cfg;
  c.mode = "both";
  return run_core(c, grid, g, h, flux).cross_method_h2;
}

}  // namespace gbbm
