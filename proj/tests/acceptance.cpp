// Acceptance suite: end-to-end checks at desk scale, one pass/fail line
// per criterion. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gbbm/cli.hpp"
#include "gbbm/config.hpp"
#include "gbbm/evolve.hpp"
#include "gbbm/io.hpp"
#include "gbbm/selftest.hpp"
#include "gbbm/verify.hpp"

using namespace gbbm;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

int g_failures = 0;
std::chrono::steady_clock::time_point g_t0;

void begin() { g_t0 = std::chrono::steady_clock::now(); }

void record(int id, const std::string& name, bool ok, double budget_s,
            const std::string& detail) {
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - g_t0)
          .count();
  const bool in_budget = elapsed < budget_s;
  const bool pass = ok && in_budget;
  if (!pass) ++g_failures;
  std::printf("%s [%2d] %-34s %s (%.1f s / %.0f s)\n", pass ? "PASS" : "FAIL",
              id, name.c_str(), detail.c_str(), elapsed, budget_s);
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

/// Shared desk-scale scenario: pulse wavemaker, decaying gaussian bump.
RunConfig scenario(double L2, int n1, int n2) {
  RunConfig c;
  c.L1 = 4.0 * kPi;
  c.L2 = L2;
  c.N1 = n1;
  c.N2 = n2;
  c.flux_name = "bbm";
  c.signal_name = "pulse";
  c.sig_amp = 0.25;
  c.sig_center = 2.0 * kPi;
  c.sig_width = 1.2;
  c.sig_omega = 2.0 * kPi;
  c.initial_name = "gaussian";
  c.init_amp = 0.5;
  c.init_center1 = 2.0 * kPi;
  c.init_center2 = 3.0;
  c.init_width = 1.2;
  c.T = 1.0;
  c.dt = 5e-4;
  return c;
}

void criterion_1_helmholtz_oracle() {
  begin();
  const GridPtr grid = GridSpec::make(4.0 * kPi, 8.0, 16, 8);
  const HelmholtzSuiteResult res = run_helmholtz_suite(grid, 25, 424242);
  record(1, "helmholtz dense oracle",
         res.max_solution_err <= 1e-10 && res.max_residual_rel <= 1e-11, 5.0,
         "max_err=" + fmt(res.max_solution_err) +
             " resid=" + fmt(res.max_residual_rel));
}

void criterion_2_h2_bound() {
  begin();
  const GridPtr grid = GridSpec::make(4.0 * kPi, 8.0, 32, 24);
  const HelmholtzSolver solver(grid);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Field f(grid);
    for (double& x : f.values()) x = gauss(rng);
    const auto [lhs, rhs] = solver.h2_bound_check(f);
    worst = std::max(worst, lhs / rhs);
  }
  record(2, "h2 bound with constant one", worst <= 1.0 + 1e-12, 5.0,
         "max ratio=" + format_g17(worst).substr(0, 10));
}

void criterion_3_contraction() {
  begin();
  RunConfig c = scenario(20.0, 128, 64);
  c.dt = 1e-3;
  const GridPtr grid = build_grid(c);
  const BoundarySignal h = build_signal(c);
  const FluxSpec flux = build_flux(c);
  const HelmholtzSolver solver(grid);
  const Field v0 = make_gtilde(grid, build_initial(c), h).gtilde;

  const double g_h2 = sobolev_norm(v0, 2.0);
  double h_norm = 0.0;
  for (int s = 0; s <= 32; ++s) {
    const double t = 0.25 * s / 32.0;
    h_norm = std::max(h_norm,
                      row_sobolev_norm(*grid, h.sample(*grid, t), 2.0) +
                          row_sobolev_norm(*grid, h.sample_dt(*grid, t), 2.0));
  }
  const WindowCalibration cal =
      calibrate_contraction(grid, solver, h, flux, 0.0, 2.0 * g_h2, 8, 99);
  double S = suggest_window(g_h2, h_norm, cal, 0.25);

  bool converged = false;
  PicardResult pic;
  int halvings = 0;
  for (; halvings <= 3; ++halvings) {
    try {
      const int n_quad = std::max(2, static_cast<int>(std::lround(S / 5e-4)) + 1);
      pic = picard_window(v0, h, flux, 0.0, S, n_quad, 1e-9, 60, solver);
      converged = pic.report.converged;
      break;
    } catch (const PicardError&) {
      S *= 0.5;
    }
  }

  bool decreasing = converged && !pic.report.diffs.empty();
  if (converged) {
    // Once below the first difference, the sequence must not increase.
    const double d0 = pic.report.diffs.front();
    bool below = false;
    for (std::size_t i = 1; i < pic.report.diffs.size(); ++i) {
      if (below && pic.report.diffs[i] > pic.report.diffs[i - 1] * (1 + 1e-9)) {
        decreasing = false;
      }
      if (pic.report.diffs[i] < d0) below = true;
    }
  }

  double gap = 0.0;
  if (converged) {
    SimState s;
    s.v = v0;
    s.flux_name = flux.name();
    s.dt = c.dt;
    for (std::size_t q = 1; q < pic.trajectory.size(); ++q) {
      const double delta = pic.times[q] - pic.times[q - 1];
      const long n_sub =
          std::max<long>(1, static_cast<long>(std::ceil(delta / c.dt - 1e-9)));
      s = rk4_advance(std::move(s), delta / n_sub, n_sub, h, flux, 0.0, solver,
                      1e9);
      Field d = pic.trajectory[q];
      d -= s.v;
      gap = std::max(gap, sobolev_norm(d, 2.0));
    }
  }
  record(3, "picard contraction vs rk4",
         converged && decreasing && gap < 1e-6, 120.0,
         "S=" + fmt(S) + " halvings=" + std::to_string(halvings) +
             " iters=" + std::to_string(pic.report.iterations) +
             " gap=" + fmt(gap));
}

void criterion_4_energy_conservation() {
  begin();
  RunConfig c = scenario(20.0, 128, 64);
  c.signal_name = "zero";
  c.dt = 5e-4;
  c.T = 1.0;
  const GridPtr grid = build_grid(c);
  const BoundarySignal h = build_signal(c);
  const FluxSpec flux = build_flux(c);
  const HelmholtzSolver solver(grid);
  const Field v0 = make_gtilde(grid, build_initial(c), h).gtilde;
  const double e0 = std::pow(sobolev_norm(v0, 1.0), 2);

  SimState s;
  s.v = v0;
  s.dt = c.dt;
  double drift = 0.0;
  const long n_steps = std::lround(c.T / c.dt);
  for (long done = 0; done < n_steps; done += 10) {
    const long chunk = std::min<long>(10, n_steps - done);
    s = rk4_advance(std::move(s), c.dt, chunk, h, flux, 0.0, solver, 1e9);
    const double e = std::pow(sobolev_norm(s.v, 1.0), 2);
    drift = std::max(drift, std::abs(e - e0));
  }
  record(4, "energy conservation (h=0)", drift <= 1e-8 * e0, 120.0,
         "max |E-E0|/E0=" + fmt(drift / e0));
}

void criterion_5_burgers_dissipation() {
  begin();
  RunConfig c = scenario(20.0, 128, 64);
  c.signal_name = "zero";
  c.nu1 = 1.0;
  c.dt = 5e-4;
  const GridPtr grid = build_grid(c);
  const BoundarySignal h = build_signal(c);
  const FluxSpec flux = build_flux(c);
  const HelmholtzSolver solver(grid);

  SimState s;
  s.v = make_gtilde(grid, build_initial(c), h).gtilde;
  s.nu1 = 1.0;
  s.dt = c.dt;
  double prev = std::pow(sobolev_norm(s.v, 1.0), 2);
  bool monotone = true;
  double worst_rise = 0.0;
  for (int step = 0; step < 1000; ++step) {
    s = rk4_advance(std::move(s), c.dt, 1, h, flux, 1.0, solver, 1e9);
    const double e = std::pow(sobolev_norm(s.v, 1.0), 2);
    worst_rise = std::max(worst_rise, e - prev);
    if (e > prev + 1e-10) monotone = false;
    prev = e;
  }
  record(5, "burgers dissipation (nu1=1)", monotone, 120.0,
         "worst per-step rise=" + fmt(worst_rise));
}

void criterion_6_identity_residuals() {
  begin();
  RunConfig c = scenario(8.0, 64, 32);
  c.init_center2 = 2.5;
  c.init_width = 1.1;
  c.T = 0.24;
  c.dt = 1e-3;
  c.snapshot_every = 1;
  const RunResult res = run(c);
  const BoundarySignal h = build_signal(c);
  const FluxSpec flux = build_flux(c);

  auto strided = [&](int k) {
    std::vector<SimState> out;
    for (std::size_t i = 0; i < res.snapshots.size(); i += k) {
      out.push_back(res.snapshots[i]);
    }
    return out;
  };
  const EnergyReport r8 = h1_identity_check(strided(8), h, flux);
  const EnergyReport r4 = h1_identity_check(strided(4), h, flux);
  const EnergyReport r2 = h1_identity_check(strided(2), h, flux);
  const double f1a = r8.max_resid_h1() / r4.max_resid_h1();
  const double f1b = r4.max_resid_h1() / r2.max_resid_h1();
  const double f2a = r8.max_resid_h2() / r4.max_resid_h2();
  const double f2b = r4.max_resid_h2() / r2.max_resid_h2();
  const bool ok = f1a >= 3.5 && f1b >= 3.5 && f2a >= 3.5 && f2b >= 3.5;
  record(6, "identity residual convergence", ok, 180.0,
         "h1 factors=" + fmt(f1a) + "," + fmt(f1b) + " h2=" + fmt(f2a) + "," +
             fmt(f2b));
}

void criterion_7_dependence() {
  begin();
  RunConfig c = scenario(8.0, 64, 32);
  c.init_center2 = 2.5;
  c.init_width = 1.1;
  c.T = 0.5;
  c.dt = 1e-3;
  c.snapshot_every = 25;
  const InitialData dg = InitialData::gaussian(0.4, 2.0 * kPi + 1.5, 2.2, 1.0);
  const BoundarySignal dh =
      BoundarySignal::pulse(0.3, 2.0 * kPi - 1.5, 1.0, kPi);
  const DependenceReport rep =
      dependence_experiment(c, dg, dh, {0.1, 0.05, 0.025, 0.0125});

  const double spread =
      std::abs(rep.ratios_eps[3] - rep.ratios_eps[2]) / rep.ratios_eps[3];
  bool dominated = true;
  for (std::size_t i = 0; i < rep.deltas.size(); ++i) {
    if (rep.deltas[i] > rep.envelope[i] * (1.0 + 1e-12)) dominated = false;
  }
  record(7, "continuous dependence", spread < 0.1 && dominated, 300.0,
         "ratio spread=" + fmt(spread) + " C=" + fmt(rep.fitted_c));
}

void criterion_8_rk4_order() {
  begin();
  RunConfig c = scenario(8.0, 64, 32);
  c.init_center2 = 2.5;
  c.init_width = 1.1;
  c.T = 0.2;
  c.dt = 4e-3;
  const ConvergenceStudy st = convergence_study(c);
  bool ok = st.dt_factors.size() == 2;
  for (double f : st.dt_factors) ok = ok && f > 12.0 && f < 20.0;
  record(8, "rk4 temporal order", ok, 120.0,
         "factors=" + fmt(st.dt_factors[0]) + "," + fmt(st.dt_factors[1]));
}

void criterion_9_truncation() {
  begin();
  RunConfig c = scenario(20.0, 64, 128);
  c.T = 0.5;
  c.dt = 1e-3;
  c.snapshot_every = 1 << 28;
  auto final_norm = [&](const RunConfig& cc) {
    const GridPtr grid = build_grid(cc);
    const BoundarySignal h = build_signal(cc);
    const RunResult r =
        run_core(cc, grid, build_initial(cc), h, build_flux(cc));
    const SimState& s = r.snapshots.back();
    Field u = s.v;
    const std::vector<double> hrow = h.sample(*grid, s.t);
    const std::vector<double> e = lifting_profile(*grid);
    for (int i = 0; i < grid->nx(); ++i) {
      for (int k = 0; k < grid->ny(); ++k) u.at(i, k) += hrow[i] * e[k];
    }
    return sobolev_norm(u, 2.0);
  };
  const double base = final_norm(c);
  RunConfig doubled = c;
  doubled.L2 *= 2.0;
  doubled.N2 *= 2;
  const double wide = final_norm(doubled);
  const double rel = std::abs(base - wide) / base;
  record(9, "truncation robustness", rel < 1e-6, 180.0,
         "rel change=" + fmt(rel));
}

void criterion_10_determinism() {
  begin();
  const fs::path dir = fs::temp_directory_path() / "gbbm_acceptance_det";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto config_text = [&](const std::string& out) {
    RunConfig c = scenario(8.0, 32, 16);
    c.init_center2 = 2.5;
    c.T = 0.05;
    c.dt = 1e-3;
    c.out_dir = (dir / out).string();
    c.snapshot_every = 10;
    return serialize_config(c);
  };
  const fs::path cfg_a = dir / "a.cfg";
  const fs::path cfg_b = dir / "b.cfg";
  std::ofstream(cfg_a) << config_text("out_a");
  std::ofstream(cfg_b) << config_text("out_b");

  const int rc_a = cli_main({"run", cfg_a.string()});
  const int rc_b = cli_main({"run", cfg_b.string()});

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  bool identical = rc_a == 0 && rc_b == 0;
  int compared = 0;
  if (identical) {
    for (const auto& entry : fs::directory_iterator(dir / "out_a")) {
      if (entry.path().filename() == "run.log") continue;  // embeds out dir
      const fs::path other = dir / "out_b" / entry.path().filename();
      if (!fs::exists(other) ||
          slurp(entry.path()) != slurp(other)) {
        identical = false;
      }
      ++compared;
    }
  }
  fs::remove_all(dir);
  record(10, "byte-identical repeated runs", identical && compared > 0, 60.0,
         std::to_string(compared) + " files compared");
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion_1_helmholtz_oracle();
  criterion_2_h2_bound();
  criterion_3_contraction();
  criterion_4_energy_conservation();
  criterion_5_burgers_dissipation();
  criterion_6_identity_residuals();
  criterion_7_dependence();
  criterion_8_rk4_order();
  criterion_9_truncation();
  criterion_10_determinism();
  std::printf("%d of 10 criteria passed\n", 10 - g_failures);
  return g_failures;
}
