#include "gbbm/cli.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gbbm/config.hpp"
#include "gbbm/evolve.hpp"
#include "gbbm/io.hpp"
#include "gbbm/selftest.hpp"
#include "gbbm/verify.hpp"

namespace gbbm {

namespace {

namespace fs = std::filesystem;

const char kUsage[] =
    "usage: gbbm <command> [args]\n"
    "\n"
    "commands:\n"
    "  run <config>                  simulate; writes norms.csv, snapshots,\n"
    "                                run.log into output.dir\n"
    "  verify-helmholtz [--n N]      elliptic solver oracle suite\n"
    "  verify-energy <config>        energy identity checks; writes energy.csv\n"
    "  dependence <config> --eps e1,e2,...\n"
    "                                continuous-dependence experiment;\n"
    "                                writes dependence.csv\n"
    "  convergence <config>          dt-halving and L2-doubling studies;\n"
    "                                writes convergence.csv\n";

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<double> norms_row(const SimState& s, const BoundarySignal& h,
                              const FluxSpec& flux) {
  const SpectralField c = forward(s.v);
  const double l2 = sobolev_norm(c, 0.0);
  const double h1 = sobolev_norm(c, 1.0);
  const double h2 = sobolev_norm(c, 2.0);
  return {s.t,      l2, h1, h2, h1 * h1, h2 * h2 - h1 * h1,
          boundary_flux_integral(s.v, h, s.t, flux)};
}

int cmd_run(const std::string& cfg_path) {
  const RunConfig cfg = load_config(cfg_path);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  const BoundarySignal h = build_signal(cfg);
  const FluxSpec flux = build_flux(cfg);
  const RunResult res = run(cfg);

  std::vector<std::vector<double>> rows;
  for (const SimState& s : res.snapshots) rows.push_back(norms_row(s, h, flux));
  write_csv_atomic(dir / "norms.csv", "t,l2,h1,h2,e_h1,e_h2,boundary_flux",
                   rows);
  for (const SimState& s : res.snapshots) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%08ld.bin", s.step_count);
    write_snapshot_atomic(dir / name, s, h);
  }

  std::ostringstream log;
  log << "effective configuration (defaults echoed):\n"
      << serialize_config(cfg) << "\n"
      << "gtilde corner mismatch max|g - h| on x2=0: "
      << format_g17(res.gtilde_corner_mismatch) << "\n"
      << "gtilde far-wall max: " << format_g17(res.gtilde_far_wall) << "\n"
      << "gtilde interior max: " << format_g17(res.gtilde_interior_max)
      << "\n"
      << "snapshots written: " << res.snapshots.size() << "\n";
  for (const PicardReport& r : res.picard_reports) {
    log << "picard window S=" << format_g17(r.S) << " R=" << format_g17(r.R)
        << " iters=" << r.iterations
        << (r.converged ? " converged" : " FAILED")
        << (r.ball_exceeded ? " ball_exceeded" : "") << "\n";
  }
  if (std::isfinite(res.cross_method_h2)) {
    log << "cross-method max H2 gap (picard vs rk4): "
        << format_g17(res.cross_method_h2) << "\n";
  }
  write_file_atomic(dir / "run.log", log.str());
  std::cout << "run complete: " << res.snapshots.size()
            << " snapshots in " << dir.string() << "\n";
  return kExitOk;
}

int cmd_verify_helmholtz(int n_rhs) {
  const GridPtr grid = GridSpec::make(4.0 * 3.14159265358979324, 8.0, 16, 8);
  const HelmholtzSuiteResult res = run_helmholtz_suite(grid, n_rhs, 20250809);
  std::cout << res.summary() << "\n";
  return res.pass ? kExitOk : kExitVerification;
}

int cmd_verify_energy(const std::string& cfg_path) {
  const RunConfig cfg = load_config(cfg_path);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  const GridPtr grid = build_grid(cfg);
  const InitialData g = build_initial(cfg);
  const BoundarySignal h = build_signal(cfg);
  const FluxSpec flux = build_flux(cfg);
  RunConfig rc = cfg;
  rc.mode = "rk4";
  const RunResult res = run_core(rc, grid, g, h, flux);

  const EnergyReport rep = h1_identity_check(res.snapshots, h, flux);
  const double h_norm = [&] {
    double best = 0.0;
    for (const SimState& s : res.snapshots) {
      best = std::max(best, row_sobolev_norm(*grid, h.sample(*grid, s.t), 2.0) +
                                row_sobolev_norm(*grid, h.sample_dt(*grid, s.t),
                                                 2.0));
    }
    return best;
  }();
  const GronwallFit fit = gronwall_envelope(rep, h_norm);

  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < rep.res_times.size(); ++i) {
    const std::size_t si = i + 1;  // interior snapshot index
    rows.push_back({rep.res_times[i], rep.e_h1[si], rep.e_h2[si],
                    rep.boundary_flux[si], rep.dt_e_h1[i], rep.rhs_h1[i],
                    rep.resid_h1[i], rep.dt_e_h2[i], rep.rhs_h2[i],
                    rep.resid_h2[i], fit.envelope[si]});
  }
  write_csv_atomic(dir / "energy.csv",
                   "t,e_h1,e_h2,boundary_flux,dt_e_h1,rhs_h1,resid_h1,"
                   "dt_e_h2,rhs_h2,resid_h2,envelope_h1",
                   rows);
  std::cout << "energy identities: max resid_h1 = "
            << format_g17(rep.max_resid_h1())
            << ", max resid_h2 = " << format_g17(rep.max_resid_h2())
            << ", gronwall C = " << format_g17(fit.C) << "\n";
  return kExitOk;
}

int cmd_dependence(const std::string& cfg_path,
                   const std::vector<double>& eps) {
  const RunConfig cfg = load_config(cfg_path);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  const DependenceReport rep = dependence_experiment(
      cfg, build_perturb_initial(cfg), build_perturb_signal(cfg), eps);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < rep.epsilons.size(); ++i) {
    rows.push_back({rep.epsilons[i], rep.deltas[i], rep.denominators[i],
                    rep.ratios_eps[i], rep.ratios_data[i], rep.envelope[i]});
  }
  write_csv_atomic(dir / "dependence.csv",
                   "eps,delta,denominator,ratio_eps,ratio_data,envelope",
                   rows);
  std::cout << "dependence experiment: fitted C = " << format_g17(rep.fitted_c)
            << " over " << rep.epsilons.size() << " scales\n";
  return kExitOk;
}

int cmd_convergence(const std::string& cfg_path) {
  const RunConfig cfg = load_config(cfg_path);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  const ConvergenceStudy st = convergence_study(cfg);
  std::string out = "kind,param,value\n";
  for (std::size_t i = 0; i < st.dt_errors.size(); ++i) {
    out += "dt_error," + format_g17(st.dts[i]) + "," +
           format_g17(st.dt_errors[i]) + "\n";
  }
  for (std::size_t i = 0; i < st.dt_factors.size(); ++i) {
    out += "dt_factor," + format_g17(st.dts[i]) + "," +
           format_g17(st.dt_factors[i]) + "\n";
  }
  out += "l2_h2_norm," + format_g17(cfg.L2) + "," +
         format_g17(st.l2_base_norm) + "\n";
  out += "l2_h2_norm," + format_g17(2.0 * cfg.L2) + "," +
         format_g17(st.l2_doubled_norm) + "\n";
  out += "l2_rel_change," + format_g17(2.0 * cfg.L2) + "," +
         format_g17(st.l2_rel_change) + "\n";
  write_file_atomic(dir / "convergence.csv", out);
  std::cout << "convergence study: dt factors";
  for (double f : st.dt_factors) std::cout << " " << format_g17(f);
  std::cout << ", L2-doubling rel change " << format_g17(st.l2_rel_change)
            << "\n";
  return kExitOk;
}

std::vector<double> parse_eps_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || !(v > 0.0)) {
      throw ConfigError("--eps expects positive numbers, got `" + tok + "`");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("--eps list is empty");
  return out;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  try {
    if (args.empty()) {
      std::cerr << kUsage;
      return kExitConfig;
    }
    const std::string& cmd = args[0];
    if (cmd == "run" && args.size() == 2) {
      return cmd_run(args[1]);
    }
    if (cmd == "verify-helmholtz") {
      int n = 25;
      if (args.size() == 3 && args[1] == "--n") {
        auto [p, ec] = std::from_chars(args[2].data(),
                                       args[2].data() + args[2].size(), n);
        if (ec != std::errc() || n < 1) {
          throw ConfigError("--n expects a positive integer");
        }
      } else if (args.size() != 1) {
        std::cerr << kUsage;
        return kExitConfig;
      }
      return cmd_verify_helmholtz(n);
    }
    if (cmd == "verify-energy" && args.size() == 2) {
      return cmd_verify_energy(args[1]);
    }
    if (cmd == "dependence" && args.size() >= 2) {
      std::vector<double> eps = {0.1, 0.05, 0.025, 0.0125};
      if (args.size() == 4 && args[2] == "--eps") {
        eps = parse_eps_list(args[3]);
      } else if (args.size() != 2) {
        std::cerr << kUsage;
        return kExitConfig;
      }
      return cmd_dependence(args[1], eps);
    }
    if (cmd == "convergence" && args.size() == 2) {
      return cmd_convergence(args[1]);
    }
    std::cerr << kUsage;
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace gbbm
