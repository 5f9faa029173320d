#pragma once

#include <cstdint>
#include <string>

#include "gbbm/problem.hpp"

namespace gbbm {

/**
 * Validated run configuration. Parsed from `key = value` text with
 * `[section]` headers and `#` comments; unknown keys are rejected and
 * every error names the offending key and line.
 */
struct RunConfig {
  // [grid] (required)
  double L1 = 0.0;
  double L2 = 0.0;
  int N1 = 0;
  int N2 = 0;

  // [flux]
  std::string flux_name = "bbm";  // zero | linear | bbm | oblique | saturating
  double flux_a = 1.0;            // linear family only
  double flux_b = 0.0;

  // [signal]  zero | pulse | pulse_sum
  std::string signal_name = "zero";
  double sig_amp = 0.25;
  double sig_center = 6.2831853071795862;
  double sig_width = 1.2;
  double sig_omega = 6.2831853071795862;
  double sig_amp2 = 0.0;
  double sig_center2 = 6.2831853071795862;
  double sig_width2 = 1.2;
  double sig_omega2 = 6.2831853071795862;

  // [initial]  zero | gaussian | mode
  std::string initial_name = "zero";
  double init_amp = 0.5;
  double init_center1 = 6.2831853071795862;
  double init_center2 = 3.0;
  double init_width = 1.2;
  int init_m = 1;
  int init_j = 1;

  // [time] (T, dt required)
  double T = -1.0;
  double dt = 0.0;
  double nu1 = 0.0;
  std::string mode = "rk4";  // rk4 | picard | both

  // [output]
  std::string out_dir = "out";
  int snapshot_every = 10;

  // [picard]
  double picard_tol = 1e-8;
  int picard_max_iter = 40;
  int n_quad = 65;  // quadrature nodes per window, trapezoid on n_quad-1 cells
  double max_window = 0.25;
  int halvings = 3;

  // [perturb_initial], [perturb_signal]: direction data for the
  // dependence experiment; same keys as [initial] / [signal].
  std::string pert_initial_name = "zero";
  double pert_init_amp = 0.0;
  double pert_init_center1 = 6.2831853071795862;
  double pert_init_center2 = 3.0;
  double pert_init_width = 1.2;
  int pert_init_m = 1;
  int pert_init_j = 1;
  std::string pert_signal_name = "zero";
  double pert_sig_amp = 0.0;
  double pert_sig_center = 6.2831853071795862;
  double pert_sig_width = 1.2;
  double pert_sig_omega = 6.2831853071795862;

  // [misc]
  bool dealias = false;
  std::uint64_t seed = 12345;
  double blowup_factor = 1e6;

  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates; throws ConfigError naming key and line.
RunConfig parse_config(const std::string& text);

/// Canonical serialization: all sections and keys, doubles at 17
/// significant digits. parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

GridPtr build_grid(const RunConfig& c);
FluxSpec build_flux(const RunConfig& c);
BoundarySignal build_signal(const RunConfig& c);
InitialData build_initial(const RunConfig& c);
BoundarySignal build_perturb_signal(const RunConfig& c);
InitialData build_perturb_initial(const RunConfig& c);

}  // namespace gbbm
