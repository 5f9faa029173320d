#include "gbbm/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace gbbm {

namespace {

struct RawValue {
  std::string text;
  int line;
};

using KeyMap = std::map<std::string, RawValue>;

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

KeyMap tokenize(const std::string& text) {
  KeyMap map;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("malformed section header at line " +
                          std::to_string(lineno));
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        throw ConfigError("empty section name at line " +
                          std::to_string(lineno));
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected `key = value` at line " +
                        std::to_string(lineno));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("empty key at line " + std::to_string(lineno));
    }
    if (section.empty()) {
      throw ConfigError("key `" + key + "` outside any section at line " +
                        std::to_string(lineno));
    }
    const std::string full = section + "." + key;
    if (map.count(full)) {
      throw ConfigError("duplicate key `" + full + "` at line " +
                        std::to_string(lineno));
    }
    map[full] = RawValue{value, lineno};
  }
  return map;
}

[[noreturn]] void fail(const std::string& key, const RawValue& v,
                       const std::string& why) {
  throw ConfigError("key `" + key + "` at line " + std::to_string(v.line) +
                    ": " + why);
}

class Extractor {
public:
  explicit Extractor(KeyMap map) : map_(std::move(map)) {}

  bool take_double(const std::string& key, double& out) {
    auto it = map_.find(key);
    if (it == map_.end()) return false;
    const std::string& s = it->second.text;
    if (s.empty()) fail(key, it->second, "empty value");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) {
      fail(key, it->second, "expected a finite number, got `" + s + "`");
    }
    out = v;
    map_.erase(it);
    return true;
  }

  bool take_int(const std::string& key, int& out) {
    auto it = map_.find(key);
    if (it == map_.end()) return false;
    const std::string& s = it->second.text;
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
      fail(key, it->second, "expected an integer, got `" + s + "`");
    }
    out = static_cast<int>(v);
    map_.erase(it);
    return true;
  }

  bool take_u64(const std::string& key, std::uint64_t& out) {
    auto it = map_.find(key);
    if (it == map_.end()) return false;
    const std::string& s = it->second.text;
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
      fail(key, it->second, "expected an unsigned integer, got `" + s + "`");
    }
    out = v;
    map_.erase(it);
    return true;
  }

  bool take_bool(const std::string& key, bool& out) {
    auto it = map_.find(key);
    if (it == map_.end()) return false;
    const std::string& s = it->second.text;
    if (s == "true") {
      out = true;
    } else if (s == "false") {
      out = false;
    } else {
      fail(key, it->second, "expected true or false, got `" + s + "`");
    }
    map_.erase(it);
    return true;
  }

  bool take_string(const std::string& key, std::string& out) {
    auto it = map_.find(key);
    if (it == map_.end()) return false;
    if (it->second.text.empty()) fail(key, it->second, "empty value");
    out = it->second.text;
    map_.erase(it);
    return true;
  }

  void require(const std::string& key, bool found) {
    if (!found) throw ConfigError("missing required key `" + key + "`");
  }

  void reject_leftovers() const {
    if (!map_.empty()) {
      const auto& [key, v] = *map_.begin();
      throw ConfigError("unknown key `" + key + "` at line " +
                        std::to_string(v.line));
    }
  }

private:
  KeyMap map_;
};

void range_check(bool ok, const std::string& key, const std::string& why) {
  if (!ok) throw ConfigError("key `" + key + "`: " + why);
}

void check_name(const std::string& key, const std::string& v,
                std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (v == a) return;
  }
  std::string list;
  for (const char* a : allowed) {
    if (!list.empty()) list += ", ";
    list += a;
  }
  throw ConfigError("key `" + key + "`: unknown value `" + v +
                    "` (expected one of: " + list + ")");
}

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  Extractor ex(tokenize(text));
  RunConfig c;

  ex.require("grid.L1", ex.take_double("grid.L1", c.L1));
  ex.require("grid.L2", ex.take_double("grid.L2", c.L2));
  ex.require("grid.N1", ex.take_int("grid.N1", c.N1));
  ex.require("grid.N2", ex.take_int("grid.N2", c.N2));

  ex.take_string("flux.name", c.flux_name);
  ex.take_double("flux.a", c.flux_a);
  ex.take_double("flux.b", c.flux_b);

  ex.take_string("signal.name", c.signal_name);
  ex.take_double("signal.amplitude", c.sig_amp);
  ex.take_double("signal.center", c.sig_center);
  ex.take_double("signal.width", c.sig_width);
  ex.take_double("signal.omega", c.sig_omega);
  ex.take_double("signal.amplitude2", c.sig_amp2);
  ex.take_double("signal.center2", c.sig_center2);
  ex.take_double("signal.width2", c.sig_width2);
  ex.take_double("signal.omega2", c.sig_omega2);

  ex.take_string("initial.name", c.initial_name);
  ex.take_double("initial.amplitude", c.init_amp);
  ex.take_double("initial.center1", c.init_center1);
  ex.take_double("initial.center2", c.init_center2);
  ex.take_double("initial.width", c.init_width);
  ex.take_int("initial.m", c.init_m);
  ex.take_int("initial.j", c.init_j);

  ex.require("time.T", ex.take_double("time.T", c.T));
  ex.require("time.dt", ex.take_double("time.dt", c.dt));
  ex.take_double("time.nu1", c.nu1);
  ex.take_string("time.mode", c.mode);

  ex.take_string("output.dir", c.out_dir);
  ex.take_int("output.snapshot_every", c.snapshot_every);

  ex.take_double("picard.tol", c.picard_tol);
  ex.take_int("picard.max_iter", c.picard_max_iter);
  ex.take_int("picard.n_quad", c.n_quad);
  ex.take_double("picard.max_window", c.max_window);
  ex.take_int("picard.halvings", c.halvings);

  ex.take_string("perturb_initial.name", c.pert_initial_name);
  ex.take_double("perturb_initial.amplitude", c.pert_init_amp);
  ex.take_double("perturb_initial.center1", c.pert_init_center1);
  ex.take_double("perturb_initial.center2", c.pert_init_center2);
  ex.take_double("perturb_initial.width", c.pert_init_width);
  ex.take_int("perturb_initial.m", c.pert_init_m);
  ex.take_int("perturb_initial.j", c.pert_init_j);
  ex.take_string("perturb_signal.name", c.pert_signal_name);
  ex.take_double("perturb_signal.amplitude", c.pert_sig_amp);
  ex.take_double("perturb_signal.center", c.pert_sig_center);
  ex.take_double("perturb_signal.width", c.pert_sig_width);
  ex.take_double("perturb_signal.omega", c.pert_sig_omega);

  ex.take_bool("misc.dealias", c.dealias);
  ex.take_u64("misc.seed", c.seed);
  ex.take_double("misc.blowup_factor", c.blowup_factor);

  ex.reject_leftovers();

  range_check(c.L1 > 0.0, "grid.L1", "must be > 0");
  range_check(c.L2 > 0.0, "grid.L2", "must be > 0");
  range_check(c.N1 >= 8 && c.N1 % 2 == 0 && c.N1 <= 8192, "grid.N1",
              "must be even, >= 8 and <= 8192");
  range_check(c.N2 >= 8 && c.N2 <= 8192, "grid.N2",
              "must be >= 8 and <= 8192");
  check_name("flux.name", c.flux_name,
             {"zero", "linear", "bbm", "oblique", "saturating"});
  check_name("signal.name", c.signal_name, {"zero", "pulse", "pulse_sum"});
  check_name("initial.name", c.initial_name, {"zero", "gaussian", "mode"});
  check_name("perturb_signal.name", c.pert_signal_name,
             {"zero", "pulse", "pulse_sum"});
  check_name("perturb_initial.name", c.pert_initial_name,
             {"zero", "gaussian", "mode"});
  range_check(c.sig_width > 0.0, "signal.width", "must be > 0");
  range_check(c.sig_width2 > 0.0, "signal.width2", "must be > 0");
  range_check(c.init_width > 0.0, "initial.width", "must be > 0");
  range_check(c.pert_sig_width > 0.0, "perturb_signal.width", "must be > 0");
  range_check(c.pert_init_width > 0.0, "perturb_initial.width",
              "must be > 0");
  range_check(c.init_m >= 0 && c.init_m < c.N1 / 2, "initial.m",
              "must be in [0, N1/2)");
  range_check(c.init_j >= 1 && c.init_j <= c.N2 - 1, "initial.j",
              "must be in [1, N2-1]");
  range_check(c.T >= 0.0, "time.T", "must be >= 0");
  range_check(c.dt > 0.0, "time.dt", "must be > 0");
  range_check(c.nu1 >= 0.0, "time.nu1", "must be >= 0");
  check_name("time.mode", c.mode, {"rk4", "picard", "both"});
  range_check(c.snapshot_every >= 1, "output.snapshot_every", "must be >= 1");
  range_check(c.picard_tol > 0.0, "picard.tol", "must be > 0");
  range_check(c.picard_max_iter >= 1, "picard.max_iter", "must be >= 1");
  range_check(c.n_quad >= 2, "picard.n_quad", "must be >= 2");
  range_check(c.max_window > 0.0, "picard.max_window", "must be > 0");
  range_check(c.halvings >= 0, "picard.halvings", "must be >= 0");
  range_check(c.blowup_factor > 1.0, "misc.blowup_factor", "must be > 1");

  return c;
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[grid]\n"
      << "L1 = " << g17(c.L1) << "\n"
      << "L2 = " << g17(c.L2) << "\n"
      << "N1 = " << c.N1 << "\n"
      << "N2 = " << c.N2 << "\n\n";
  out << "[flux]\n"
      << "name = " << c.flux_name << "\n"
      << "a = " << g17(c.flux_a) << "\n"
      << "b = " << g17(c.flux_b) << "\n\n";
  out << "[signal]\n"
      << "name = " << c.signal_name << "\n"
      << "amplitude = " << g17(c.sig_amp) << "\n"
      << "center = " << g17(c.sig_center) << "\n"
      << "width = " << g17(c.sig_width) << "\n"
      << "omega = " << g17(c.sig_omega) << "\n"
      << "amplitude2 = " << g17(c.sig_amp2) << "\n"
      << "center2 = " << g17(c.sig_center2) << "\n"
      << "width2 = " << g17(c.sig_width2) << "\n"
      << "omega2 = " << g17(c.sig_omega2) << "\n\n";
  out << "[initial]\n"
      << "name = " << c.initial_name << "\n"
      << "amplitude = " << g17(c.init_amp) << "\n"
      << "center1 = " << g17(c.init_center1) << "\n"
      << "center2 = " << g17(c.init_center2) << "\n"
      << "width = " << g17(c.init_width) << "\n"
      << "m = " << c.init_m << "\n"
      << "j = " << c.init_j << "\n\n";
  out << "[time]\n"
      << "T = " << g17(c.T) << "\n"
      << "dt = " << g17(c.dt) << "\n"
      << "nu1 = " << g17(c.nu1) << "\n"
      << "mode = " << c.mode << "\n\n";
  out << "[output]\n"
      << "dir = " << c.out_dir << "\n"
      << "snapshot_every = " << c.snapshot_every << "\n\n";
  out << "[picard]\n"
      << "tol = " << g17(c.picard_tol) << "\n"
      << "max_iter = " << c.picard_max_iter << "\n"
      << "n_quad = " << c.n_quad << "\n"
      << "max_window = " << g17(c.max_window) << "\n"
      << "halvings = " << c.halvings << "\n\n";
  out << "[perturb_initial]\n"
      << "name = " << c.pert_initial_name << "\n"
      << "amplitude = " << g17(c.pert_init_amp) << "\n"
      << "center1 = " << g17(c.pert_init_center1) << "\n"
      << "center2 = " << g17(c.pert_init_center2) << "\n"
      << "width = " << g17(c.pert_init_width) << "\n"
      << "m = " << c.pert_init_m << "\n"
      << "j = " << c.pert_init_j << "\n\n";
  out << "[perturb_signal]\n"
      << "name = " << c.pert_signal_name << "\n"
      << "amplitude = " << g17(c.pert_sig_amp) << "\n"
      << "center = " << g17(c.pert_sig_center) << "\n"
      << "width = " << g17(c.pert_sig_width) << "\n"
      << "omega = " << g17(c.pert_sig_omega) << "\n\n";
  out << "[misc]\n"
      << "dealias = " << (c.dealias ? "true" : "false") << "\n"
      << "seed = " << c.seed << "\n"
      << "blowup_factor = " << g17(c.blowup_factor) << "\n";
  return out.str();
}

GridPtr build_grid(const RunConfig& c) {
  return GridSpec::make(c.L1, c.L2, c.N1, c.N2);
}

FluxSpec build_flux(const RunConfig& c) {
  if (c.flux_name == "zero") return FluxSpec::zero();
  if (c.flux_name == "linear") return FluxSpec::linear(c.flux_a, c.flux_b);
  if (c.flux_name == "bbm") return FluxSpec::bbm();
  if (c.flux_name == "oblique") return FluxSpec::oblique();
  return FluxSpec::saturating();
}

namespace {

BoundarySignal signal_from(const std::string& name, double a1, double c1,
                           double w1, double o1, double a2, double c2,
                           double w2, double o2) {
  if (name == "zero") return BoundarySignal::zero();
  if (name == "pulse") return BoundarySignal::pulse(a1, c1, w1, o1);
  return BoundarySignal::pulse(a1, c1, w1, o1) +
         BoundarySignal::pulse(a2, c2, w2, o2);
}

InitialData initial_from(const std::string& name, double amp, double c1,
                         double c2, double w, int m, int j) {
  if (name == "zero") return InitialData::zero();
  if (name == "gaussian") return InitialData::gaussian(amp, c1, c2, w);
  return InitialData::mode(amp, m, j);
}

}  // namespace

BoundarySignal build_signal(const RunConfig& c) {
  return signal_from(c.signal_name, c.sig_amp, c.sig_center, c.sig_width,
                     c.sig_omega, c.sig_amp2, c.sig_center2, c.sig_width2,
                     c.sig_omega2);
}

InitialData build_initial(const RunConfig& c) {
  return initial_from(c.initial_name, c.init_amp, c.init_center1,
                      c.init_center2, c.init_width, c.init_m, c.init_j);
}

BoundarySignal build_perturb_signal(const RunConfig& c) {
  return signal_from(c.pert_signal_name, c.pert_sig_amp, c.pert_sig_center,
                     c.pert_sig_width, c.pert_sig_omega, 0.0, 0.0, 1.0, 0.0);
}

InitialData build_perturb_initial(const RunConfig& c) {
  return initial_from(c.pert_initial_name, c.pert_init_amp,
                      c.pert_init_center1, c.pert_init_center2,
                      c.pert_init_width, c.pert_init_m, c.pert_init_j);
}

}  // namespace gbbm
