#pragma once

#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qgeo/io.hpp"
#include "qgeo/verify.hpp"

namespace qgeo::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kVerificationFailure = 2 };

/// Options shared by every subcommand.
struct RunConfig {
  std::uint64_t seed = 42;
  int trials = 1000;
  int dim_max = 8;
  double hbar = 1.0;
  double tol_scale = 1.0;                    // QGEO_TOL_SCALE times --tol-scale
  std::map<std::string, double> tol_overrides;  // --tol name=value, applied after scaling
  std::string out;
};

/// Tolerances with the scale factor and any named overrides applied.
inline Tolerances resolve_tolerances(const RunConfig& cfg) {
  Tolerances t = Tolerances{}.scaled(cfg.tol_scale);
  const std::map<std::string, double*> fields = {
      {"herm", &t.herm},   {"eig", &t.eig},           {"unitary", &t.unitary}, {"spec", &t.spec},
      {"trace", &t.trace}, {"psd", &t.psd},           {"normalization", &t.normalization},
      {"frame", &t.frame}, {"gauge", &t.gauge},       {"tangent", &t.tangent}, {"classify", &t.classify},
      {"tie", &t.tie},     {"identity", &t.identity}, {"flow", &t.flow}};
  for (const auto& [name, value] : cfg.tol_overrides) {
    if (name == "max_sweeps") {
      t.max_sweeps = static_cast<int>(value);
      continue;
    }
    const auto it = fields.find(name);
    if (it == fields.end()) throw Error(ErrorKind::ConfigError, "unknown tolerance '" + name + "'");
    if (!(value > 0.0)) throw Error(ErrorKind::ConfigError, "tolerance '" + name + "' must be positive");
    *it->second = value;
  }
  return t;
}

inline void validate(const RunConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorKind::ConfigError, "--trials must be >= 1");
  if (cfg.dim_max < 2) throw Error(ErrorKind::ConfigError, "--dim-max must be >= 2");
  if (!(cfg.hbar > 0.0)) throw Error(ErrorKind::ConfigError, "--hbar must be positive");
  if (!(cfg.tol_scale > 0.0)) throw Error(ErrorKind::ConfigError, "tolerance scale must be positive");
}

namespace detail {

inline std::string fixed(double v, int precision = 8) {
  std::ostringstream s;
  s << std::setprecision(precision) << std::fixed << v;
  return s.str();
}

inline std::string sci(double v) {
  std::ostringstream s;
  s << std::setprecision(2) << std::scientific << v;
  return s.str();
}

inline std::optional<Spectrum> spectrum_from_flags(const std::vector<double>& values, const std::vector<int>& mults,
                                                   const Tolerances& tol) {
  if (values.empty()) return std::nullopt;
  std::vector<int> m = mults.empty() ? std::vector<int>(values.size(), 1) : mults;
  return Spectrum::make(values, std::move(m), tol);
}

// Flags win over the file's spectrum block.
inline DensityState load_state(const std::string& path, const std::vector<double>& values,
                               const std::vector<int>& mults, const Tolerances& tol, double& hbar) {
  io::StateFile sf = io::parse_state(io::read_json_file(path), tol);
  hbar = sf.hbar;
  std::optional<Spectrum> sigma = spectrum_from_flags(values, mults, tol);
  if (!sigma) sigma = sf.spectrum;
  if (!sigma) {
    throw Error(ErrorKind::ConfigError, "state file has no spectrum block; supply --spectrum (and --mults)");
  }
  return DensityState(std::move(sf.rho), *sigma, tol);
}

}  // namespace detail

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  verify::Config vc;
  try {
    validate(cfg);
    vc.tol = resolve_tolerances(cfg);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kInputError;
  }
  vc.seed = cfg.seed;
  vc.trials = cfg.trials;
  vc.dim_max = cfg.dim_max;
  vc.hbar = cfg.hbar;
  vc.tol_scale = cfg.tol_scale;

  io::json summary;
  summary["config"] = {{"seed", cfg.seed}, {"trials", cfg.trials}, {"dim_max", cfg.dim_max},
                       {"hbar", cfg.hbar}, {"tol_scale", cfg.tol_scale},
                       {"tolerances", io::tolerances_to_json(vc.tol)}};
  bool all_pass = true;
  out << std::left << std::setw(28) << "suite" << std::setw(8) << "pass" << std::setw(8) << "fail"
      << std::setw(12) << "worst" << "status\n";
  for (const auto& [name, fn] : verify::suites()) {
    const verify::SuiteResult r = fn(vc);
    summary["suites"][name] = verify::to_json(r);
    if (r.gating && !r.ok()) all_pass = false;
    out << std::left << std::setw(28) << name << std::setw(8) << r.pass << std::setw(8) << r.fail << std::setw(12)
        << detail::sci(r.worst_residual) << (r.ok() ? "PASS" : (r.gating ? "FAIL" : "WARN"))
        << (r.gating ? "" : " (diagnostic)") << '\n';
    if (!r.ok()) out << "    " << r.first_failure << '\n';
  }
  summary["all_pass"] = all_pass;
  if (!cfg.out.empty()) {
    try {
      io::write_json_file(cfg.out, summary);
    } catch (const Error& e) {
      err << e.what() << '\n';
      return kInputError;
    }
  }
  return all_pass ? kOk : kVerificationFailure;
}

struct BoundsArgs {
  std::string state_file;
  std::string obs_file;
  std::vector<std::string> pairs;  // "A,B"
  std::vector<double> spectrum;
  std::vector<int> mults;
};

inline int cmd_bounds(const RunConfig& cfg, const BoundsArgs& args, std::ostream& out, std::ostream& err) {
  io::json report;
  std::vector<std::string> rows;
  try {
    const Tolerances tol = resolve_tolerances(cfg);
    double hbar = 1.0;
    const DensityState state = detail::load_state(args.state_file, args.spectrum, args.mults, tol, hbar);
    const GeometryContext ctx(hbar, tol);
    const auto observables = io::parse_observables(io::read_json_file(args.obs_file), tol);
    if (args.pairs.empty()) throw Error(ErrorKind::ConfigError, "no --pair given");
    const PurificationFrame frame = purify(state, tol);

    report["state"] = {{"hbar", hbar}, {"rho_hash", io::matrix_hash(state.rho())},
                       {"spectrum", io::spectrum_to_json(state.sigma())}};
    report["pairs"] = io::json::array();
    out << std::left << std::setw(12) << "pair" << std::setw(14) << "dA*dB" << std::setw(14) << "geometric"
        << std::setw(14) << "RS" << std::setw(14) << "combined" << "winner\n";
    for (const std::string& pair : args.pairs) {
      const auto comma = pair.find(',');
      if (comma == std::string::npos) throw Error(ErrorKind::ConfigError, "pair '" + pair + "' must be NAME,NAME");
      const std::string na = pair.substr(0, comma);
      const std::string nb = pair.substr(comma + 1);
      for (const std::string& name : {na, nb})
        if (!observables.contains(name)) throw Error(ErrorKind::ConfigError, "unknown observable '" + name + "'");
      const Observable& a = observables.at(na);
      const Observable& b = observables.at(nb);
      const BoundReport r = decomposition(a, b, frame, ctx);
      report["pairs"].push_back(
          {{"a", na}, {"b", nb}, {"report", io::bound_report_to_json(r, a.matrix(), b.matrix(), state.rho(), tol)}});
      out << std::left << std::setw(12) << pair << std::setw(14) << detail::fixed(r.product()) << std::setw(14)
          << detail::fixed(r.geo_bound) << std::setw(14) << detail::fixed(r.rs_bound) << std::setw(14)
          << detail::fixed(r.combined_bound) << to_string(r.winner) << '\n';
    }
    if (!cfg.out.empty()) io::write_json_file(cfg.out, report);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}

struct SpinDemoArgs {
  double s = 1.0;
  std::vector<double> p{0.7, 0.3};
  std::vector<double> m{1.0, 0.0};
  double eps = 0.25;
};

inline int cmd_spin_demo(const RunConfig& cfg, const SpinDemoArgs& args, std::ostream& out, std::ostream& err) {
  AbcdReport r;
  try {
    const GeometryContext ctx(cfg.hbar, resolve_tolerances(cfg));
    EnsembleSpec spec{Spin::from_value(args.s), args.m, args.p};
    r = abcd_experiment(spec, args.eps, ctx);
    if (!cfg.out.empty()) io::write_json_file(cfg.out, io::demo_report_to_json(r));
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kInputError;
  }

  out << "{Sx,Sy}_w = " << detail::fixed(r.machine.sxsy_omega) << "   {Sx,Sx}_g = " << detail::fixed(r.machine.sxsx_g)
      << "   xi_Sz_perp^2 = " << detail::fixed(r.machine.xi_sz_perp_sq) << '\n';
  out << std::left << std::setw(6) << "pair" << std::setw(14) << "product" << std::setw(14) << "geometric"
      << std::setw(14) << "RS" << "winner\n";
  for (const auto& [name, br] : {std::pair{"AB", &r.ab}, std::pair{"CD", &r.cd}}) {
    out << std::left << std::setw(6) << name << std::setw(14) << detail::fixed(br->product()) << std::setw(14)
        << detail::fixed(br->geo_bound) << std::setw(14) << detail::fixed(br->rs_bound) << to_string(br->winner)
        << '\n';
  }
  out << "dSx*dSy = " << detail::fixed(r.sxsy_product) << " >= " << detail::fixed(r.sxsy_floor)
      << (r.sxsy_holds ? "  ok" : "  VIOLATED") << '\n';
  if (!r.window_holds) {
    out << "WindowViolated: 0 < " << detail::fixed(r.window_lower) << " < " << detail::fixed(r.window_upper)
        << " fails; winners not asserted\n";
    return r.sxsy_holds ? kOk : kVerificationFailure;
  }
  if (!r.winners_as_predicted || !r.sxsy_holds) {
    err << "predicted winners (AB geometric, CD robertson_schrodinger) did not materialize\n";
    return kVerificationFailure;
  }
  return kOk;
}

struct EvolveArgs {
  std::string state_file;
  std::string hamiltonian_file;
  std::string obs_file;
  std::vector<std::string> probes;
  double t = 1.0;
  int steps = 100;
  std::vector<double> spectrum;
  std::vector<int> mults;
};

inline int cmd_evolve(const RunConfig& cfg, const EvolveArgs& args, std::ostream& out, std::ostream& err) {
  Trajectory tr;
  Tolerances tol;
  try {
    tol = resolve_tolerances(cfg);
    double hbar = 1.0;
    const DensityState state = detail::load_state(args.state_file, args.spectrum, args.mults, tol, hbar);
    const GeometryContext ctx(hbar, tol);
    const io::json hj = io::read_json_file(args.hamiltonian_file);
    const Observable h(io::matrix_from_json(hj.contains("hamiltonian") ? hj.at("hamiltonian") : hj, "hamiltonian"),
                       tol.herm, "hamiltonian");
    std::map<std::string, Observable> probes;
    if (!args.probes.empty()) {
      if (args.obs_file.empty()) throw Error(ErrorKind::ConfigError, "--probe needs --obs");
      const auto observables = io::parse_observables(io::read_json_file(args.obs_file), tol);
      for (const std::string& name : args.probes) {
        if (!observables.contains(name)) throw Error(ErrorKind::ConfigError, "unknown observable '" + name + "'");
        probes.emplace(name, observables.at(name));
      }
    }
    if (args.steps < 1) throw Error(ErrorKind::ConfigError, "--steps must be >= 1");
    try {
      tr = evolve(h, state, args.t, args.steps, probes, ctx);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SpectrumDrift) throw;
      err << e.what() << '\n';
      return kVerificationFailure;
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kInputError;
  }

  const double drift_limit = 1e-9 * cfg.tol_scale;
  const double residual_limit = 1e-4 * cfg.tol_scale;
  bool pass = tr.max_drift < drift_limit;
  io::json j;
  j["times"] = tr.times;
  j["spectrum_drift_max"] = tr.max_drift;
  j["probes"] = io::json::object();
  out << "spectrum drift max = " << detail::sci(tr.max_drift) << '\n';
  for (const auto& [name, p] : tr.probes) {
    j["probes"][name] = {{"expectation", p.expectation}, {"flow_residual", p.flow_residual},
                         {"max_residual", p.max_residual}};
    pass = pass && p.max_residual < residual_limit;
    out << "probe " << name << ": <B>(0) = " << detail::fixed(p.expectation.front())
        << "  <B>(t) = " << detail::fixed(p.expectation.back()) << "  max flow residual = "
        << detail::sci(p.max_residual) << '\n';
  }
  j["pass"] = pass;
  if (!cfg.out.empty()) {
    try {
      io::write_json_file(cfg.out, j);
    } catch (const Error& e) {
      err << e.what() << '\n';
      return kInputError;
    }
  }
  return pass ? kOk : kVerificationFailure;
}

}  // namespace qgeo::cli
