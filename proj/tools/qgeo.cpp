// qgeo: verification campaigns, uncertainty bounds from files, the spin
// ensemble demo and von Neumann evolution runs.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qgeo/commands.hpp"

namespace {

void parse_tol_overrides(const std::vector<std::string>& raw, qgeo::cli::RunConfig& cfg) {
  for (const std::string& item : raw) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw qgeo::Error(qgeo::ErrorKind::ConfigError, "--tol expects name=value");
    cfg.tol_overrides[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qgeo::cli;

  CLI::App app{"Geometry of isospectral density-operator orbits and mixed-state uncertainty bounds"};
  app.require_subcommand(1);

  RunConfig cfg;
  double tol_flag = 1.0;
  std::vector<std::string> tol_raw;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Write the JSON report here");
    sub->add_option("--tol-scale", tol_flag, "Multiply every tolerance (on top of QGEO_TOL_SCALE)");
    sub->add_option("--tol", tol_raw, "Override one tolerance, name=value");
  };

  auto* verify = app.add_subcommand("verify", "Run every property suite on seeded random instances");
  verify->add_option("--seed", cfg.seed, "Campaign seed")->capture_default_str();
  verify->add_option("--trials", cfg.trials, "Trials per suite")->capture_default_str();
  verify->add_option("--dim-max", cfg.dim_max, "Largest Hilbert-space dimension")->capture_default_str();
  verify->add_option("--hbar", cfg.hbar, "Planck constant (odd trials also use 0.32)")->capture_default_str();
  add_common(verify);

  BoundsArgs bounds_args;
  auto* bounds = app.add_subcommand("bounds", "Geometric, Robertson-Schroedinger and combined bounds");
  bounds->add_option("--state", bounds_args.state_file, "State JSON file")->required();
  bounds->add_option("--obs", bounds_args.obs_file, "Observables JSON file")->required();
  bounds->add_option("--pair", bounds_args.pairs, "Observable pair NAME,NAME (repeatable)")->required();
  bounds->add_option("--spectrum", bounds_args.spectrum, "Distinct eigenvalues, descending")->delimiter(',');
  bounds->add_option("--mults", bounds_args.mults, "Multiplicities of --spectrum")->delimiter(',');
  add_common(bounds);

  SpinDemoArgs demo_args;
  auto* demo = app.add_subcommand("spin-demo", "Four-observable comparison on a spin ensemble");
  demo->add_option("--s", demo_args.s, "Spin quantum number")->capture_default_str();
  demo->add_option("--p", demo_args.p, "Ensemble probabilities, strictly descending")->delimiter(',');
  demo->add_option("--m", demo_args.m, "Magnetic quantum numbers")->delimiter(',');
  demo->add_option("--eps", demo_args.eps, "Mixing parameter epsilon")->capture_default_str();
  demo->add_option("--hbar", cfg.hbar, "Planck constant")->capture_default_str();
  add_common(demo);

  EvolveArgs evolve_args;
  auto* evolve = app.add_subcommand("evolve", "Von Neumann evolution with spectrum and flow checks");
  evolve->add_option("--state", evolve_args.state_file, "State JSON file")->required();
  evolve->add_option("--hamiltonian", evolve_args.hamiltonian_file, "Hamiltonian matrix JSON file")->required();
  evolve->add_option("--obs", evolve_args.obs_file, "Observables JSON file holding the probes");
  evolve->add_option("--probe", evolve_args.probes, "Probe observable name (repeatable)");
  evolve->add_option("--t", evolve_args.t, "Final time")->capture_default_str();
  evolve->add_option("--steps", evolve_args.steps, "Number of steps")->capture_default_str();
  evolve->add_option("--spectrum", evolve_args.spectrum, "Distinct eigenvalues, descending")->delimiter(',');
  evolve->add_option("--mults", evolve_args.mults, "Multiplicities of --spectrum")->delimiter(',');
  add_common(evolve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    cfg.tol_scale = qgeo::tolerance_scale_from_env() * tol_flag;
    parse_tol_overrides(tol_raw, cfg);
    if (verify->parsed()) return cmd_verify(cfg, std::cout, std::cerr);
    if (bounds->parsed()) return cmd_bounds(cfg, bounds_args, std::cout, std::cerr);
    if (demo->parsed()) return cmd_spin_demo(cfg, demo_args, std::cout, std::cerr);
    if (evolve->parsed()) return cmd_evolve(cfg, evolve_args, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
