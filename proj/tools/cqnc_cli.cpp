// cqnc: force-noise spectra, sweeps and verification for the hybrid
// optomechanical / negative-mass system.
//
// Exit codes: 0 success, 1 validation failure, 2 bad input.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cqnc/commands.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 1;
constexpr int exit_bad_input = 2;

struct Options {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool oracle = false;
  std::optional<double> temperature;
  std::optional<double> g_over_gsql;
  std::string gain_ratios;
  bool off_resonance = false;
  int n_random = 100;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw cqnc::DomainError("--gain-ratio: cannot parse '" + item + "'");
    }
    if (used != item.size() || !(v >= 0.0)) throw cqnc::DomainError("--gain-ratio: bad entry '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw cqnc::DomainError("--gain-ratio: empty list");
  return out;
}

cqnc::RunConfig resolve(const Options& o) {
  cqnc::RunConfig cfg = o.config_path.empty() ? cqnc::default_config() : cqnc::load_config_file(o.config_path);
  if (o.temperature) {
    if (!(*o.temperature >= 0.0)) throw cqnc::DomainError("--temperature must be >= 0");
    cfg.system.temperature = *o.temperature;
  }
  if (o.g_over_gsql) {
    if (!(*o.g_over_gsql > 0.0)) throw cqnc::DomainError("--g-over-gsql must be > 0");
    cfg.g_over_gsql = *o.g_over_gsql;
  }
  if (!o.gain_ratios.empty()) {
    cfg.gain_ratios = parse_list(o.gain_ratios);
    cfg.map_gain_ratios = cfg.gain_ratios;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Force-noise spectra of a cavity optomechanical sensor with coherent quantum noise cancellation"};
  app.set_version_flag("--version", std::string(cqnc::version));
  app.require_subcommand(1);

  Options o;
  app.add_option("--config", o.config_path, "JSON config file (frequencies in Hz)");
  app.add_option("--out", o.out_path, "output file (default stdout)");
  app.add_option("--seed", o.seed, "random seed for verify");
  app.add_flag("--oracle", o.oracle, "add state-space oracle columns");
  app.add_option("--temperature", o.temperature, "bath temperature in K");
  app.add_option("--g-over-gsql", o.g_over_gsql,
                 "spectrum operating coupling in units of g_SQL(omega_m) (default: configured g)");
  app.add_option("--gain-ratio", o.gain_ratios, "comma-separated G/kappa values, one curve each");

  auto* spectrum = app.add_subcommand("spectrum", "PSD versus detection frequency");
  auto* power = app.add_subcommand("power-sweep", "PSD versus drive power at fixed frequency");
  power->add_flag("--off-resonance", o.off_resonance, "probe at omega_m + 4 gamma_m instead of omega_m");
  auto* map2d = app.add_subcommand("map2d", "PSD over (g/g_SQL)^2 and omega/omega_m");
  auto* verify = app.add_subcommand("verify", "closed form versus state-space oracle");
  verify->add_option("--n-random", o.n_random, "number of random parameter sets")->check(CLI::PositiveNumber);
  auto* check = app.add_subcommand("check-cqnc", "report how well the cancellation conditions hold");
  auto* stab = app.add_subcommand("stability", "drift-matrix eigenvalues");
  for (auto* sub : {spectrum, power, map2d, verify, check, stab}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_bad_input;
  }

  cqnc::RunConfig cfg;
  try {
    cfg = resolve(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_bad_input;
  }

  std::unique_ptr<std::ofstream> file;
  if (!o.out_path.empty()) {
    file = std::make_unique<std::ofstream>(o.out_path, std::ios::binary);
    if (!*file) {
      std::cerr << "error: cannot open '" << o.out_path << "' for writing\n";
      return exit_bad_input;
    }
  }
  std::ostream& os = file ? static_cast<std::ostream&>(*file) : std::cout;

  try {
    if (*spectrum) {
      cqnc::cmd_spectrum(cfg, os, o.oracle);
    } else if (*power) {
      cqnc::cmd_power_sweep(cfg, os, !o.off_resonance, o.oracle);
    } else if (*map2d) {
      cqnc::cmd_map2d(cfg, os, o.oracle);
    } else if (*verify) {
      const cqnc::VerifyTolerances tol;
      const auto report = cqnc::run_verify(cfg, o.n_random, o.seed, tol);
      cqnc::print_verify(os, report, tol);
      if (!report.passed()) return exit_validation;
    } else if (*check) {
      if (!cqnc::cmd_check_cqnc(cfg, os).ideal) return exit_validation;
    } else if (*stab) {
      if (!cqnc::cmd_stability(cfg, os).stable) return exit_validation;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_bad_input;
  }
  os.flush();
  return exit_ok;
}
