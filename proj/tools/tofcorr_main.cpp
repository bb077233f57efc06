// Command-line driver: prepares annealed ground states of the bichromatic
// lattice, evaluates both correlation prescriptions, reproduces the
// secondary-peak suppression figures, and runs the oracle cross-checks.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tofcorr/anneal.hpp"
#include "tofcorr/config.hpp"
#include "tofcorr/correlations.hpp"
#include "tofcorr/csv.hpp"
#include "tofcorr/errors.hpp"
#include "tofcorr/experiment.hpp"
#include "tofcorr/kernels.hpp"
#include "tofcorr/model.hpp"

namespace {

using tofcorr::Config;
using tofcorr::KeyValues;

const std::vector<std::string> kKnownKeys = {
    "sites",       "atoms",   "spacing", "U",         "J",
    "V2",          "kappa_ratio", "extra_offsets", "t0",    "cooling",
    "stages",      "sweeps_per_stage", "restarts",  "seed",  "grid_points",
    "u_max",       "threshold", "workers", "v2_list", "occupations",
};

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> grid_points;
  std::optional<double> threshold;
  std::optional<int> workers;
};

struct RunSetup {
  tofcorr::LatticeSpec spec;
  int atoms = 170;
  tofcorr::AnnealSchedule sched;
  std::size_t grid_points = 4096;
  double u_max = 6.0 * 3.14159265358979323846;
  double threshold = 1e-3;
  int workers = 1;
  std::vector<double> v2_list;
  std::optional<std::vector<int>> occupations;
};

RunSetup load_setup(const CommonOpts& opts) {
  Config cfg;
  if (!opts.config_path.empty()) cfg = Config::parse_file(opts.config_path);
  cfg.require_known(kKnownKeys);

  RunSetup s;
  // Defaults are the desk-scale experiment: 170 atoms over 130 sites with a
  // secondary lattice of 9.9 (energies in h x kHz).
  s.spec.sites = static_cast<int>(cfg.integer("sites", 130));
  s.spec.spacing = cfg.number("spacing", 1.0);
  s.spec.U = cfg.number("U", 1.0);
  s.spec.J = cfg.number("J", 0.0);
  s.spec.V2 = cfg.number("V2", 9.9);
  s.spec.kappa_ratio = cfg.number("kappa_ratio", 830.0 / 1076.0);
  if (cfg.has("extra_offsets")) {
    const auto vals = cfg.numbers("extra_offsets");
    s.spec.extra_offsets.assign(vals.begin(), vals.end());
  }
  s.spec.validate();

  s.atoms = static_cast<int>(cfg.integer("atoms", 170));
  s.sched.t0 = cfg.number("t0", 0.0);
  s.sched.cooling = cfg.number("cooling", 0.95);
  s.sched.stages = static_cast<int>(cfg.integer("stages", 400));
  s.sched.sweeps_per_stage = static_cast<int>(cfg.integer("sweeps_per_stage", 20));
  s.sched.restarts = static_cast<int>(cfg.integer("restarts", 8));
  s.sched.seed = cfg.unsigned64("seed", 1);
  s.sched.validate();

  s.grid_points = static_cast<std::size_t>(cfg.integer("grid_points", 4096));
  s.u_max = cfg.number("u_max", s.u_max);
  s.threshold = cfg.number("threshold", 1e-3);
  s.workers = static_cast<int>(cfg.integer("workers", 1));
  if (cfg.has("v2_list")) s.v2_list = cfg.numbers("v2_list");
  if (cfg.has("occupations")) {
    const auto vals = cfg.numbers("occupations");
    std::vector<int> occ;
    occ.reserve(vals.size());
    for (double v : vals) {
      const int n = static_cast<int>(v);
      if (static_cast<double>(n) != v)
        throw tofcorr::input_error("config: occupations must be integers");
      occ.push_back(n);
    }
    s.occupations = std::move(occ);
  }

  if (opts.seed) s.sched.seed = *opts.seed;
  if (opts.grid_points) s.grid_points = *opts.grid_points;
  if (opts.threshold) s.threshold = *opts.threshold;
  if (opts.workers) s.workers = *opts.workers;
  return s;
}

KeyValues base_manifest(const std::string& command, const RunSetup& s) {
  KeyValues kv;
  kv.emplace_back("artifact_version", tofcorr::kVersion);
  kv.emplace_back("command", command);
  kv.emplace_back("kernel_backend", tofcorr::kernels::table().name);
  kv.emplace_back("sites", std::to_string(s.spec.sites));
  kv.emplace_back("atoms", std::to_string(s.atoms));
  kv.emplace_back("spacing", tofcorr::format_number(s.spec.spacing));
  kv.emplace_back("U", tofcorr::format_number(s.spec.U));
  kv.emplace_back("J", tofcorr::format_number(s.spec.J));
  kv.emplace_back("V2", tofcorr::format_number(s.spec.V2));
  kv.emplace_back("kappa_ratio", tofcorr::format_number(s.spec.kappa_ratio));
  kv.emplace_back("t0", tofcorr::format_number(s.sched.t0));
  kv.emplace_back("cooling", tofcorr::format_number(s.sched.cooling));
  kv.emplace_back("stages", std::to_string(s.sched.stages));
  kv.emplace_back("sweeps_per_stage", std::to_string(s.sched.sweeps_per_stage));
  kv.emplace_back("restarts", std::to_string(s.sched.restarts));
  kv.emplace_back("seed", std::to_string(s.sched.seed));
  kv.emplace_back("grid_points", std::to_string(s.grid_points));
  kv.emplace_back("u_max", tofcorr::format_number(s.u_max));
  kv.emplace_back("threshold", tofcorr::format_number(s.threshold));
  return kv;
}

std::filesystem::path out_path(const CommonOpts& opts, const std::string& name) {
  std::filesystem::create_directories(opts.out_dir);
  return std::filesystem::path(opts.out_dir) / name;
}

void print_config(const tofcorr::FockConfig& k, double energy) {
  std::cout << "energy = " << tofcorr::format_number(energy) << "\n";
  std::cout << "occupations =";
  for (int v : k.occupations()) std::cout << " " << v;
  std::cout << "\n";
}

int cmd_ground_state(const CommonOpts& opts) {
  const RunSetup s = load_setup(opts);
  const tofcorr::AnnealResult res = tofcorr::anneal(s.spec, s.atoms, s.sched);
  print_config(res.config, res.energy);
  std::cout << "accepted_moves = " << res.accepted_moves
            << "\nproposed_moves = " << res.proposed_moves << "\n";
  return 0;
}

void emit_curves(const CommonOpts& opts, const std::string& stem, const RunSetup& s,
                 const tofcorr::Figure1Result& fig) {
  KeyValues kv = base_manifest(stem, s);
  kv.emplace_back("annealed_energy", tofcorr::format_number(fig.ground.energy));
  tofcorr::write_curve_csv(out_path(opts, stem + "_trace.csv").string(), fig.trace_curve, kv);
  tofcorr::write_curve_csv(out_path(opts, stem + "_povm.csv").string(), fig.povm_curve, kv);
  tofcorr::write_peaks_report(out_path(opts, stem + "_peaks_trace.txt").string(),
                              fig.trace_peaks, kv);
  tofcorr::write_peaks_report(out_path(opts, stem + "_peaks_povm.txt").string(), fig.povm_peaks,
                              kv);
  tofcorr::write_manifest(out_path(opts, stem + "_manifest.txt").string(), kv);
  std::cout << stem << ": secondary height trace = "
            << tofcorr::format_number(fig.trace_peaks.max_secondary_height())
            << ", povm = " << tofcorr::format_number(fig.povm_peaks.max_secondary_height())
            << "\n";
}

int cmd_correlate(const CommonOpts& opts) {
  const RunSetup s = load_setup(opts);
  const auto grid = tofcorr::default_u_grid(s.grid_points, s.u_max);

  tofcorr::Figure1Result fig;
  if (s.occupations) {
    // Curves for an explicitly given configuration; no annealing involved.
    tofcorr::FockConfig k(*s.occupations);
    if (k.sites() != s.spec.sites)
      throw tofcorr::input_error("occupations length must equal sites");
    fig.ground = tofcorr::AnnealResult{k, tofcorr::fock_energy(k, tofcorr::site_energies(s.spec),
                                                               s.spec.U),
                                       0, 0};
    fig.trace_curve = tofcorr::eval_curve(k, grid, false);
    fig.povm_curve = tofcorr::eval_curve(k, grid, true);
    fig.trace_peaks = tofcorr::find_peaks(fig.trace_curve, s.threshold, s.spec.sites);
    fig.povm_peaks = tofcorr::find_peaks(fig.povm_curve, s.threshold, s.spec.sites);
  } else {
    fig = tofcorr::run_figure1(s.spec, s.atoms, s.sched, grid, s.threshold);
  }
  print_config(fig.ground.config, fig.ground.energy);
  emit_curves(opts, "correlate", s, fig);
  return 0;
}

int cmd_figure1(const CommonOpts& opts) {
  const RunSetup s = load_setup(opts);
  const auto grid = tofcorr::default_u_grid(s.grid_points, s.u_max);
  const auto fig = tofcorr::run_figure1(s.spec, s.atoms, s.sched, grid, s.threshold);
  emit_curves(opts, "figure1", s, fig);
  return 0;
}

int cmd_sweep(const CommonOpts& opts) {
  const RunSetup s = load_setup(opts);
  std::vector<double> v2_list = s.v2_list;
  if (v2_list.empty()) v2_list = {0.0, 2.0, 5.0, 9.9, 15.0};
  const auto grid = tofcorr::default_u_grid(s.grid_points, s.u_max);
  const auto rows = tofcorr::sweep_v2(s.spec, v2_list, s.atoms, s.sched, grid, s.threshold,
                                      s.sched.seed, s.workers);

  KeyValues kv = base_manifest("sweep", s);
  std::ostringstream list;
  for (std::size_t i = 0; i < v2_list.size(); ++i)
    list << (i ? " " : "") << tofcorr::format_number(v2_list[i]);
  kv.emplace_back("v2_list", list.str());
  kv.emplace_back("workers", std::to_string(s.workers));
  tofcorr::write_sweep_csv(out_path(opts, "sweep.csv").string(), rows, kv);
  tofcorr::write_manifest(out_path(opts, "sweep_manifest.txt").string(), kv);
  for (const auto& r : rows) {
    std::cout << "V2 = " << tofcorr::format_number(r.v2);
    if (r.ok) {
      std::cout << ": secondary trace = " << tofcorr::format_number(r.secondary_trace)
                << ", povm = " << tofcorr::format_number(r.secondary_povm);
    } else {
      std::cout << ": failed (" << r.note << ")";
    }
    std::cout << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& level) {
  const auto lvl = level == "full" ? tofcorr::VerifyLevel::full : tofcorr::VerifyLevel::fast;
  const tofcorr::VerifyReport report = tofcorr::verify(lvl);
  for (const auto& c : report.checks) {
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
  }
  std::cout << (report.all_pass() ? "verify: all checks passed\n"
                                  : "verify: FAILURES detected\n");
  return report.all_pass() ? 0 : 1;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "flat key = value configuration file");
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--seed", opts.seed, "RNG seed (overrides config)");
  cmd->add_option("--grid-points", opts.grid_points, "u-grid resolution");
  cmd->add_option("--threshold", opts.threshold, "peak detection threshold above 1");
  cmd->add_option("--workers", opts.workers, "concurrent sweep rows");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bichromatic-lattice time-of-flight correlation simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tofcorr::kVersion);

  CommonOpts opts;
  std::string verify_level = "fast";

  auto* ground = app.add_subcommand("ground-state", "anneal and print the Fock configuration");
  add_common(ground, opts);
  auto* correlate =
      app.add_subcommand("correlate", "correlation curves for a given or annealed configuration");
  add_common(correlate, opts);
  auto* figure1 = app.add_subcommand("figure1", "annealed ground state and both curves");
  add_common(figure1, opts);
  auto* sweep = app.add_subcommand("sweep", "secondary-peak heights across V2 values");
  add_common(sweep, opts);
  auto* verify = app.add_subcommand("verify", "run the oracle cross-check suites");
  verify->add_option("--level", verify_level, "fast or full")
      ->check(CLI::IsMember({"fast", "full"}));

  try {
    app.parse(argc, argv);
    if (ground->parsed()) return cmd_ground_state(opts);
    if (correlate->parsed()) return cmd_correlate(opts);
    if (figure1->parsed()) return cmd_figure1(opts);
    if (sweep->parsed()) return cmd_sweep(opts);
    if (verify->parsed()) return cmd_verify(verify_level);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
