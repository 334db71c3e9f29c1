// msalab: command-line surface over the core library. Every artifact is
// written atomically into the configured output directory; stdout carries a
// short human summary, exit codes carry the machine verdict:
//   0 success, 1 validation error, 2 solver failure, 3 property violation.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "msalab/audits.hpp"
#include "msalab/classify.hpp"
#include "msalab/config.hpp"
#include "msalab/experiments.hpp"
#include "msalab/green.hpp"
#include "msalab/lab.hpp"
#include "msalab/msa.hpp"
#include "msalab/output.hpp"
#include "msalab/rng.hpp"
#include "msalab/spectral.hpp"

namespace {

using namespace msalab;
namespace fs = std::filesystem;

struct CliOptions {
  std::string config_path = "configs/default.ini";
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out_dir;
  bool exhaustive_oracles = false;
};

LabConfig load_cli_config(const CliOptions& opt) {
  if (!fs::exists(opt.config_path)) {
    throw std::invalid_argument("config file not found: " + opt.config_path);
  }
  LabConfig cfg = load_config(opt.config_path);
  if (opt.seed) cfg.run.seed = *opt.seed;
  if (opt.workers) cfg.run.workers = *opt.workers;
  if (opt.out_dir) cfg.run.out_dir = *opt.out_dir;
  if (opt.exhaustive_oracles) cfg.run.exhaustive_oracles = true;
  if (cfg.run.exhaustive_oracles) cfg.msa.params.exhaustive_subcubes = true;
  validate(cfg);
  return cfg;
}

std::string out_path(const LabConfig& cfg, const std::string& name) {
  return (fs::path(cfg.run.out_dir) / name).string();
}

LatticeBox origin_box(const LabConfig& cfg, int radius) {
  const int dims = cfg.model.dim_per_particle * cfg.model.particles;
  return LatticeBox{Point(static_cast<std::size_t>(dims), 0), radius,
                    cfg.model.dim_per_particle, cfg.model.particles};
}

// [E0, hi] with hi from config or the calibration heuristic.
CalibratedInterval resolve_interval(const LabConfig& cfg) { return calibrate_interval(cfg); }

int cmd_spectrum(const LabConfig& cfg, int radius, int states) {
  const LatticeBox box = origin_box(cfg, radius);
  const ModelConfig m = with_seed(cfg.model, cfg.run.seed);
  const auto op = FiniteVolumeOperator::assemble(
      box, m.mesh,
      alloy_potential(m.field, m.profile, m.interaction, m.dim_per_particle, m.particles));
  const int k = states <= 0 ? op.size() : std::min(states, op.size());
  const SmallestEigs eigs = smallest_eigenvalues(op, k, false);
  for (double v : eigs.values) std::cout << format_g17(v) << "\n";
  return 0;
}

int cmd_green(const LabConfig& cfg, int radius, double energy) {
  const LatticeBox box = origin_box(cfg, radius);
  const ModelConfig m = with_seed(cfg.model, cfg.run.seed);
  const auto op = FiniteVolumeOperator::assemble(
      box, m.mesh,
      alloy_potential(m.field, m.profile, m.interaction, m.dim_per_particle, m.particles));
  GreenSolver solver(op, energy);

  const std::vector<Point> cells = lattice_points(box);
  const std::vector<double> norms = solver.norms_against(cells, box.center);

  std::ostringstream table;
  table << "#";
  for (std::size_t a = 0; a < box.center.size(); ++a) table << " x" << a;
  table << " norm\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (int c : cells[i]) table << c << ' ';
    table << format_g17(norms[i]) << '\n';
  }
  const std::string path = out_path(cfg, "green.dat");
  write_file_atomic(path, table.str());
  std::cout << "wrote " << path << " (" << cells.size() << " cells, E = " << format_g17(energy)
            << ")\n";
  return 0;
}

int cmd_classify(const LabConfig& cfg, int radius) {
  const CalibratedInterval interval = resolve_interval(cfg);
  const EnergyGrid grid =
      make_energy_grid(interval.lo, interval.hi, cfg.experiment.energy_points);
  const LatticeBox box = origin_box(cfg, radius);

  RealizationLab lab(with_seed(cfg.model, cfg.run.seed), interval.cutoff);
  const int sub_radius = min_subscale(radius, cfg.msa.params.alpha);
  const TunnelingResult tun =
      classify_tunneling(lab, box, grid, cfg.msa.params.mass, sub_radius);

  const std::uint64_t hash = rng::hash_tag(serialize_config(cfg));
  std::ostringstream log;
  int resonant = 0, singular = 0;
  for (double energy : grid.values()) {
    const ResonanceResult res = classify_resonant(lab, box, energy, cfg.msa.params);
    const SingularityResult sing = classify_singular(lab, box, energy, cfg.msa.params.mass);
    resonant += res.resonant ? 1 : 0;
    singular += sing.singular ? 1 : 0;
    log << classification_record(box, energy, res, sing, tun.tunneling, hash);
  }
  const std::string path = out_path(cfg, "classify_audit.jsonl");
  write_file_atomic(path, log.str());
  std::cout << "box L = " << radius << ", " << grid.points << " energies in ["
            << format_g17(interval.lo) << ", " << format_g17(interval.hi) << "]\n"
            << "resonant at " << resonant << " energies, singular at " << singular
            << ", tunneling = " << (tun.tunneling ? "yes" : "no") << "\n"
            << "wrote " << path << "\n";
  return 0;
}

int cmd_calibrate_cgeom(const LabConfig& cfg, int samples, int holdout_samples) {
  const ChainCalibration cal = calibrate_cgeom(cfg, samples, 2);
  const ChainHoldout hold = holdout_cgeom(cfg, cal.c_geom, holdout_samples, 3);

  nlohmann::json j{{"c_geom", cal.c_geom},
                   {"samples", cal.samples},
                   {"skipped_near_singular", cal.skipped_near_singular},
                   {"ratios", cal.ratios},
                   {"holdout",
                    {{"samples", hold.samples},
                     {"violations", hold.violations},
                     {"worst_ratio", hold.worst_ratio}}}};
  const std::string path = out_path(cfg, "cgeom.json");
  write_file_atomic(path, j.dump(2) + "\n");

  std::cout << "C_geom = " << format_g17(cal.c_geom) << " over " << cal.samples << " samples ("
            << cal.skipped_near_singular << " near-singular skipped)\n"
            << "holdout: worst ratio " << format_g17(hold.worst_ratio) << ", "
            << hold.violations << " violations in " << hold.samples << " samples\n"
            << "wrote " << path << "\n";
  return hold.violations > 0 ? 3 : 0;
}

int cmd_msa_run(const LabConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const MsaRunResult result = run_msa(cfg);
  const ChainCalibration chain = calibrate_cgeom(cfg, 40, 1);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  write_file_atomic(out_path(cfg, "results.csv"), results_csv(result.estimates, result.reports));
  write_file_atomic(out_path(cfg, "summary.json"), run_summary_json(cfg, result, chain, wall));
  if (cfg.run.audit_log) {
    write_file_atomic(out_path(cfg, "audit.jsonl"), trial_audit_jsonl(cfg, result));
  }

  std::cout << "interval [" << format_g17(result.interval.lo) << ", "
            << format_g17(result.interval.hi) << "], C_geom(measured) = "
            << format_g17(chain.c_geom) << "\n";
  bool property_violation = false;
  for (std::size_t i = 0; i < result.estimates.size(); ++i) {
    const PairEstimate& e = result.estimates[i];
    const BoundReport& r = result.reports[i];
    std::cout << "category " << category_label(e.category) << " k=" << e.k << " L=" << e.scale
              << ": P(S) = " << format_g17(r.p_hat_s) << " vs target " << format_g17(r.target)
              << " -> " << r.verdict << "\n";
    if (!r.decomposition_ok || e.tallies.audit_violations > 0) property_violation = true;
  }
  std::cout << "wrote " << out_path(cfg, "results.csv") << ", " << out_path(cfg, "summary.json")
            << "\n";
  if (property_violation) {
    std::cerr << "event-decomposition or witness audit violated; see summary.json\n";
    return 3;
  }
  return 0;
}

int cmd_eigen_decay(const LabConfig& cfg) {
  const CalibratedInterval interval = resolve_interval(cfg);
  const std::vector<EigenDecayRow> rows =
      eigen_decay_experiment(cfg, interval.lo, interval.hi);

  write_file_atomic(out_path(cfg, "eigen_decay.csv"), eigen_csv(rows));
  write_file_atomic(out_path(cfg, "plot_decay_profile.dat"), plot_decay_profile(rows));

  int sufficient = 0;
  std::vector<double> slopes;
  for (const EigenDecayRow& r : rows) {
    if (r.sufficient) {
      ++sufficient;
      slopes.push_back(r.m_hat);
    }
  }
  std::sort(slopes.begin(), slopes.end());
  std::cout << rows.size() << " states in [" << format_g17(interval.lo) << ", "
            << format_g17(interval.hi) << "], " << sufficient << " with enough radii to fit\n";
  if (!slopes.empty()) {
    std::cout << "median fitted decay rate " << format_g17(slopes[slopes.size() / 2]) << "\n";
  }
  std::cout << "wrote " << out_path(cfg, "eigen_decay.csv") << ", "
            << out_path(cfg, "plot_decay_profile.dat") << "\n";
  return 0;
}

int cmd_check(const LabConfig& cfg) {
  const std::vector<CheckResult> results = run_check_suite(cfg);
  std::ostringstream report;
  int failures = 0;
  for (const CheckResult& r : results) {
    const std::string line =
        std::string(r.pass ? "[PASS] " : "[FAIL] ") + r.name + ": " + r.detail;
    std::cout << line << "\n";
    report << line << "\n";
    if (!r.pass) ++failures;
  }
  const std::string path = out_path(cfg, "check_report.txt");
  write_file_atomic(path, report.str());
  std::cout << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed")
            << "; wrote " << path << "\n";
  return failures == 0 ? 0 : 3;
}

int cmd_plot_data(const LabConfig& cfg, int bins) {
  const std::string results_path = out_path(cfg, "results.csv");
  const std::string summary_path = out_path(cfg, "summary.json");
  for (const std::string& p : {results_path, summary_path}) {
    if (!fs::exists(p)) {
      std::cerr << "missing artifact: " << p << " (run msa-run first)\n";
      return 1;
    }
  }

  // (i) frequency vs scale: pass the CSV fields through untouched so the
  // table is byte-stable against the artifact it came from.
  std::ifstream in(results_path);
  std::string line;
  std::getline(in, line);  // header
  std::ostringstream table;
  table << "# category k L_k p_hat_S ci_lo ci_hi target_Lk_pow\n";
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() < 13) {
      std::cerr << "malformed results row: " << line << "\n";
      return 1;
    }
    table << fields[0] << ' ' << fields[1] << ' ' << fields[2] << ' ' << fields[8] << ' '
          << fields[9] << ' ' << fields[10] << ' ' << fields[11] << '\n';
  }
  write_file_atomic(out_path(cfg, "plot_ps_vs_scale.dat"), table.str());

  // (iii) chain-ratio histogram from the measured calibration sample.
  std::ifstream js(summary_path);
  nlohmann::json summary;
  js >> summary;
  std::vector<double> ratios;
  if (summary.contains("chain") && summary["chain"].contains("ratios")) {
    ratios = summary["chain"]["ratios"].get<std::vector<double>>();
  }
  write_file_atomic(out_path(cfg, "plot_chain_ratios.dat"), plot_ratio_histogram(ratios, bins));

  std::cout << "wrote " << out_path(cfg, "plot_ps_vs_scale.dat") << ", "
            << out_path(cfg, "plot_chain_ratios.dat") << "\n";
  if (!fs::exists(out_path(cfg, "plot_decay_profile.dat"))) {
    std::cout << "note: decay-profile table absent; run eigen-decay to produce it\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-scale analysis laboratory for disordered lattice operators"};
  app.require_subcommand(1);
  app.fallthrough();

  CliOptions opt;
  app.add_option("--config", opt.config_path, "INI config path")->capture_default_str();
  app.add_option("--seed", opt.seed, "override run.seed");
  app.add_option("--workers", opt.workers, "override run.workers");
  app.add_option("--out", opt.out_dir, "override run.out_dir");
  app.add_flag("--exhaustive-oracles", opt.exhaustive_oracles,
               "enumerate every sub-box in resonance scans");

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of one realization's box");
  int radius = 0;
  int states = 8;
  spectrum->add_option("--radius", radius, "box radius (default: schedule l0)");
  spectrum->add_option("--states", states, "how many eigenvalues (0 = all)")
      ->capture_default_str();

  auto* green = app.add_subcommand("green", "cell-norm table for one (box, E)");
  double energy = 0.0;
  green->add_option("--radius", radius, "box radius (default: schedule l0)");
  green->add_option("--energy", energy, "energy E")->required();

  auto* classify = app.add_subcommand("classify", "classification audit of one box over the E-grid");
  classify->add_option("--radius", radius, "box radius (default: schedule l0)");

  auto* cgeom = app.add_subcommand("calibrate-cgeom", "measure the resolvent-chain constant");
  int samples = 200;
  int holdout = 200;
  cgeom->add_option("--samples", samples, "calibration sample count")->capture_default_str();
  cgeom->add_option("--holdout", holdout, "holdout sample count")->capture_default_str();

  auto* msarun = app.add_subcommand("msa-run", "full multi-scale sweep over categories and scales");

  auto* eigen = app.add_subcommand("eigen-decay", "eigenfunction decay-rate experiment");

  auto* check = app.add_subcommand("check", "fast invariant and property suite");

  auto* plot = app.add_subcommand("plot-data", "emit gnuplot tables from run artifacts");
  int bins = 20;
  plot->add_option("--bins", bins, "histogram bin count")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    const LabConfig cfg = load_cli_config(opt);
    const int r = radius > 0 ? radius : cfg.schedule.l0;
    if (spectrum->parsed()) return cmd_spectrum(cfg, r, states);
    if (green->parsed()) return cmd_green(cfg, r, energy);
    if (classify->parsed()) return cmd_classify(cfg, r);
    if (cgeom->parsed()) return cmd_calibrate_cgeom(cfg, samples, holdout);
    if (msarun->parsed()) return cmd_msa_run(cfg);
    if (eigen->parsed()) return cmd_eigen_decay(cfg);
    if (check->parsed()) return cmd_check(cfg);
    if (plot->parsed()) return cmd_plot_data(cfg, bins);
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "property violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
