#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "msalab/output.hpp"

using namespace msalab;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

PairEstimate sample_estimate() {
  PairEstimate est;
  est.category = PairCategory::NonInteractive;
  est.k = 0;
  est.scale = 8;
  est.mass = 0.3;
  est.tallies.trials = 4;
  est.tallies.count_s = 1;
  est.tallies.count_t = 1;
  est.tallies.count_r = 0;
  est.tallies.count_s_not_t = 0;
  for (int i = 0; i < 4; ++i) {
    TrialRecord rec;
    rec.index = i;
    rec.seed = 1000 + static_cast<std::uint64_t>(i);
    rec.outcome.s = i == 2;
    rec.outcome.t = i == 2;
    est.records.push_back(rec);
  }
  return est;
}

}  // namespace

TEST_CASE("g17 formatting round-trips doubles exactly") {
  for (double v : {0.1, 1.0 / 3.0, 2.5e-17, -3.75, 0.0, 123456789.123456789,
                   std::exp(-1.0), 1e308}) {
    const std::string s = format_g17(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_g17(0.0) == "0");
  CHECK(format_g17(2.0) == "2");
  CHECK(format_g17(0.5) == "0.5");
}

TEST_CASE("atomic file writes create parents and leave no temporaries") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "msalab_test_output" / "nested";
  fs::remove_all(dir.parent_path());

  const fs::path target = dir / "artifact.txt";
  write_file_atomic(target.string(), "payload\n");
  {
    std::ifstream in(target);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "payload\n");
  }

  // overwrite in place
  write_file_atomic(target.string(), "second\n");
  {
    std::ifstream in(target);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "second\n");
  }

  int entries = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    ++entries;
    CHECK(e.path().filename() == "artifact.txt");
  }
  CHECK(entries == 1);
  fs::remove_all(dir.parent_path());
}

TEST_CASE("results table carries the exact header and one row per estimate") {
  const PairEstimate est = sample_estimate();
  const BoundReport rep = bound_check(est.tallies, est.scale, 3.0);
  const std::string csv = results_csv({est}, {rep});
  const auto lines = lines_of(csv);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] ==
        "category,k,L_k,m_k,trials,count_S,count_T,count_R,p_hat_S,ci_lo,ci_hi,target_Lk_pow,"
        "verdict");
  CHECK(lines[1].rfind("I,0,8,", 0) == 0);
  CHECK(lines[1].find("insufficient trials") != std::string::npos);

  CHECK_THROWS_AS(results_csv({est}, {}), std::invalid_argument);

  // empty input keeps the header for concatenation-friendly tooling
  CHECK(lines_of(results_csv({}, {})).size() == 1);
}

TEST_CASE("eigen table emits nan rows for insufficient fits") {
  EigenDecayRow good;
  good.seed = 7;
  good.energy = 1.25;
  good.m_hat = 0.4;
  good.r2 = 0.95;
  good.peak_cell = Point{3, -2};
  good.cells_fit = 5;
  good.sufficient = true;

  EigenDecayRow thin;
  thin.seed = 8;
  thin.energy = 0.5;
  thin.peak_cell = Point{0, 0};
  thin.cells_fit = 2;
  thin.sufficient = false;

  const auto lines = lines_of(eigen_csv({good, thin}));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "realization_seed,E_j,m_hat,r2,peak_cell,n_cells_fit");
  CHECK(lines[1].find("7,1.25,0.4") == 0);
  CHECK(lines[1].find("3;-2") != std::string::npos);
  CHECK(lines[2].find("nan,nan") != std::string::npos);
  CHECK(lines[2].find("0;0") != std::string::npos);
}

TEST_CASE("plot tables: headers survive empty input and bins count everything") {
  CHECK(lines_of(plot_ps_vs_scale({}, {})) ==
        std::vector<std::string>{"# category k L_k p_hat_S ci_lo ci_hi target_Lk_pow"});
  CHECK(lines_of(plot_decay_profile({})) ==
        std::vector<std::string>{"# realization_seed E_j distance log_cell_norm fit"});
  CHECK(lines_of(plot_ratio_histogram({})) ==
        std::vector<std::string>{"# bin_lo bin_hi count"});

  const std::vector<double> ratios{0.01, 0.02, 0.02, 0.5, 0.99};
  const auto lines = lines_of(plot_ratio_histogram(ratios, 10));
  REQUIRE(lines.size() == 11);
  long total = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream row(lines[i]);
    double lo = 0, hi = 0;
    long count = 0;
    row >> lo >> hi >> count;
    CHECK(lo < hi);
    total += count;
  }
  CHECK(total == static_cast<long>(ratios.size()));

  // single-value input still produces a nonempty, well-formed table
  const auto degenerate = lines_of(plot_ratio_histogram({0.25}, 5));
  CHECK(degenerate.size() >= 2);
}

TEST_CASE("decay profile plot rows mirror the per-cell profiles") {
  EigenDecayRow row;
  row.seed = 5;
  row.energy = 2.0;
  row.m_hat = 0.5;
  row.intercept = -1.0;
  row.r2 = 0.99;
  row.peak_cell = Point{0, 0};
  row.cells_fit = 3;
  row.sufficient = true;
  row.profile = {{0, -1.0}, {1, -1.6}, {2, -2.1}};

  const auto lines = lines_of(plot_decay_profile({row}));
  REQUIRE(lines.size() == 4);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream in(lines[i]);
    std::uint64_t seed = 0;
    double energy = 0, fit = 0, logv = 0;
    int dist = 0;
    in >> seed >> energy >> dist >> logv >> fit;
    CHECK(seed == 5);
    CHECK(energy == 2.0);
    CHECK(dist == static_cast<int>(i) - 1);
    // fitted line: intercept - m_hat * distance
    CHECK(fit == doctest::Approx(-1.0 - 0.5 * dist).epsilon(1e-12));
  }
}

TEST_CASE("trial audit lines parse back as json with replay keys") {
  LabConfig cfg = load_config(std::string(MSALAB_TEST_DATA) + "/reduced.ini");
  MsaRunResult result;
  result.schedule = scale_schedule(8, 1.5, 0.3, 0);
  result.estimates.push_back(sample_estimate());
  result.reports.push_back(bound_check(result.estimates[0].tallies, 8, 3.0));

  const auto lines = lines_of(trial_audit_jsonl(cfg, result));
  REQUIRE(lines.size() == 4);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto j = nlohmann::json::parse(lines[i]);
    CHECK(j.at("category") == "I");
    CHECK(j.at("k") == 0);
    CHECK(j.at("L") == 8);
    CHECK(j.at("trial") == static_cast<int>(i));
    CHECK(j.at("seed") == std::to_string(1000 + i));
    CHECK(j.at("S").is_boolean());
    CHECK(j.at("T").is_boolean());
    CHECK(j.at("R").is_boolean());
  }
}

TEST_CASE("run summary embeds the config echo and deterministic fields") {
  LabConfig cfg = load_config(std::string(MSALAB_TEST_DATA) + "/reduced.ini");
  MsaRunResult result;
  result.schedule = scale_schedule(cfg.schedule.l0, cfg.msa.params.alpha, cfg.msa.params.mass,
                                   cfg.schedule.k_max);
  result.interval.lo = 0.0;
  result.interval.hi = 1.25;
  result.interval.cutoff = 2.25;
  result.interval.median_lambda_min = 2.5;
  result.interval.realizations = 50;
  result.grid = make_energy_grid(0.0, 1.25, 3);
  result.initial_estimate = 0.125;
  result.estimates.push_back(sample_estimate());
  result.reports.push_back(bound_check(result.estimates[0].tallies, 8, 3.0));

  ChainCalibration chain;
  chain.c_geom = 0.0125;
  chain.ratios = {0.001, 0.0125};
  chain.samples = 2;

  const std::string text = run_summary_json(cfg, result, chain, 1.5);
  const auto j = nlohmann::json::parse(text);
  CHECK(j.at("config_ini") == serialize_config(cfg));
  CHECK(j.at("wall_seconds") == 1.5);
  CHECK(j.at("chain").at("c_geom_measured") == 0.0125);
  CHECK(j.at("chain").at("samples") == 2);
  CHECK(j.at("schedule").at("scales").at(0) == 8);
  CHECK(j.at("interval").at("hi") == 1.25);
  CHECK(j.at("results").size() == 1);
  CHECK(j.at("results").at(0).at("category") == "I");
  CHECK(j.at("params_hash").is_string());

  // identical inputs, identical bytes, wall clock aside
  CHECK(run_summary_json(cfg, result, chain, 99.0) != text);
  CHECK(run_summary_json(cfg, result, chain, 1.5) == text);
}

TEST_CASE("classification records are single json lines keyed by box and energy") {
  const LatticeBox box{Point{0, 9}, 3, 1, 2};
  ResonanceResult res;
  res.resonant = true;
  res.witness_distance = 1e-4;
  res.witness_threshold = 0.13;
  SingularityResult sing;
  sing.singular = false;
  sing.witness_norm = 1e-6;
  sing.threshold = 1e-3;

  const std::string line = classification_record(box, 0.75, res, sing, false, 42);
  CHECK(line.back() == '\n');
  CHECK(lines_of(line).size() == 1);
  const auto j = nlohmann::json::parse(line);
  CHECK(j.at("center") == nlohmann::json::array({0, 9}));
  CHECK(j.at("L") == 3);
  CHECK(j.at("E") == 0.75);
  CHECK(j.at("resonant") == true);
  CHECK(j.at("singular") == false);
  CHECK(j.at("tunneling") == false);
  CHECK(j.at("params_hash") == "42");
}
