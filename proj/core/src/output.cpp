#include "msalab/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "msalab/rng.hpp"

namespace msalab {

namespace {

using nlohmann::json;

std::string point_str(const Point& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(p[i]);
  }
  return s;
}

json point_json(const Point& p) {
  json a = json::array();
  for (int c : p) a.push_back(c);
  return a;
}

std::uint64_t params_hash(const LabConfig& cfg) { return rng::hash_tag(serialize_config(cfg)); }

json tallies_json(const EventTallies& t) {
  return json{{"trials", t.trials},
              {"count_S", t.count_s},
              {"count_T", t.count_t},
              {"count_R", t.count_r},
              {"count_S_not_T", t.count_s_not_t},
              {"audit_checked", t.audit_checked},
              {"audit_violations", t.audit_violations}};
}

}  // namespace

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("write_file_atomic: cannot open " + tmp.string());
    os << content;
    os.flush();
    if (!os) throw std::runtime_error("write_file_atomic: write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string results_csv(const std::vector<PairEstimate>& estimates,
                        const std::vector<BoundReport>& reports) {
  if (estimates.size() != reports.size()) {
    throw std::invalid_argument("results_csv: estimates and reports must be parallel");
  }
  std::ostringstream os;
  os << "category,k,L_k,m_k,trials,count_S,count_T,count_R,p_hat_S,ci_lo,ci_hi,"
        "target_Lk_pow,verdict\n";
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const PairEstimate& e = estimates[i];
    const BoundReport& r = reports[i];
    os << category_label(e.category) << ',' << e.k << ',' << e.scale << ',' << format_g17(e.mass)
       << ',' << e.tallies.trials << ',' << e.tallies.count_s << ',' << e.tallies.count_t << ','
       << e.tallies.count_r << ',' << format_g17(r.p_hat_s) << ',' << format_g17(r.ci_lo) << ','
       << format_g17(r.ci_hi) << ',' << format_g17(r.target) << ',' << r.verdict << '\n';
  }
  return os.str();
}

std::string eigen_csv(const std::vector<EigenDecayRow>& rows) {
  std::ostringstream os;
  os << "realization_seed,E_j,m_hat,r2,peak_cell,n_cells_fit\n";
  for (const EigenDecayRow& row : rows) {
    os << row.seed << ',' << format_g17(row.energy) << ','
       << (row.sufficient ? format_g17(row.m_hat) : "nan") << ','
       << (row.sufficient ? format_g17(row.r2) : "nan") << ',' << point_str(row.peak_cell) << ','
       << row.cells_fit << '\n';
  }
  return os.str();
}

std::string run_summary_json(const LabConfig& cfg, const MsaRunResult& result,
                             const ChainCalibration& chain, double wall_seconds) {
  json j;
  j["config_ini"] = serialize_config(cfg);
  j["params_hash"] = std::to_string(params_hash(cfg));

  j["schedule"] = {{"scales", result.schedule.scales},
                   {"masses", result.schedule.masses},
                   {"truncated", result.schedule.truncated}};
  j["interval"] = {{"lo", result.interval.lo},
                   {"hi", result.interval.hi},
                   {"median_lambda_min", result.interval.median_lambda_min},
                   {"cutoff", result.interval.cutoff},
                   {"realizations", result.interval.realizations}};
  j["energy_grid"] = {{"points", result.grid.points}, {"spacing", result.grid.spacing()}};
  j["initial_estimate"] = result.initial_estimate;

  j["chain"] = {{"c_geom_measured", chain.c_geom},
                {"samples", chain.samples},
                {"skipped_near_singular", chain.skipped_near_singular},
                {"ratios", chain.ratios}};

  json rows = json::array();
  for (std::size_t i = 0; i < result.estimates.size(); ++i) {
    const PairEstimate& e = result.estimates[i];
    const BoundReport& r = result.reports[i];
    rows.push_back(json{{"category", category_label(e.category)},
                        {"k", e.k},
                        {"L_k", e.scale},
                        {"m_k", e.mass},
                        {"tallies", tallies_json(e.tallies)},
                        {"p_hat_S", r.p_hat_s},
                        {"ci_lo", r.ci_lo},
                        {"ci_hi", r.ci_hi},
                        {"target_Lk_pow", r.target},
                        {"resolvable", r.resolvable},
                        {"verdict", r.verdict},
                        {"p_hat_T", r.p_hat_t},
                        {"p_hat_R", r.p_hat_r},
                        {"p_hat_S_not_T", r.p_hat_s_not_t},
                        {"decomposition_ok", r.decomposition_ok}});
  }
  j["results"] = rows;
  j["wall_seconds"] = wall_seconds;
  return j.dump(2) + "\n";
}

std::string trial_audit_jsonl(const LabConfig& cfg, const MsaRunResult& result) {
  const std::string hash = std::to_string(params_hash(cfg));
  std::ostringstream os;
  for (const PairEstimate& e : result.estimates) {
    for (const TrialRecord& rec : e.records) {
      json j{{"category", category_label(e.category)},
             {"k", e.k},
             {"L", e.scale},
             {"trial", rec.index},
             {"seed", std::to_string(rec.seed)},
             {"S", rec.outcome.s},
             {"T", rec.outcome.t},
             {"R", rec.outcome.r},
             {"witness_E_S", rec.outcome.witness_energy_s},
             {"witness_E_R", rec.outcome.witness_energy_r},
             {"audit_applicable", rec.outcome.audit_applicable},
             {"audit_consistent", rec.outcome.audit_consistent},
             {"near_singular", rec.outcome.near_singular_seen},
             {"params_hash", hash}};
      os << j.dump() << '\n';
    }
  }
  return os.str();
}

std::string classification_record(const LatticeBox& box, double energy,
                                  const ResonanceResult& res, const SingularityResult& sing,
                                  bool tunneling, std::uint64_t hash) {
  json j{{"center", point_json(box.center)},
         {"L", box.radius},
         {"E", energy},
         {"resonant", res.resonant},
         {"resonance_exhaustive", res.exhaustive},
         {"resonance_witness_dist", res.witness_distance},
         {"singular", sing.singular},
         {"near_singular", sing.near_singular},
         {"witness_norm", sing.witness_norm},
         {"threshold", sing.threshold},
         {"tunneling", tunneling},
         {"params_hash", std::to_string(hash)}};
  return j.dump() + "\n";
}

std::string plot_ps_vs_scale(const std::vector<PairEstimate>& estimates,
                             const std::vector<BoundReport>& reports) {
  if (estimates.size() != reports.size()) {
    throw std::invalid_argument("plot_ps_vs_scale: estimates and reports must be parallel");
  }
  std::ostringstream os;
  os << "# category k L_k p_hat_S ci_lo ci_hi target_Lk_pow\n";
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const PairEstimate& e = estimates[i];
    const BoundReport& r = reports[i];
    os << category_label(e.category) << ' ' << e.k << ' ' << e.scale << ' '
       << format_g17(r.p_hat_s) << ' ' << format_g17(r.ci_lo) << ' ' << format_g17(r.ci_hi) << ' '
       << format_g17(r.target) << '\n';
  }
  return os.str();
}

std::string plot_decay_profile(const std::vector<EigenDecayRow>& rows) {
  std::ostringstream os;
  os << "# realization_seed E_j distance log_cell_norm fit\n";
  for (const EigenDecayRow& row : rows) {
    for (const auto& [dist, logv] : row.profile) {
      const double fit = row.sufficient
                             ? row.intercept - row.m_hat * static_cast<double>(dist)
                             : std::numeric_limits<double>::quiet_NaN();
      os << row.seed << ' ' << format_g17(row.energy) << ' ' << dist << ' ' << format_g17(logv)
         << ' ' << format_g17(fit) << '\n';
    }
  }
  return os.str();
}

std::string plot_ratio_histogram(const std::vector<double>& ratios, int bins) {
  if (bins < 1) throw std::invalid_argument("plot_ratio_histogram: need at least one bin");
  std::ostringstream os;
  os << "# bin_lo bin_hi count\n";

  std::vector<double> finite;
  for (double r : ratios) {
    if (std::isfinite(r)) finite.push_back(r);
  }
  if (finite.empty()) return os.str();

  const double hi = *std::max_element(finite.begin(), finite.end());
  if (hi <= 0.0) {
    os << format_g17(0.0) << ' ' << format_g17(0.0) << ' ' << finite.size() << '\n';
    return os.str();
  }
  const double width = hi / bins;
  std::vector<long> counts(static_cast<std::size_t>(bins), 0);
  for (double r : finite) {
    int idx = static_cast<int>(r / width);
    idx = std::clamp(idx, 0, bins - 1);
    ++counts[static_cast<std::size_t>(idx)];
  }
  for (int b = 0; b < bins; ++b) {
    os << format_g17(width * b) << ' ' << format_g17(width * (b + 1)) << ' '
       << counts[static_cast<std::size_t>(b)] << '\n';
  }
  return os.str();
}

}  // namespace msalab
