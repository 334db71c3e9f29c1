#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "msalab/audits.hpp"
#include "msalab/experiments.hpp"

namespace msalab {

// Shortest exact decimal round-trip (printf %.17g); every floating value in an
// artifact goes through this so re-runs are byte-comparable.
std::string format_g17(double v);

// Temp file in the target directory plus rename; a reader never observes a
// half-written artifact. Throws std::runtime_error on any filesystem failure.
void write_file_atomic(const std::string& path, const std::string& content);

// One row per (category, scale); estimates and reports are parallel arrays.
std::string results_csv(const std::vector<PairEstimate>& estimates,
                        const std::vector<BoundReport>& reports);

std::string eigen_csv(const std::vector<EigenDecayRow>& rows);

// Full run record: config echo, calibrated interval, measured chain constant,
// per-scale verdicts. wall_seconds is the one field exempt from byte
// determinism.
std::string run_summary_json(const LabConfig& cfg, const MsaRunResult& result,
                             const ChainCalibration& chain, double wall_seconds);

// One line per trial, replayable from (category, k, seed).
std::string trial_audit_jsonl(const LabConfig& cfg, const MsaRunResult& result);

// One line per (box, E) for the single-box classification audit.
std::string classification_record(const LatticeBox& box, double energy,
                                  const ResonanceResult& res, const SingularityResult& sing,
                                  bool tunneling, std::uint64_t params_hash);

// gnuplot-style whitespace tables; empty inputs produce the header line only.
std::string plot_ps_vs_scale(const std::vector<PairEstimate>& estimates,
                             const std::vector<BoundReport>& reports);
std::string plot_decay_profile(const std::vector<EigenDecayRow>& rows);
std::string plot_ratio_histogram(const std::vector<double>& ratios, int bins = 20);

}  // namespace msalab
