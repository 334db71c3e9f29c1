#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "msalab/lab.hpp"
#include "msalab/msa.hpp"

namespace msalab {

// Pair categories of the two-box estimates: I = two non-interactive boxes,
// II = two interactive boxes, III = one of each.
enum class PairCategory { NonInteractive, Interactive, Mixed };

std::string category_label(PairCategory cat);          // "I", "II", "III"
PairCategory category_from_label(const std::string&);  // throws on anything else

struct MsaSettings {
  MsaParameters params;
  double exponent_p = 3.0;
  double exponent_q = 19.0;
};

struct ScheduleSettings {
  int l0 = 8;
  int k_max = 1;
};

struct ExperimentSettings {
  std::vector<PairCategory> categories{PairCategory::NonInteractive, PairCategory::Interactive,
                                       PairCategory::Mixed};
  int trials = 200;
  int energy_points = 25;
  double energy_min = 0.0;
  double energy_max = 0.0;      // used only when auto_energy_max is off
  bool auto_energy_max = true;  // calibrate the upper edge from the spectrum
  int eigen_realizations = 10;
  int eigen_states = 3;
  int eigen_radius = 23;
};

struct RunSettings {
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out_dir = "out";
  bool audit_log = false;
  bool exhaustive_oracles = false;
};

// The whole sectioned key-value config. Struct defaults are a neutral
// baseline (zero interaction), not the shipped default.ini, which tunes the
// physics knobs; a bare LabConfig therefore fails validate() while the pair
// categories II/III are requested. Parse errors and constraint violations
// both carry the offending key.
struct LabConfig {
  ModelConfig model;
  MsaSettings msa;
  ScheduleSettings schedule;
  ExperimentSettings experiment;
  RunSettings run;
};

LabConfig parse_config(const std::string& text);
LabConfig load_config(const std::string& path);  // throws std::runtime_error on IO failure

// 17-significant-digit round-trip: parse(serialize(c)) reproduces c exactly.
std::string serialize_config(const LabConfig& cfg);

// Full constraint sweep; throws std::invalid_argument naming the field and
// the constraint (e.g. "msa.exponent_q: q must exceed 3p + 9").
void validate(const LabConfig& cfg);

}  // namespace msalab
