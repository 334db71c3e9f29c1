#include "msalab/config.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace msalab {

std::string category_label(PairCategory cat) {
  switch (cat) {
    case PairCategory::NonInteractive: return "I";
    case PairCategory::Interactive: return "II";
    case PairCategory::Mixed: return "III";
  }
  throw std::logic_error("category_label: unknown category");
}

PairCategory category_from_label(const std::string& s) {
  if (s == "I") return PairCategory::NonInteractive;
  if (s == "II") return PairCategory::Interactive;
  if (s == "III") return PairCategory::Mixed;
  throw std::invalid_argument("pair category must be I, II or III, got '" + s + "'");
}

namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& v, int line) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || v.empty()) fail(line, "expected a number, got '" + v + "'");
  return x;
}

long long parse_int(const std::string& v, int line) {
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty()) fail(line, "expected an integer, got '" + v + "'");
  return x;
}

std::uint64_t parse_u64(const std::string& v, int line) {
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty() || v[0] == '-')
    fail(line, "expected an unsigned integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(line, "expected true or false, got '" + v + "'");
}

std::vector<PairCategory> parse_categories(const std::string& v, int line) {
  std::vector<PairCategory> out;
  std::string token;
  std::istringstream in(v);
  while (std::getline(in, token, ',')) {
    token = trim(token);
    if (token.empty()) continue;
    try {
      out.push_back(category_from_label(token));
    } catch (const std::invalid_argument& e) {
      fail(line, e.what());
    }
  }
  return out;
}

}  // namespace

LabConfig parse_config(const std::string& text) {
  LabConfig cfg;
  std::string section;
  std::set<std::string> seen;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;

    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "model" && section != "disorder" && section != "interaction" &&
          section != "msa" && section != "schedule" && section != "experiment" &&
          section != "run") {
        fail(line, "unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    if (section.empty()) fail(line, "key before any section header");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    const std::string full = section + "." + key;
    if (!seen.insert(full).second) fail(line, "duplicate key " + full);

    if (full == "model.dim_d") cfg.model.dim_per_particle = static_cast<int>(parse_int(val, line));
    else if (full == "model.particles") cfg.model.particles = static_cast<int>(parse_int(val, line));
    else if (full == "model.mesh") {
      if (val == "tight_binding") cfg.model.mesh.mode = MeshMode::TightBinding;
      else if (val == "continuum_fd") cfg.model.mesh.mode = MeshMode::ContinuumFD;
      else fail(line, "mesh must be tight_binding or continuum_fd");
    } else if (full == "model.spacing_h") cfg.model.mesh.spacing = parse_double(val, line);
    else if (full == "disorder.law") {
      if (val == "uniform") cfg.model.field.law = AmplitudeLaw::Uniform;
      else if (val == "hoelder") cfg.model.field.law = AmplitudeLaw::Hoelder;
      else fail(line, "law must be uniform or hoelder");
    } else if (full == "disorder.bound_m") cfg.model.field.bound = parse_double(val, line);
    else if (full == "disorder.hoelder_b") cfg.model.field.exponent = parse_double(val, line);
    else if (full == "disorder.bump") {
      if (val == "tent") cfg.model.profile.kind = BumpKind::Tent;
      else if (val == "plateau") cfg.model.profile.kind = BumpKind::Plateau;
      else fail(line, "bump must be tent or plateau");
    } else if (full == "disorder.bump_radius") cfg.model.profile.radius = parse_double(val, line);
    else if (full == "disorder.bump_scale") cfg.model.profile.scale = parse_double(val, line);
    else if (full == "interaction.kind") {
      if (val == "step") cfg.model.interaction.kind = InteractionKind::Step;
      else if (val == "tent") cfg.model.interaction.kind = InteractionKind::Tent;
      else fail(line, "interaction kind must be step or tent");
    } else if (full == "interaction.strength_c") cfg.model.interaction.strength = parse_double(val, line);
    else if (full == "interaction.range_r0") cfg.model.interaction.range = parse_double(val, line);
    else if (full == "msa.alpha") cfg.msa.params.alpha = parse_double(val, line);
    else if (full == "msa.mass_m0") cfg.msa.params.mass = parse_double(val, line);
    else if (full == "msa.exponent_p") cfg.msa.exponent_p = parse_double(val, line);
    else if (full == "msa.exponent_q") cfg.msa.exponent_q = parse_double(val, line);
    else if (full == "msa.cluster_budget_n") cfg.msa.params.cluster_budget = static_cast<int>(parse_int(val, line));
    else if (full == "msa.neighborhood_scale_a") cfg.msa.params.neighborhood_scale = parse_double(val, line);
    else if (full == "msa.c_geom") cfg.msa.params.c_geom = parse_double(val, line);
    else if (full == "schedule.l0") cfg.schedule.l0 = static_cast<int>(parse_int(val, line));
    else if (full == "schedule.k_max") cfg.schedule.k_max = static_cast<int>(parse_int(val, line));
    else if (full == "experiment.categories") cfg.experiment.categories = parse_categories(val, line);
    else if (full == "experiment.trials") cfg.experiment.trials = static_cast<int>(parse_int(val, line));
    else if (full == "experiment.energy_points") cfg.experiment.energy_points = static_cast<int>(parse_int(val, line));
    else if (full == "experiment.energy_min_e0") cfg.experiment.energy_min = parse_double(val, line);
    else if (full == "experiment.energy_max_e1") {
      if (val == "auto") {
        cfg.experiment.auto_energy_max = true;
        cfg.experiment.energy_max = 0.0;
      } else {
        cfg.experiment.auto_energy_max = false;
        cfg.experiment.energy_max = parse_double(val, line);
      }
    } else if (full == "experiment.eigen_realizations") cfg.experiment.eigen_realizations = static_cast<int>(parse_int(val, line));
    else if (full == "experiment.eigen_states") cfg.experiment.eigen_states = static_cast<int>(parse_int(val, line));
    else if (full == "experiment.eigen_radius") cfg.experiment.eigen_radius = static_cast<int>(parse_int(val, line));
    else if (full == "run.seed") cfg.run.seed = parse_u64(val, line);
    else if (full == "run.workers") cfg.run.workers = static_cast<int>(parse_int(val, line));
    else if (full == "run.out_dir") {
      if (val.empty()) fail(line, "out_dir must not be empty");
      cfg.run.out_dir = val;
    } else if (full == "run.audit_log") cfg.run.audit_log = parse_bool(val, line);
    else if (full == "run.exhaustive_oracles") cfg.run.exhaustive_oracles = parse_bool(val, line);
    else fail(line, "unknown key " + full);
  }
  return cfg;
}

LabConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

std::string serialize_config(const LabConfig& cfg) {
  std::ostringstream out;
  out << "[model]\n";
  out << "dim_d = " << cfg.model.dim_per_particle << "\n";
  out << "particles = " << cfg.model.particles << "\n";
  out << "mesh = " << (cfg.model.mesh.mode == MeshMode::TightBinding ? "tight_binding" : "continuum_fd") << "\n";
  out << "spacing_h = " << g17(cfg.model.mesh.spacing) << "\n";
  out << "\n[disorder]\n";
  out << "law = " << (cfg.model.field.law == AmplitudeLaw::Uniform ? "uniform" : "hoelder") << "\n";
  out << "bound_m = " << g17(cfg.model.field.bound) << "\n";
  out << "hoelder_b = " << g17(cfg.model.field.exponent) << "\n";
  out << "bump = " << (cfg.model.profile.kind == BumpKind::Tent ? "tent" : "plateau") << "\n";
  out << "bump_radius = " << g17(cfg.model.profile.radius) << "\n";
  out << "bump_scale = " << g17(cfg.model.profile.scale) << "\n";
  out << "\n[interaction]\n";
  out << "kind = " << (cfg.model.interaction.kind == InteractionKind::Step ? "step" : "tent") << "\n";
  out << "strength_c = " << g17(cfg.model.interaction.strength) << "\n";
  out << "range_r0 = " << g17(cfg.model.interaction.range) << "\n";
  out << "\n[msa]\n";
  out << "alpha = " << g17(cfg.msa.params.alpha) << "\n";
  out << "mass_m0 = " << g17(cfg.msa.params.mass) << "\n";
  out << "exponent_p = " << g17(cfg.msa.exponent_p) << "\n";
  out << "exponent_q = " << g17(cfg.msa.exponent_q) << "\n";
  out << "cluster_budget_n = " << cfg.msa.params.cluster_budget << "\n";
  out << "neighborhood_scale_a = " << g17(cfg.msa.params.neighborhood_scale) << "\n";
  out << "c_geom = " << g17(cfg.msa.params.c_geom) << "\n";
  out << "\n[schedule]\n";
  out << "l0 = " << cfg.schedule.l0 << "\n";
  out << "k_max = " << cfg.schedule.k_max << "\n";
  out << "\n[experiment]\n";
  out << "categories = ";
  for (std::size_t i = 0; i < cfg.experiment.categories.size(); ++i) {
    if (i) out << ",";
    out << category_label(cfg.experiment.categories[i]);
  }
  out << "\n";
  out << "trials = " << cfg.experiment.trials << "\n";
  out << "energy_points = " << cfg.experiment.energy_points << "\n";
  out << "energy_min_e0 = " << g17(cfg.experiment.energy_min) << "\n";
  out << "energy_max_e1 = "
      << (cfg.experiment.auto_energy_max ? std::string("auto") : g17(cfg.experiment.energy_max)) << "\n";
  out << "eigen_realizations = " << cfg.experiment.eigen_realizations << "\n";
  out << "eigen_states = " << cfg.experiment.eigen_states << "\n";
  out << "eigen_radius = " << cfg.experiment.eigen_radius << "\n";
  out << "\n[run]\n";
  out << "seed = " << cfg.run.seed << "\n";
  out << "workers = " << cfg.run.workers << "\n";
  out << "out_dir = " << cfg.run.out_dir << "\n";
  out << "audit_log = " << (cfg.run.audit_log ? "true" : "false") << "\n";
  out << "exhaustive_oracles = " << (cfg.run.exhaustive_oracles ? "true" : "false") << "\n";
  return out.str();
}

void validate(const LabConfig& cfg) {
  const auto fail_field = [](const std::string& field, const std::string& what) {
    throw std::invalid_argument(field + ": " + what);
  };

  try {
    validate(cfg.model);  // dimensions, mesh, amplitude law, interaction
  } catch (const std::invalid_argument& e) {
    fail_field("model", e.what());
  }
  if (!(cfg.model.profile.radius > 0)) fail_field("disorder.bump_radius", "bump radius must be positive");
  if (!(cfg.model.profile.scale > 0)) fail_field("disorder.bump_scale", "bump scale must be positive");

  try {
    validate(cfg.msa.params);  // alpha in (1, 2), mass >= 0, budget, A
  } catch (const std::invalid_argument& e) {
    fail_field("msa", e.what());
  }
  const double d = cfg.model.dim_per_particle;
  if (!(cfg.msa.exponent_p > 1.5 * d + 1.0))
    fail_field("msa.exponent_p", "p must exceed 3d/2 + 1");
  if (!(cfg.msa.exponent_q > 3.0 * cfg.msa.exponent_p + 9.0))
    fail_field("msa.exponent_q", "q must exceed 3p + 9");

  if (cfg.schedule.l0 < 2) fail_field("schedule.l0", "initial scale must be at least 2");
  if (cfg.schedule.k_max < 0) fail_field("schedule.k_max", "scale count must be nonnegative");

  const auto& ex = cfg.experiment;
  if (ex.trials < 0) fail_field("experiment.trials", "trial count must be nonnegative");
  if (ex.energy_points < 1) fail_field("experiment.energy_points", "need at least one grid energy");
  if (!ex.auto_energy_max && !(ex.energy_min <= ex.energy_max))
    fail_field("experiment.energy_max_e1", "energy interval is empty");
  if (ex.eigen_realizations < 0) fail_field("experiment.eigen_realizations", "must be nonnegative");
  if (ex.eigen_states < 1) fail_field("experiment.eigen_states", "need at least one state");
  if (ex.eigen_radius < 2) fail_field("experiment.eigen_radius", "radius must be at least 2");

  const bool wants_interactive =
      std::any_of(ex.categories.begin(), ex.categories.end(), [](PairCategory c) {
        return c == PairCategory::Interactive || c == PairCategory::Mixed;
      });
  if (wants_interactive && !(cfg.model.interaction.strength > 0)) {
    fail_field("experiment.categories", "categories II and III require a positive interaction strength");
  }
  if (!ex.categories.empty() && cfg.model.particles != 2) {
    fail_field("experiment.categories", "pair categories require a two-particle model");
  }

  if (cfg.run.workers < 1) fail_field("run.workers", "need at least one worker");
  if (cfg.run.out_dir.empty()) fail_field("run.out_dir", "output directory must not be empty");
}

}  // namespace msalab
