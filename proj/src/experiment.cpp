#include "cohwalk/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "cohwalk/band.hpp"
#include "cohwalk/coherent.hpp"
#include "cohwalk/fock.hpp"
#include "cohwalk/walk.hpp"

namespace cohwalk {

using json = nlohmann::json;

namespace {

constexpr double kSweepGapTol = 1e-3;  // min_k sin(eps) below this: skip k-space row

struct Row {
  std::vector<double> values;
};

/// Runs `count` independent jobs on the worker pool; results keep job order.
/// A job returning nullopt is a skipped row; its message goes to stderr.
std::vector<Row> run_jobs(
    int count, int workers,
    const std::function<std::optional<Row>(int, std::string& log)>& job) {
  std::vector<std::optional<Row>> slots(static_cast<std::size_t>(count));
  std::vector<std::string> logs(static_cast<std::size_t>(count));
  if (workers > 0) omp_set_num_threads(workers);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i)
    slots[static_cast<std::size_t>(i)] = job(i, logs[static_cast<std::size_t>(i)]);
  std::vector<Row> rows;
  for (int i = 0; i < count; ++i) {
    if (!logs[static_cast<std::size_t>(i)].empty())
      std::cerr << "cohwalk: " << logs[static_cast<std::size_t>(i)] << "\n";
    if (slots[static_cast<std::size_t>(i)]) rows.push_back(*slots[static_cast<std::size_t>(i)]);
  }
  return rows;
}


bool is_chiral_label(const std::string& label) { return label == "chiral+" || label == "chiral-"; }

int chiral_sign(const std::string& label) { return label == "chiral+" ? 1 : -1; }

std::vector<double> parse_value_list(const json& j, const std::string& key) {
  std::vector<double> out;
  if (j.is_number()) {
    out.push_back(j.get<double>());
  } else if (j.is_array()) {
    for (const auto& v : j) out.push_back(v.get<double>());
  } else if (j.is_object()) {
    const double start = j.at("start").get<double>();
    const double stop = j.at("stop").get<double>();
    const int count = j.at("count").get<int>();
    if (count < 1) throw ConfigError(key + ": sweep count must be >= 1");
    for (int i = 0; i < count; ++i)
      out.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
  } else {
    throw ConfigError(key + ": expected number, list, or {start, stop, count}");
  }
  return out;
}

ResultTable phase_diagram(const ExperimentConfig& cfg) {
  ResultTable table;
  table.columns = {"theta1", "theta2", "winding"};
  const int n = cfg.grid_count;
  const KGrid grid{cfg.k_grid, cfg.k_offset};
  auto rows = run_jobs(n * n, cfg.workers, [&](int i, std::string& log) -> std::optional<Row> {
    const int a = i / n, b = i % n;
    const double t1 = M_PI * a / (n - 1), t2 = M_PI * b / (n - 1);
    if (std::abs(std::abs(std::tan(t1)) - std::abs(std::tan(t2))) < 0.05) {
      log = "skipped near-critical pair theta1=" + std::to_string(t1) +
            " theta2=" + std::to_string(t2);
      return std::nullopt;
    }
    try {
      const int w = winding_number(CoinAngles{t1, t2}, grid);
      return Row{{t1, t2, static_cast<double>(w)}};
    } catch (const GapClosedError&) {
      log = "skipped gap-closed pair theta1=" + std::to_string(t1) +
            " theta2=" + std::to_string(t2);
      return std::nullopt;
    }
  });
  for (auto& r : rows) table.rows.push_back(std::move(r.values));
  return table;
}

ResultTable moments_sweep(const ExperimentConfig& cfg) {
  ResultTable table;
  table.columns = {"theta2", "N", "coin_index", "M1", "M2", "L", "M1_asymptotic"};
  const KGrid grid{cfg.k_grid, cfg.k_offset};
  const int nt = static_cast<int>(cfg.theta2.size());
  const int ns = static_cast<int>(cfg.steps.size());
  const int nc = static_cast<int>(cfg.coins.size());
  auto rows = run_jobs(nt * ns * nc, cfg.workers, [&](int i, std::string& log) -> std::optional<Row> {
    const int it = i / (ns * nc), is = (i / nc) % ns, ic = i % nc;
    const double t2 = cfg.theta2[static_cast<std::size_t>(it)];
    const int steps = cfg.steps[static_cast<std::size_t>(is)];
    const std::string& coin = cfg.coins[static_cast<std::size_t>(ic)];
    const CoinAngles angles{cfg.theta1, t2};
    if (band_gap_minimum(angles) < kSweepGapTol) {
      log = "skipped near-critical theta2=" + std::to_string(t2) + " (k-space quantities undefined)";
      return std::nullopt;
    }
    WalkSpec spec;
    spec.angles = angles;
    spec.steps = steps;
    spec.initial_position = cfg.initial_position;
    spec.initial_spin = resolve_coin(coin, cfg.theta1);
    const PositionDistribution dist = distribution(evolve(spec));
    const double m1 = moment(dist, 1), m2 = moment(dist, 2);
    const double l = ballistic_coefficient(angles, grid);
    const double m1a =
        is_chiral_label(coin) ? m1_asymptotic(steps, angles, chiral_sign(coin), grid) : 0.0;
    return Row{{t2, static_cast<double>(steps), static_cast<double>(ic), m1, m2, l, m1a}};
  });
  for (auto& r : rows) table.rows.push_back(std::move(r.values));
  return table;
}

ResultTable css_sweep(const ExperimentConfig& cfg) {
  ResultTable table;
  table.columns = {"theta2", "alpha", "Nw", "M2", "tildeN", "deltaN", "deltaNw_shifted"};
  const int steps = cfg.steps.front();
  const Spinor coin = resolve_coin(cfg.coins.front(), cfg.theta1);
  const Spinor shifted_coin = resolve_coin("chiral-", cfg.theta1);
  const int nt = static_cast<int>(cfg.theta2.size());
  const int na = static_cast<int>(cfg.alphas.size());
  auto rows = run_jobs(nt * na, cfg.workers, [&](int i, std::string&) -> std::optional<Row> {
    const double t2 = cfg.theta2[static_cast<std::size_t>(i / na)];
    const double alpha = cfg.alphas[static_cast<std::size_t>(i % na)];
    WalkSpec spec;
    spec.angles = {cfg.theta1, t2};
    spec.steps = steps;
    spec.initial_position = cfg.initial_position;
    spec.initial_spin = coin;
    const WalkState state = evolve(spec);
    const double m2 = moment(distribution(state), 2);
    const double nw = photon_number({state, CoherentParams{alpha, 0.0}});
    const TwistPair pair = summed_and_differenced(state, alpha);
    WalkSpec plus = spec, minus = spec;
    plus.initial_spin = minus.initial_spin = shifted_coin;
    plus.initial_position = cfg.shift;
    minus.initial_position = -cfg.shift;
    const double shifted = shifted_pair_delta(plus, minus, alpha, true);
    return Row{{t2, alpha, nw, m2, pair.tilde, pair.delta, shifted}};
  });
  for (auto& r : rows) table.rows.push_back(std::move(r.values));
  return table;
}

ResultTable reconstruct_experiment(const ExperimentConfig& cfg) {
  ResultTable table;
  table.columns = {"x", "P_true", "P_reconstructed", "abs_error"};
  WalkSpec spec;
  spec.angles = {cfg.theta1, cfg.theta2.front()};
  spec.steps = cfg.steps.front();
  spec.initial_position = cfg.initial_position;
  spec.initial_spin = resolve_coin(cfg.coins.front(), cfg.theta1);
  const WalkState state = evolve(spec);
  const PositionDistribution truth = distribution(state);

  // Readout sites share the initial parity; odd sites never populate.
  std::vector<int> sites;
  for (int x = state.min_position; x <= state.max_position(); ++x)
    if ((x - spec.initial_position) % 2 == 0) sites.push_back(x);

  ReadoutSeries series;
  for (double alpha : cfg.alphas) {
    const CoherentWalkState cs{state, CoherentParams{alpha, 0.0}};
    for (int x : sites) series.push_back({alpha, x, projective_probability(cs, x)});
  }
  const ReconstructionResult rec = reconstruct_distribution(series, cfg.degree);
  for (int x : sites) {
    const double t = truth.count(x) ? truth.at(x) : 0.0;
    const double r = rec.dist.count(x) ? rec.dist.at(x) : 0.0;
    table.rows.push_back({static_cast<double>(x), t, r, std::abs(t - r)});
  }
  return table;
}

ResultTable oracle_check(const ExperimentConfig& cfg) {
  ResultTable table;
  table.columns = {"N",       "alpha",          "phi",
                   "theta2",  "coin_index",     "photons_fock",
                   "photons_closed", "photons_absdiff", "prob_absdiff"};
  const int max_steps = *std::max_element(cfg.steps.begin(), cfg.steps.end());
  const int nn = static_cast<int>(cfg.steps.size());
  const int na = static_cast<int>(cfg.alphas.size());
  const int np = static_cast<int>(cfg.phis.size());
  const int nt = static_cast<int>(cfg.theta2.size());
  const int nc = static_cast<int>(cfg.coins.size());
  auto rows = run_jobs(
      nn * na * np * nt * nc, cfg.workers, [&](int i, std::string&) -> std::optional<Row> {
        int rem = i;
        const int ic = rem % nc;
        rem /= nc;
        const int it = rem % nt;
        rem /= nt;
        const int ip = rem % np;
        rem /= np;
        const int ia = rem % na;
        const int in = rem / na;
        WalkSpec spec;
        spec.angles = {cfg.theta1, cfg.theta2[static_cast<std::size_t>(it)]};
        spec.steps = cfg.steps[static_cast<std::size_t>(in)];
        spec.phi = cfg.phis[static_cast<std::size_t>(ip)];
        spec.initial_position = cfg.initial_position;
        spec.initial_spin = resolve_coin(cfg.coins[static_cast<std::size_t>(ic)], cfg.theta1);
        const double alpha = cfg.alphas[static_cast<std::size_t>(ia)];

        // One Fock space per alpha, sized for the largest N in the sweep.
        WalkSpec sizing = spec;
        sizing.steps = max_steps;
        FockSpace space = fock_space_for(sizing, alpha);
        if (cfg.fock_dim > 0) space.dim = cfg.fock_dim;
        const QubitCavityState fock = run_walk_fock(spec, alpha, space);
        const double photons_fock = expected_photons(fock);

        WalkSpec flat = spec;
        flat.phi = 0.0;
        const WalkState untwisted = evolve(flat);
        const double photons_closed = photon_number_twisted(untwisted, alpha, spec.phi);

        const WalkState twisted = evolve(spec);
        const CoherentWalkState cs{twisted, CoherentParams{alpha, spec.phi}};
        const double norm = fock.norm_sq();
        double prob_diff = 0.0;
        for (int x = twisted.min_position; x <= twisted.max_position(); ++x) {
          const Eigen::VectorXcd site = coherent_vector(cd{x * alpha, 0.0}, space);
          const double p_fock =
              (std::norm(site.dot(fock.amps.segment(0, space.dim))) +
               std::norm(site.dot(fock.amps.segment(space.dim, space.dim)))) /
              norm;
          prob_diff = std::max(prob_diff, std::abs(p_fock - projective_probability(cs, x)));
        }
        return Row{{static_cast<double>(spec.steps), alpha, spec.phi, spec.angles.theta2,
                    static_cast<double>(ic), photons_fock, photons_closed,
                    std::abs(photons_fock - photons_closed), prob_diff}};
      });
  for (auto& r : rows) table.rows.push_back(std::move(r.values));
  return table;
}

ResultTable compile_check(const ExperimentConfig& cfg) {
  ResultTable table;
  table.columns = {"alpha", "echo", "min_fidelity", "echo_vs_plain_absdiff"};
  const int lo = cfg.sites.front(), hi = cfg.sites.back();
  const int na = static_cast<int>(cfg.alphas.size());
  auto rows = run_jobs(na, cfg.workers, [&](int i, std::string&) -> std::optional<Row> {
    const double alpha = cfg.alphas[static_cast<std::size_t>(i)];
    const double reach = (std::max(std::abs(lo), std::abs(hi)) + 1) * alpha;
    const double mu = reach * reach;
    FockSpace space{static_cast<int>(std::ceil(mu + 10.0 * std::sqrt(mu) + 20.0))};
    if (cfg.fock_dim > 0) space.dim = cfg.fock_dim;
    const GateSequence plain = compile_translation(alpha, false);
    const GateSequence echo = compile_translation(alpha, true);
    const double op_diff =
        (sequence_matrix(plain, space) - sequence_matrix(echo, space)).cwiseAbs().maxCoeff();
    Row a{{alpha, 0.0, sequence_fidelity(plain, alpha, lo, hi, space), op_diff}};
    Row b{{alpha, 1.0, sequence_fidelity(echo, alpha, lo, hi, space), op_diff}};
    a.values.insert(a.values.end(), b.values.begin(), b.values.end());
    return a;  // unpacked into two rows below
  });
  for (auto& r : rows) {
    table.rows.push_back({r.values[0], r.values[1], r.values[2], r.values[3]});
    table.rows.push_back({r.values[4], r.values[5], r.values[6], r.values[7]});
  }
  return table;
}

}  // namespace

ExperimentKind experiment_from_name(const std::string& name) {
  if (name == "phase-diagram") return ExperimentKind::PhaseDiagram;
  if (name == "moments-sweep") return ExperimentKind::MomentsSweep;
  if (name == "css-sweep") return ExperimentKind::CssSweep;
  if (name == "reconstruct") return ExperimentKind::Reconstruct;
  if (name == "oracle-check") return ExperimentKind::OracleCheck;
  if (name == "compile-check") return ExperimentKind::CompileCheck;
  throw ConfigError("unknown experiment: " + name);
}

std::string experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::PhaseDiagram: return "phase-diagram";
    case ExperimentKind::MomentsSweep: return "moments-sweep";
    case ExperimentKind::CssSweep: return "css-sweep";
    case ExperimentKind::Reconstruct: return "reconstruct";
    case ExperimentKind::OracleCheck: return "oracle-check";
    case ExperimentKind::CompileCheck: return "compile-check";
  }
  return "unknown";
}

Spinor resolve_coin(const std::string& label, double theta1) {
  if (label == "up") return Spinor{cd{1.0, 0.0}, cd{0.0, 0.0}};
  if (label == "down") return Spinor{cd{0.0, 0.0}, cd{1.0, 0.0}};
  if (is_chiral_label(label)) return chiral_spinor(theta1, chiral_sign(label));
  // explicit "re_up,im_up,re_down,im_down"
  std::istringstream in(label);
  std::vector<double> v;
  std::string tok;
  while (std::getline(in, tok, ',')) v.push_back(std::stod(tok));
  if (v.size() != 4) throw ConfigError("coin: expected up/down/chiral+/chiral- or 4 numbers");
  Spinor s{cd{v[0], v[1]}, cd{v[2], v[3]}};
  const double n = std::sqrt(s.norm_sq());
  if (n <= 0.0) throw ConfigError("coin: zero spinor");
  s.up /= n;
  s.down /= n;
  return s;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "experiment") cfg.experiment = experiment_from_name(value.get<std::string>());
      else if (key == "theta1") cfg.theta1 = value.get<double>();
      else if (key == "theta2") cfg.theta2 = parse_value_list(value, key);
      else if (key == "grid_count") cfg.grid_count = value.get<int>();
      else if (key == "steps") {
        cfg.steps.clear();
        if (value.is_number()) cfg.steps.push_back(value.get<int>());
        else for (const auto& v : value) cfg.steps.push_back(v.get<int>());
      } else if (key == "alphas") cfg.alphas = parse_value_list(value, key);
      else if (key == "phis") cfg.phis = parse_value_list(value, key);
      else if (key == "coins") {
        cfg.coins.clear();
        if (value.is_string()) cfg.coins.push_back(value.get<std::string>());
        else for (const auto& v : value) cfg.coins.push_back(v.get<std::string>());
      } else if (key == "initial_position") cfg.initial_position = value.get<int>();
      else if (key == "shift") cfg.shift = value.get<int>();
      else if (key == "degree") cfg.degree = value.get<int>();
      else if (key == "k_grid") cfg.k_grid = value.get<int>();
      else if (key == "k_offset") cfg.k_offset = value.get<bool>();
      else if (key == "fock_dim") cfg.fock_dim = value.get<int>();
      else if (key == "workers") cfg.workers = value.get<int>();
      else if (key == "sites") {
        cfg.sites.clear();
        for (const auto& v : value) cfg.sites.push_back(v.get<int>());
      } else throw ConfigError("unknown config key: " + key);
    } catch (const json::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
  return cfg;
}

void apply_overrides(ExperimentConfig& config, const ConfigOverrides& overrides) {
  if (overrides.experiment) config.experiment = experiment_from_name(*overrides.experiment);
  if (overrides.workers) config.workers = *overrides.workers;
  if (overrides.k_grid) config.k_grid = *overrides.k_grid;
  if (overrides.fock_dim) config.fock_dim = *overrides.fock_dim;
}

std::vector<std::string> validate(const ExperimentConfig& cfg) {
  std::vector<std::string> diags;
  auto angle_ok = [](double t) { return std::isfinite(t) && t >= 0.0 && t <= M_PI; };
  if (!angle_ok(cfg.theta1)) diags.push_back("theta1 must lie in [0, pi]");
  if (cfg.theta2.empty()) diags.push_back("theta2 sweep must be non-empty");
  for (double t : cfg.theta2)
    if (!angle_ok(t)) {
      diags.push_back("theta2 value out of range [0, pi]");
      break;
    }
  const bool runs_walk = cfg.experiment != ExperimentKind::PhaseDiagram &&
                         cfg.experiment != ExperimentKind::CompileCheck;
  if (runs_walk) {
    if (cfg.steps.empty()) diags.push_back("steps must be non-empty");
    for (int n : cfg.steps)
      if (n < 1) {
        diags.push_back("steps must be >= 1");
        break;
      }
  }
  if (cfg.alphas.empty()) diags.push_back("alphas must be non-empty");
  for (double a : cfg.alphas)
    if (!(a > 0.0) || !std::isfinite(a)) {
      diags.push_back("alphas must be positive reals");
      break;
    }
  for (double p : cfg.phis)
    if (!std::isfinite(p)) {
      diags.push_back("phis must be finite");
      break;
    }
  if (cfg.coins.empty()) diags.push_back("coins must be non-empty");
  for (const auto& c : cfg.coins) {
    try {
      resolve_coin(c, cfg.theta1);
    } catch (const ConfigError& e) {
      diags.push_back(e.what());
    }
  }
  if (cfg.grid_count < 2) diags.push_back("grid_count must be >= 2");
  if (cfg.k_grid < 64 || cfg.k_grid % 2 != 0) diags.push_back("k_grid must be an even integer >= 64");
  if (cfg.degree < 2) diags.push_back("degree must be >= 2");
  if (cfg.experiment == ExperimentKind::Reconstruct &&
      static_cast<int>(cfg.alphas.size()) < cfg.degree + 1)
    diags.push_back("reconstruct needs at least degree+1 alphas");
  if (cfg.experiment == ExperimentKind::CssSweep && cfg.shift == 0)
    diags.push_back("shift must be nonzero for the shifted-pair column");
  if (cfg.sites.size() != 2 || cfg.sites.front() > cfg.sites.back())
    diags.push_back("sites must be [lo, hi] with lo <= hi");
  if (cfg.fock_dim < 0) diags.push_back("fock_dim must be >= 0 (0 = auto)");
  if (cfg.workers < 0) diags.push_back("workers must be >= 0 (0 = default)");
  return diags;
}

ResultTable run(const ExperimentConfig& config) {
  const auto diags = validate(config);
  if (!diags.empty()) {
    std::string msg = "invalid config:";
    for (const auto& d : diags) msg += "\n  " + d;
    throw ConfigError(msg);
  }
  switch (config.experiment) {
    case ExperimentKind::PhaseDiagram: return phase_diagram(config);
    case ExperimentKind::MomentsSweep: return moments_sweep(config);
    case ExperimentKind::CssSweep: return css_sweep(config);
    case ExperimentKind::Reconstruct: return reconstruct_experiment(config);
    case ExperimentKind::OracleCheck: return oracle_check(config);
    case ExperimentKind::CompileCheck: return compile_check(config);
  }
  throw ConfigError("unhandled experiment kind");
}

namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json config_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = experiment_name(c.experiment);
  j["theta1"] = c.theta1;
  j["theta2"] = c.theta2;
  j["grid_count"] = c.grid_count;
  j["steps"] = c.steps;
  j["alphas"] = c.alphas;
  j["phis"] = c.phis;
  j["coins"] = c.coins;
  j["initial_position"] = c.initial_position;
  j["shift"] = c.shift;
  j["degree"] = c.degree;
  j["k_grid"] = c.k_grid;
  j["k_offset"] = c.k_offset;
  j["fock_dim"] = c.fock_dim;
  j["workers"] = c.workers;
  j["sites"] = c.sites;
  return j;
}

}  // namespace

void write_csv(const ResultTable& table, const ExperimentConfig& config, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: no platform newline surprises
  if (!out) throw ConfigError("cannot open output file: " + path);
  const json j = config_json(config);
  out << "# cohwalk result table\n";
  for (const auto& [key, value] : j.items()) out << "# " << key << " = " << value.dump() << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << table.columns[i] << (i + 1 < table.columns.size() ? "," : "\n");
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (!std::isfinite(row[i])) throw std::runtime_error("write_csv: non-finite value in row");
      out << format_value(row[i]) << (i + 1 < row.size() ? "," : "\n");
    }
  }
}

}  // namespace cohwalk
