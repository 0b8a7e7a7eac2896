#pragma once

// End-to-end pipeline: formula -> graph -> embedding -> evolution -> readout
// -> verdict, driven by a flat key=value configuration. The same stage
// functions back both the monolithic solve and the per-stage CLI commands, so
// splitting a run into stages reproduces the monolithic artifacts exactly.

#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rydsat/embedding.hpp"
#include "rydsat/evolution.hpp"
#include "rydsat/formula.hpp"
#include "rydsat/hamiltonian.hpp"
#include "rydsat/io_json.hpp"
#include "rydsat/oracle.hpp"
#include "rydsat/readout.hpp"
#include "rydsat/reduction.hpp"

namespace rydsat {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct RunConfig {
  std::uint64_t seed = 1;
  int dimension = 2;

  // geometry
  double edge_length = 7.0;
  double blockade_radius = 10.0;
  double edge_tolerance = 0.05;
  double min_separation = 4.0;

  // interaction model: ideal | graphu | vdw
  std::string model = "vdw";
  double u = 8.5;
  double c6 = 1.0e6;

  // drive schedule
  double omega_max = 1.0;
  double delta_final = 2.0;
  double total_time = 4.0;
  double dt = 1e-3;

  // open system
  bool noise = false;
  double gamma_decay = 0.03;
  double gamma_dephase = 0.03;
  int trajectories = 200;

  // readout
  std::uint64_t shots = 0;  // 0: use the exact model distribution
  double p10 = 0.039;
  double p01 = 0.079;
  bool mle_correction = true;
  double threshold = 0.5;

  GeometryParams geometry() const {
    return {edge_length, blockade_radius, edge_tolerance, min_separation};
  }

  InteractionModel interaction() const {
    if (model == "ideal") return InteractionModel::ideal();
    if (model == "graphu") return InteractionModel::graph_u(u);
    if (model == "vdw") return InteractionModel::vdw(c6);
    throw ConfigError("unknown model '" + model + "' (expected ideal, graphu, or vdw)");
  }

  Schedule schedule() const { return default_schedule(omega_max, delta_final, total_time); }

  NoiseRates noise_rates() const { return {gamma_decay, gamma_dephase}; }

  ConfusionModel confusion() const {
    ConfusionModel c;
    c.p10 = p10;
    c.p01 = p01;
    return c;
  }
};

namespace detail {

inline bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ConfigError("config: bad boolean for " + key + ": '" + v + "'");
}

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace detail

inline RunConfig parse_config(std::istream& in) {
  RunConfig c;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    try {
      if (key == "seed") c.seed = std::stoull(val);
      else if (key == "dimension") c.dimension = std::stoi(val);
      else if (key == "edge_length") c.edge_length = std::stod(val);
      else if (key == "blockade_radius") c.blockade_radius = std::stod(val);
      else if (key == "edge_tolerance") c.edge_tolerance = std::stod(val);
      else if (key == "min_separation") c.min_separation = std::stod(val);
      else if (key == "model") c.model = val;
      else if (key == "u") c.u = std::stod(val);
      else if (key == "c6") c.c6 = std::stod(val);
      else if (key == "omega_max") c.omega_max = std::stod(val);
      else if (key == "delta_final") c.delta_final = std::stod(val);
      else if (key == "total_time") c.total_time = std::stod(val);
      else if (key == "dt") c.dt = std::stod(val);
      else if (key == "noise") c.noise = detail::parse_bool(val, key);
      else if (key == "gamma_decay") c.gamma_decay = std::stod(val);
      else if (key == "gamma_dephase") c.gamma_dephase = std::stod(val);
      else if (key == "trajectories") c.trajectories = std::stoi(val);
      else if (key == "shots") c.shots = std::stoull(val);
      else if (key == "p10") c.p10 = std::stod(val);
      else if (key == "p01") c.p01 = std::stod(val);
      else if (key == "mle") c.mle_correction = detail::parse_bool(val, key);
      else if (key == "threshold") c.threshold = std::stod(val);
      else throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw ConfigError("config line " + std::to_string(line_no) + ": bad value for " + key);
    } catch (const std::out_of_range&) {
      throw ConfigError("config line " + std::to_string(line_no) + ": value out of range for " + key);
    }
    c.interaction();  // validates the model name as soon as it is set
  }
  return c;
}

inline RunConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline std::string emit_config(const RunConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "# pipeline configuration (flat key = value)\n";
  out << "seed = " << c.seed << "\n";
  out << "dimension = " << c.dimension << "\n";
  out << "\n# geometry, um\n";
  out << "edge_length = " << c.edge_length << "\n";
  out << "blockade_radius = " << c.blockade_radius << "\n";
  out << "edge_tolerance = " << c.edge_tolerance << "\n";
  out << "min_separation = " << c.min_separation << "\n";
  out << "\n# interaction model: ideal | graphu | vdw (couplings in MHz)\n";
  out << "model = " << c.model << "\n";
  out << "u = " << c.u << "\n";
  out << "c6 = " << c.c6 << "\n";
  out << "\n# drive schedule (MHz, us)\n";
  out << "omega_max = " << c.omega_max << "\n";
  out << "delta_final = " << c.delta_final << "\n";
  out << "total_time = " << c.total_time << "\n";
  out << "dt = " << c.dt << "\n";
  out << "\n# open system (rates in MHz)\n";
  out << "noise = " << (c.noise ? "on" : "off") << "\n";
  out << "gamma_decay = " << c.gamma_decay << "\n";
  out << "gamma_dephase = " << c.gamma_dephase << "\n";
  out << "trajectories = " << c.trajectories << "\n";
  out << "\n# readout (shots = 0 uses the exact model distribution)\n";
  out << "shots = " << c.shots << "\n";
  out << "p10 = " << c.p10 << "\n";
  out << "p01 = " << c.p01 << "\n";
  out << "mle = " << (c.mle_correction ? "on" : "off") << "\n";
  out << "threshold = " << c.threshold << "\n";
  return out.str();
}

struct SolveArtifacts {
  Formula formula;
  std::vector<std::string> warnings;
  MisGraph graph;
  Embedding embedding;
  EmbedReport embed_report;
  Distribution model_dist;      // configuration probabilities from the dynamics
  Counts samples;               // shots > 0 only
  Distribution recovered;       // after optional sampling + correction
  Distribution postselected;    // after wire postselection
  double retention = 1.0;
  Verdict verdict;
  Json report;
};

namespace detail {

inline Json verdict_to_json(const Verdict& v, int num_atoms) {
  Json j;
  j["p_solution"] = v.p_solution;
  j["threshold"] = v.threshold;
  j["satisfiable"] = v.satisfiable;
  j["mass"] = {{"solution", v.mass.solution},
               {"independent_non_solution", v.mass.independent_non_solution},
               {"blockade_violating", v.mass.blockade_violating}};
  j["best_solution_config"] = to_bitstring(v.best_solution_config, num_atoms);
  j["best_solution_weight"] = v.best_solution_weight;
  return j;
}

}  // namespace detail

// The full run. Every stage is deterministic given (formula, config), so the
// assembled report is byte-identical across repeats.
inline SolveArtifacts solve(const Formula& f, const RunConfig& cfg,
                            const std::vector<std::string>& parse_warnings = {}) {
  SolveArtifacts art;
  art.formula = f;
  art.warnings = parse_warnings;
  art.graph = reduce(f);
  art.embedding = embed(art.graph, cfg.geometry(), cfg.dimension, cfg.seed, &art.embed_report);

  const RydbergSystem sys = RydbergSystem::from_embedding(art.embedding, cfg.interaction());
  const Schedule sched = cfg.schedule();
  EvolveOptions opt;
  opt.dt = cfg.dt;

  if (cfg.noise) {
    const TrajectoryEnsemble ens =
        evolve_open(sys, sched, cfg.noise_rates(), cfg.trajectories, cfg.seed, opt);
    art.model_dist = to_distribution(state_probabilities(sys, ens), sys.num_atoms());
  } else {
    const StateVector psi = evolve(sys, sched, opt);
    art.model_dist = to_distribution(state_probabilities(sys, psi), sys.num_atoms());
  }

  const ReadoutLayout layout = ReadoutLayout::from_embedding(art.embedding, art.graph);

  if (cfg.shots > 0) {
    art.samples = sample(art.model_dist, cfg.shots, cfg.confusion(), cfg.seed ^ 0x5eedull);
    art.recovered = cfg.mle_correction ? mle(art.samples, cfg.confusion()) : empirical(art.samples);
  } else {
    art.recovered = art.model_dist;
  }

  const PostselectDistResult post = postselect_wires(art.recovered, layout.wire_chains);
  art.postselected = post.dist;
  art.retention = post.retention;
  art.verdict = solution_mass(art.postselected, art.graph, layout, cfg.threshold);

  const ResidualStats residual = residual_stats(art.embedding, cfg.c6);
  Json rep;
  rep["formula"] = {{"variables", f.num_variables},
                    {"clauses", static_cast<int>(f.clauses.size())},
                    {"warnings", art.warnings}};
  rep["graph"] = {{"vertices", art.graph.num_vertices()},
                  {"intra_edges", static_cast<int>(art.graph.count_edges(EdgeKind::Intra))},
                  {"inter_edges", static_cast<int>(art.graph.count_edges(EdgeKind::Inter))}};
  rep["embedding"] = {{"atoms", art.embedding.num_sites()},
                      {"wires", static_cast<int>(art.embedding.wires.size())},
                      {"dimension", art.embedding.dimension},
                      {"residual_mean", residual.mean},
                      {"residual_max", residual.max}};
  rep["simulation"] = {{"model", cfg.model},
                       {"noise", cfg.noise},
                       {"total_time", cfg.total_time},
                       {"dt", cfg.dt},
                       {"seed", cfg.seed}};
  rep["readout"] = {{"shots", cfg.shots},
                    {"mle", cfg.shots > 0 && cfg.mle_correction},
                    {"retention", art.retention}};
  rep["verdict"] = detail::verdict_to_json(art.verdict, sys.num_atoms());
  if (art.verdict.p_solution > 0 && art.verdict.p_solution < 1) {
    rep["forecast"] = {
        {"repetitions_for_99", repetitions_for(art.verdict.p_solution, 0.99)},
        {"scaling_estimate", scaling_estimate(art.embedding.num_sites())}};
  }
  art.report = std::move(rep);
  return art;
}

}  // namespace rydsat
