// Command line front end. Every subcommand is a thin wrapper over the library
// so that a staged run (reduce, embed, evolve, readout) and the monolithic
// solve produce identical artifacts.
//
// Exit codes: 0 success, 2 invalid input or configuration, 3 infeasible
// geometry, 4 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "rydsat/fixtures.hpp"
#include "rydsat/io_json.hpp"
#include "rydsat/oracle.hpp"
#include "rydsat/pipeline.hpp"

namespace {

using namespace rydsat;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_file(out_path, content);
}

RunConfig load_config(const std::string& path) {
  if (path.empty()) return RunConfig{};
  std::istringstream in(read_file(path));
  return parse_config(in);
}

DimacsResult load_formula(const std::string& path) {
  std::istringstream in(read_file(path));
  return parse_dimacs(in);
}

MisGraph load_graph_arg(const std::string& input, const std::string& graph_path) {
  if (!input.empty()) return reduce(load_formula(input).formula);
  if (!graph_path.empty()) return graph_from_json(Json::parse(read_file(graph_path)));
  throw ConfigError("need --input or --graph");
}

int cmd_init(const std::string& out, bool force) {
  const std::string path = out.empty() ? "rydsat.conf" : out;
  if (!force && std::filesystem::exists(path))
    throw ConfigError(path + " exists (use --force to overwrite)");
  write_file(path, emit_config(RunConfig{}));
  std::cerr << "wrote " << path << "\n";
  return 0;
}

int cmd_reduce(const std::string& input, const std::string& out) {
  const DimacsResult parsed = load_formula(input);
  for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << "\n";
  const MisGraph g = reduce(parsed.formula);
  emit(out, graph_to_json(g).dump(2) + "\n");
  std::cerr << "graph: " << g.num_vertices() << " vertices, "
            << g.count_edges(EdgeKind::Intra) << " intra + "
            << g.count_edges(EdgeKind::Inter) << " inter edges\n";
  return 0;
}

int cmd_oracle(const std::string& input, const std::string& graph_path, const std::string& out) {
  const MisGraph g = load_graph_arg(input, graph_path);
  const MisResult mis = enumerate_mis(g);
  const bool satisfiable = mis.alpha == g.num_clauses;
  Json j;
  j["alpha"] = mis.alpha;
  j["num_maximum_sets"] = static_cast<int>(mis.maximum_sets.size());
  j["satisfiable"] = satisfiable;
  j["maximum_sets"] = mis.maximum_sets;
  if (satisfiable && !input.empty()) {
    const Formula f = load_formula(input).formula;
    const Assignment a = decode(g, mis.maximum_sets.front(), f.num_variables);
    std::string bits;
    for (int v = 1; v <= f.num_variables; ++v) bits += a.value(v) ? '1' : '0';
    j["witness"] = bits;
  }
  emit(out, j.dump(2) + "\n");
  std::cerr << "alpha = " << mis.alpha << ", " << mis.maximum_sets.size()
            << " maximum independent sets, "
            << (satisfiable ? "satisfiable" : "not satisfiable by clause cover") << "\n";
  return 0;
}

int cmd_embed(const std::string& input, const std::string& graph_path,
              const std::string& config_path, const std::string& out,
              const std::string& csv, bool print_report) {
  const RunConfig cfg = load_config(config_path);
  const MisGraph g = load_graph_arg(input, graph_path);
  EmbedReport report;
  const Embedding e = embed(g, cfg.geometry(), cfg.dimension, cfg.seed, &report);
  emit(out, embedding_to_json(e).dump(2) + "\n");
  if (!csv.empty()) {
    std::ostringstream ss;
    ss << "id,role,clause,slot,wire,wire_pos,x,y,z\n";
    ss.precision(17);
    for (const AtomSite& s : e.sites) {
      ss << s.id << "," << (s.role == SiteRole::Literal ? "literal" : "auxiliary") << ",";
      if (s.role == SiteRole::Literal)
        ss << s.vertex.clause << "," << s.vertex.slot << ",,";
      else
        ss << ",," << s.wire_id << "," << s.wire_pos;
      ss << "," << s.position.x << "," << s.position.y << "," << s.position.z << "\n";
    }
    write_file(csv, ss.str());
  }
  const ResidualStats rs = residual_stats(e, cfg.c6);
  std::cerr << "embedding: " << e.num_sites() << " atoms, " << e.wires.size()
            << " wires, residual mean " << rs.mean << " MHz, max " << rs.max << " MHz\n";
  if (print_report) {
    for (const auto& n : report.wire_notes) std::cerr << "  " << n << "\n";
    std::cerr << "  attempts " << report.attempts << ", restarts " << report.restarts_tried
              << ", selected " << report.restart_selected << "\n";
  }
  return 0;
}

int cmd_hamiltonian(const std::string& input, const std::string& graph_path,
                    const std::string& embedding_path, const std::string& config_path,
                    double omega, double delta, int k, const std::string& out) {
  const RunConfig cfg = load_config(config_path);
  RydbergSystem sys;
  if (!embedding_path.empty()) {
    const Embedding e = embedding_from_json(Json::parse(read_file(embedding_path)));
    sys = RydbergSystem::from_embedding(e, cfg.interaction());
  } else {
    sys = RydbergSystem::from_graph(load_graph_arg(input, graph_path), cfg.interaction());
  }
  const SpectrumResult sp = ground_state(sys, {omega, delta}, k);
  const auto groups = degeneracy_groups(sp.energies);
  Json j;
  j["num_atoms"] = sys.num_atoms();
  j["dim"] = sys.dim();
  j["restricted"] = sys.restricted();
  j["omega"] = omega;
  j["delta"] = delta;
  j["energies"] = sp.energies;
  j["ground_degeneracy"] = static_cast<int>(groups.empty() ? 0 : groups.front().size());
  if (omega == 0.0) {
    Json cfgs = Json::array();
    for (int i : groups.front()) {
      const auto& st = sp.states[static_cast<size_t>(i)];
      for (std::uint64_t idx = 0; idx < st.size(); ++idx)
        if (std::norm(st[idx]) > 0.5)
          cfgs.push_back(to_bitstring(sys.basis_state(idx), sys.num_atoms()));
    }
    j["ground_configs"] = std::move(cfgs);
  }
  emit(out, j.dump(2) + "\n");
  std::cerr << "dim " << sys.dim() << ", E0 = " << sp.energies.front() << " MHz, ground degeneracy "
            << (groups.empty() ? 0 : groups.front().size()) << "\n";
  return 0;
}

int cmd_evolve(const std::string& embedding_path, const std::string& config_path,
               const std::string& out, int gap_points) {
  const RunConfig cfg = load_config(config_path);
  const Embedding e = embedding_from_json(Json::parse(read_file(embedding_path)));
  const RydbergSystem sys = RydbergSystem::from_embedding(e, cfg.interaction());
  const Schedule sched = cfg.schedule();
  EvolveOptions opt;
  opt.dt = cfg.dt;
  Distribution dist;
  if (cfg.noise) {
    const TrajectoryEnsemble ens =
        evolve_open(sys, sched, cfg.noise_rates(), cfg.trajectories, cfg.seed, opt);
    dist = to_distribution(state_probabilities(sys, ens), sys.num_atoms());
  } else {
    const StateVector psi = evolve(sys, sched, opt);
    dist = to_distribution(state_probabilities(sys, psi), sys.num_atoms());
  }
  emit(out, distribution_to_json(dist).dump(2) + "\n");
  if (gap_points > 0) {
    const GapScanResult gs = gap_scan(sys, sched, gap_points);
    std::cerr << "min gap " << gs.min_gap << " MHz at t = " << gs.t_min << " us\n";
  }
  std::cerr << "evolved " << sys.num_atoms() << " atoms for " << sched.total_time() << " us ("
            << (cfg.noise ? "open" : "closed") << " system)\n";
  return 0;
}

int cmd_readout(const std::string& dist_path, const std::string& counts_path,
                const std::string& input, const std::string& graph_path,
                const std::string& embedding_path, const std::string& config_path,
                const std::string& out) {
  const RunConfig cfg = load_config(config_path);
  const MisGraph g = load_graph_arg(input, graph_path);
  ReadoutLayout layout;
  if (!embedding_path.empty()) {
    const Embedding e = embedding_from_json(Json::parse(read_file(embedding_path)));
    layout = ReadoutLayout::from_embedding(e, g);
  } else {
    layout = ReadoutLayout::direct(g);
  }

  Distribution recovered;
  double retention = 1.0;
  Json stages = Json::object();
  if (!counts_path.empty()) {
    const Counts counts = counts_from_json(Json::parse(read_file(counts_path)));
    recovered = cfg.mle_correction ? mle(counts, cfg.confusion()) : empirical(counts);
    stages["shots"] = counts.total;
  } else if (!dist_path.empty()) {
    Distribution model = distribution_from_json(Json::parse(read_file(dist_path)));
    if (cfg.shots > 0) {
      const Counts counts = sample(model, cfg.shots, cfg.confusion(), cfg.seed ^ 0x5eedull);
      recovered = cfg.mle_correction ? mle(counts, cfg.confusion()) : empirical(counts);
      stages["shots"] = counts.total;
    } else {
      recovered = model;
      stages["shots"] = 0;
    }
  } else {
    throw ConfigError("need --distribution or --counts");
  }

  const PostselectDistResult post = postselect_wires(recovered, layout.wire_chains);
  retention = post.retention;
  const Verdict v = solution_mass(post.dist, g, layout, cfg.threshold);

  Json j;
  j["retention"] = retention;
  j["stages"] = stages;
  j["p_solution"] = v.p_solution;
  j["threshold"] = v.threshold;
  j["satisfiable"] = v.satisfiable;
  j["mass"] = {{"solution", v.mass.solution},
               {"independent_non_solution", v.mass.independent_non_solution},
               {"blockade_violating", v.mass.blockade_violating}};
  j["best_solution_config"] = to_bitstring(v.best_solution_config, layout.num_atoms);
  emit(out, j.dump(2) + "\n");
  std::cerr << "p_solution = " << v.p_solution << " -> "
            << (v.satisfiable ? "satisfiable" : "unsatisfiable") << "\n";
  return 0;
}

int cmd_solve(const std::string& input, const std::string& config_path,
              const std::string& outdir) {
  const RunConfig cfg = load_config(config_path);
  const DimacsResult parsed = load_formula(input);
  for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << "\n";
  const SolveArtifacts art = solve(parsed.formula, cfg, parsed.warnings);
  if (!outdir.empty()) {
    write_file(outdir + "/graph.json", graph_to_json(art.graph).dump(2) + "\n");
    write_file(outdir + "/embedding.json", embedding_to_json(art.embedding).dump(2) + "\n");
    write_file(outdir + "/distribution.json", distribution_to_json(art.model_dist).dump(2) + "\n");
    if (cfg.shots > 0)
      write_file(outdir + "/counts.json", counts_to_json(art.samples).dump(2) + "\n");
    write_file(outdir + "/recovered.json", distribution_to_json(art.recovered).dump(2) + "\n");
    write_file(outdir + "/report.json", art.report.dump(2) + "\n");
  }
  std::cout << art.report.dump(2) << "\n";
  return 0;
}

int cmd_scaling(int atoms, int clauses, double p, double target, double repetitions) {
  Json j;
  if (atoms >= 0) j["scaling_estimate"] = scaling_estimate(atoms);
  if (clauses > 0) {
    const AtomBounds b = atom_bounds(clauses);
    j["atom_bounds"] = {{"lower", b.lower}, {"upper", b.upper}};
  }
  if (p >= 0 && repetitions >= 0) j["success_prob"] = success_prob(p, repetitions);
  if (p >= 0 && target >= 0) j["repetitions_for"] = repetitions_for(p, target);
  if (j.empty()) throw ConfigError("scaling: nothing requested");
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3-SAT to Rydberg-atom maximum-independent-set pipeline"};
  app.require_subcommand(1);

  std::string input, graph_path, embedding_path, dist_path, counts_path;
  std::string config_path, out, csv, outdir;
  bool force = false, print_report = false;
  double omega = 0.0, delta = 2.0;
  int k = 8, gap_points = 0;
  int atoms = -1, clauses = -1;
  double p = -1, target = -1, repetitions = -1;

  auto* init = app.add_subcommand("init", "write a default configuration file");
  init->add_option("-o,--out", out, "output path (default rydsat.conf)");
  init->add_flag("--force", force, "overwrite an existing file");

  auto* reduce_cmd = app.add_subcommand("reduce", "compile a DIMACS formula to a graph");
  reduce_cmd->add_option("-i,--input", input, "DIMACS CNF file")->required();
  reduce_cmd->add_option("-o,--out", out, "graph JSON output (default stdout)");

  auto* oracle_cmd = app.add_subcommand("oracle", "exact maximum-independent-set enumeration");
  oracle_cmd->add_option("-i,--input", input, "DIMACS CNF file");
  oracle_cmd->add_option("-g,--graph", graph_path, "graph JSON file");
  oracle_cmd->add_option("-o,--out", out, "result JSON output (default stdout)");

  auto* embed_cmd = app.add_subcommand("embed", "compute an atom arrangement");
  embed_cmd->add_option("-i,--input", input, "DIMACS CNF file");
  embed_cmd->add_option("-g,--graph", graph_path, "graph JSON file");
  embed_cmd->add_option("-c,--config", config_path, "configuration file");
  embed_cmd->add_option("-o,--out", out, "embedding JSON output (default stdout)");
  embed_cmd->add_option("--csv", csv, "write atom positions as CSV");
  embed_cmd->add_flag("--report", print_report, "print placement diagnostics");

  auto* ham_cmd = app.add_subcommand("hamiltonian", "low spectrum at a fixed drive");
  ham_cmd->add_option("-i,--input", input, "DIMACS CNF file");
  ham_cmd->add_option("-g,--graph", graph_path, "graph JSON file");
  ham_cmd->add_option("-e,--embedding", embedding_path, "embedding JSON file");
  ham_cmd->add_option("-c,--config", config_path, "configuration file");
  ham_cmd->add_option("--omega", omega, "Rabi frequency, MHz");
  ham_cmd->add_option("--delta", delta, "detuning, MHz");
  ham_cmd->add_option("-k", k, "number of eigenpairs");
  ham_cmd->add_option("-o,--out", out, "spectrum JSON output (default stdout)");

  auto* evolve_cmd = app.add_subcommand("evolve", "run the drive schedule");
  evolve_cmd->add_option("-e,--embedding", embedding_path, "embedding JSON file")->required();
  evolve_cmd->add_option("-c,--config", config_path, "configuration file");
  evolve_cmd->add_option("-o,--out", out, "distribution JSON output (default stdout)");
  evolve_cmd->add_option("--gap-scan", gap_points, "also scan the instantaneous gap");

  auto* readout_cmd = app.add_subcommand("readout", "sample, correct, postselect, classify");
  readout_cmd->add_option("-d,--distribution", dist_path, "distribution JSON file");
  readout_cmd->add_option("--counts", counts_path, "counts JSON file");
  readout_cmd->add_option("-i,--input", input, "DIMACS CNF file");
  readout_cmd->add_option("-g,--graph", graph_path, "graph JSON file");
  readout_cmd->add_option("-e,--embedding", embedding_path, "embedding JSON file");
  readout_cmd->add_option("-c,--config", config_path, "configuration file");
  readout_cmd->add_option("-o,--out", out, "verdict JSON output (default stdout)");

  auto* solve_cmd = app.add_subcommand("solve", "full pipeline from CNF to verdict");
  solve_cmd->add_option("-i,--input", input, "DIMACS CNF file")->required();
  solve_cmd->add_option("-c,--config", config_path, "configuration file");
  solve_cmd->add_option("--outdir", outdir, "directory for stage artifacts");

  auto* scaling_cmd = app.add_subcommand("scaling", "repetition and size forecasts");
  scaling_cmd->add_option("--atoms", atoms, "atom count for the success trend");
  scaling_cmd->add_option("--clauses", clauses, "clause count for atom bounds");
  scaling_cmd->add_option("--p", p, "single-run solution probability");
  scaling_cmd->add_option("--target", target, "target success probability");
  scaling_cmd->add_option("--repetitions", repetitions, "repetition count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (init->parsed()) return cmd_init(out, force);
    if (reduce_cmd->parsed()) return cmd_reduce(input, out);
    if (oracle_cmd->parsed()) return cmd_oracle(input, graph_path, out);
    if (embed_cmd->parsed())
      return cmd_embed(input, graph_path, config_path, out, csv, print_report);
    if (ham_cmd->parsed())
      return cmd_hamiltonian(input, graph_path, embedding_path, config_path, omega, delta, k, out);
    if (evolve_cmd->parsed()) return cmd_evolve(embedding_path, config_path, out, gap_points);
    if (readout_cmd->parsed())
      return cmd_readout(dist_path, counts_path, input, graph_path, embedding_path, config_path,
                         out);
    if (solve_cmd->parsed()) return cmd_solve(input, config_path, outdir);
    if (scaling_cmd->parsed()) return cmd_scaling(atoms, clauses, p, target, repetitions);
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const rydsat::EmbeddingError& e) {
    std::cerr << "infeasible geometry: " << e.what() << "\n";
    for (const auto& v : e.violations()) std::cerr << "  " << rydsat::to_string(v) << "\n";
    return 3;
  } catch (const rydsat::TransformError& e) {
    std::cerr << "infeasible geometry: " << e.what() << "\n";
    return 3;
  } catch (const rydsat::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const rydsat::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const rydsat::JsonError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  }
}
