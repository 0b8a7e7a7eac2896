#pragma once

// Measurement layer: sampling through a per-atom confusion model, maximum
// likelihood recovery of the underlying configuration distribution, wire
// postselection, configuration classification, and repetition forecasts.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "rydsat/common.hpp"
#include "rydsat/embedding.hpp"
#include "rydsat/reduction.hpp"

namespace rydsat {

// State-preparation-and-measurement errors, per atom:
//   p10 = P(read 1 | actual 0), p01 = P(read 0 | actual 1).
struct ConfusionModel {
  double p10 = 0.039;
  double p01 = 0.079;
  std::vector<std::pair<double, double>> per_atom;  // optional (p10, p01) overrides

  double read1_given0(int atom) const {
    return per_atom.empty() ? p10 : per_atom.at(static_cast<size_t>(atom)).first;
  }
  double read0_given1(int atom) const {
    return per_atom.empty() ? p01 : per_atom.at(static_cast<size_t>(atom)).second;
  }
  bool uniform() const { return per_atom.empty(); }

  static ConfusionModel identity() { return {0.0, 0.0, {}}; }

  void validate(int num_atoms) const {
    if (!per_atom.empty() && static_cast<int>(per_atom.size()) != num_atoms)
      throw std::invalid_argument("ConfusionModel: per-atom override count mismatch");
    for (int a = 0; a < num_atoms; ++a) {
      const double x = read1_given0(a), y = read0_given1(a);
      if (x < 0 || x > 1 || y < 0 || y > 1)
        throw std::invalid_argument("ConfusionModel: rates outside [0,1]");
    }
  }
};

struct Counts {
  int num_atoms = 0;
  std::uint64_t total = 0;
  std::map<BasisIndex, std::uint64_t> by_config;
};

struct Distribution {
  int num_atoms = 0;
  std::map<BasisIndex, double> p;

  void normalize() {
    double sum = 0.0;
    for (const auto& [k, v] : p) sum += v;
    if (sum <= 0) throw std::logic_error("Distribution::normalize: zero mass");
    for (auto& [k, v] : p) v /= sum;
  }
};

inline Distribution to_distribution(const std::map<BasisIndex, double>& probs, int num_atoms) {
  Distribution d;
  d.num_atoms = num_atoms;
  d.p = probs;
  return d;
}

inline Distribution empirical(const Counts& c) {
  Distribution d;
  d.num_atoms = c.num_atoms;
  if (c.total == 0) return d;
  for (const auto& [k, v] : c.by_config)
    d.p[k] = static_cast<double>(v) / static_cast<double>(c.total);
  return d;
}

// Draw shots from the distribution, then flip each atom's readout bit with
// its confusion rate.
inline Counts sample(const Distribution& dist, std::uint64_t shots, const ConfusionModel& conf,
                     std::uint64_t seed) {
  conf.validate(dist.num_atoms);
  Counts out;
  out.num_atoms = dist.num_atoms;
  if (dist.p.empty()) throw std::invalid_argument("sample: empty distribution");

  std::vector<BasisIndex> configs;
  std::vector<double> cdf;
  double acc = 0.0;
  for (const auto& [k, v] : dist.p) {
    if (v < 0) throw std::invalid_argument("sample: negative probability");
    configs.push_back(k);
    acc += v;
    cdf.push_back(acc);
  }
  if (acc <= 0) throw std::invalid_argument("sample: zero-mass distribution");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, acc);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = unif(rng);
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    BasisIndex cfg = configs[static_cast<size_t>(it - cdf.begin())];
    BasisIndex read = cfg;
    for (int a = 0; a < dist.num_atoms; ++a) {
      const bool on = bit_of(cfg, a);
      const double flip = on ? conf.read0_given1(a) : conf.read1_given0(a);
      if (flip > 0 && coin(rng) < flip) read ^= 1ull << a;
    }
    ++out.by_config[read];
    ++out.total;
  }
  return out;
}

struct MleReport {
  int iterations = 0;
  bool converged = false;
  std::vector<double> loglik_trace;  // non-decreasing
};

namespace detail {

// P(read y | actual x) for uniform rates, via the four bit-overlap counts.
struct UniformConfusionTables {
  std::vector<double> t10, t00, t01, t11;
  int n = 0;

  UniformConfusionTables(int num_atoms, double p10, double p01) : n(num_atoms) {
    t10.resize(static_cast<size_t>(n) + 1);
    t00.resize(static_cast<size_t>(n) + 1);
    t01.resize(static_cast<size_t>(n) + 1);
    t11.resize(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
      t10[static_cast<size_t>(k)] = std::pow(p10, k);
      t00[static_cast<size_t>(k)] = std::pow(1.0 - p10, k);
      t01[static_cast<size_t>(k)] = std::pow(p01, k);
      t11[static_cast<size_t>(k)] = std::pow(1.0 - p01, k);
    }
  }

  double prob(BasisIndex y, BasisIndex x) const {
    const BasisIndex mask = (n >= 64) ? ~0ull : ((1ull << n) - 1);
    const int fp = popcount64(~x & y & mask);
    const int fn = popcount64(x & ~y & mask);
    const int tp = popcount64(x & y);
    const int tn = n - fp - fn - tp;
    return t10[static_cast<size_t>(fp)] * t00[static_cast<size_t>(tn)] *
           t01[static_cast<size_t>(fn)] * t11[static_cast<size_t>(tp)];
  }
};

inline double confusion_prob(BasisIndex y, BasisIndex x, int n, const ConfusionModel& c) {
  double p = 1.0;
  for (int a = 0; a < n; ++a) {
    const bool xa = bit_of(x, a), ya = bit_of(y, a);
    const double p10 = c.read1_given0(a), p01 = c.read0_given1(a);
    p *= xa ? (ya ? 1.0 - p01 : p01) : (ya ? p10 : 1.0 - p10);
  }
  return p;
}

}  // namespace detail

// Expectation-maximization deconvolution of the confusion model. The support
// is the full configuration space up to 12 atoms; beyond that it is the set
// of observed configurations and their Hamming-1 neighbours.
inline Distribution mle(const Counts& counts, const ConfusionModel& conf,
                        MleReport* report = nullptr, int max_iterations = 1000,
                        double tol = 1e-8) {
  conf.validate(counts.num_atoms);
  if (counts.total == 0) throw std::invalid_argument("mle: no shots");
  const int n = counts.num_atoms;
  if (n < 1 || n > 24) throw std::invalid_argument("mle: atom count out of range");

  std::vector<BasisIndex> support;
  if (n <= 12) {
    support.resize(1ull << n);
    for (std::uint64_t s = 0; s < support.size(); ++s) support[s] = s;
  } else {
    std::map<BasisIndex, bool> seen;
    for (const auto& [y, c] : counts.by_config) {
      seen[y] = true;
      for (int a = 0; a < n; ++a) seen[y ^ (1ull << a)] = true;
    }
    for (const auto& [k, v] : seen) support.push_back(k);
  }

  std::vector<BasisIndex> observed;
  std::vector<double> freq;
  for (const auto& [y, c] : counts.by_config) {
    observed.push_back(y);
    freq.push_back(static_cast<double>(c) / static_cast<double>(counts.total));
  }

  const bool fast = conf.uniform();
  detail::UniformConfusionTables tables(n, conf.p10, conf.p01);
  auto cprob = [&](BasisIndex y, BasisIndex x) {
    return fast ? tables.prob(y, x) : detail::confusion_prob(y, x, n, conf);
  };

  std::vector<double> p(support.size(), 1.0 / static_cast<double>(support.size()));
  std::vector<double> q(observed.size());
  MleReport local;
  MleReport& rep = report ? *report : local;

  for (int it = 0; it < max_iterations; ++it) {
    for (size_t yi = 0; yi < observed.size(); ++yi) {
      double acc = 0.0;
      for (size_t xi = 0; xi < support.size(); ++xi)
        acc += cprob(observed[yi], support[xi]) * p[xi];
      q[yi] = acc;
    }
    double loglik = 0.0;
    for (size_t yi = 0; yi < observed.size(); ++yi)
      loglik += freq[yi] * std::log(std::max(q[yi], 1e-300));
    rep.loglik_trace.push_back(loglik);

    std::vector<double> next(support.size());
    double tv = 0.0;
    for (size_t xi = 0; xi < support.size(); ++xi) {
      double gain = 0.0;
      for (size_t yi = 0; yi < observed.size(); ++yi)
        if (q[yi] > 0) gain += freq[yi] * cprob(observed[yi], support[xi]) / q[yi];
      next[xi] = p[xi] * gain;
      tv += std::abs(next[xi] - p[xi]);
    }
    double sum = 0.0;
    for (double v : next) sum += v;
    for (double& v : next) v /= sum;
    p = std::move(next);
    rep.iterations = it + 1;
    if (0.5 * tv < tol) {
      rep.converged = true;
      break;
    }
  }

  Distribution out;
  out.num_atoms = n;
  for (size_t xi = 0; xi < support.size(); ++xi)
    if (p[xi] > 1e-15) out.p[support[xi]] = p[xi];
  out.normalize();
  return out;
}

// A wire chain reads out cleanly when its occupation alternates along the
// chain (for length 2: exactly 01 or 10).
inline bool wire_alternates(BasisIndex config, const std::vector<int>& chain) {
  for (size_t i = 0; i + 1 < chain.size(); ++i)
    if (bit_of(config, chain[i]) == bit_of(config, chain[i + 1])) return false;
  return !chain.empty();
}

struct PostselectResult {
  Counts counts;
  double retention = 1.0;
};

inline PostselectResult postselect_wires(const Counts& in,
                                         const std::vector<std::vector<int>>& chains) {
  PostselectResult res;
  res.counts.num_atoms = in.num_atoms;
  for (const auto& [cfg, c] : in.by_config) {
    bool keep = true;
    for (const auto& chain : chains)
      if (!wire_alternates(cfg, chain)) {
        keep = false;
        break;
      }
    if (keep) {
      res.counts.by_config[cfg] += c;
      res.counts.total += c;
    }
  }
  res.retention = in.total == 0
                      ? 1.0
                      : static_cast<double>(res.counts.total) / static_cast<double>(in.total);
  return res;
}

struct PostselectDistResult {
  Distribution dist;
  double retention = 1.0;
};

inline PostselectDistResult postselect_wires(const Distribution& in,
                                             const std::vector<std::vector<int>>& chains) {
  PostselectDistResult res;
  res.dist.num_atoms = in.num_atoms;
  double kept = 0.0, total = 0.0;
  for (const auto& [cfg, w] : in.p) {
    total += w;
    bool keep = true;
    for (const auto& chain : chains)
      if (!wire_alternates(cfg, chain)) {
        keep = false;
        break;
      }
    if (keep) {
      res.dist.p[cfg] = w;
      kept += w;
    }
  }
  res.retention = total > 0 ? kept / total : 1.0;
  if (kept > 0) res.dist.normalize();
  return res;
}

// Mapping from graph vertices and wires to atom indices.
struct ReadoutLayout {
  int num_atoms = 0;
  std::vector<int> vertex_atoms;            // graph vertex index -> atom
  std::vector<std::vector<int>> wire_chains;

  static ReadoutLayout direct(const MisGraph& g) {
    ReadoutLayout l;
    l.num_atoms = g.num_vertices();
    l.vertex_atoms.resize(static_cast<size_t>(g.num_vertices()));
    for (int v = 0; v < g.num_vertices(); ++v) l.vertex_atoms[static_cast<size_t>(v)] = v;
    return l;
  }

  static ReadoutLayout from_embedding(const Embedding& e, const MisGraph& g) {
    ReadoutLayout l;
    l.num_atoms = e.num_sites();
    l.vertex_atoms.resize(static_cast<size_t>(g.num_vertices()));
    for (int v = 0; v < g.num_vertices(); ++v)
      l.vertex_atoms[static_cast<size_t>(v)] = e.site_for_vertex(g.vertices[static_cast<size_t>(v)]);
    for (const Wire& w : e.wires) l.wire_chains.push_back(w.chain);
    return l;
  }
};

enum class ConfigClass { Solution, IndependentNonSolution, BlockadeViolating };

// Wire atoms are ignored; the literal sub-configuration is judged against the
// logical graph.
inline ConfigClass classify(BasisIndex config, const MisGraph& g, const ReadoutLayout& layout) {
  std::vector<int> chosen;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (bit_of(config, layout.vertex_atoms[static_cast<size_t>(v)])) chosen.push_back(v);
  if (!is_independent(g, chosen)) return ConfigClass::BlockadeViolating;
  std::vector<int> per_clause(static_cast<size_t>(g.num_clauses), 0);
  for (int v : chosen) ++per_clause[static_cast<size_t>(g.vertices[static_cast<size_t>(v)].clause)];
  for (int c : per_clause)
    if (c != 1) return ConfigClass::IndependentNonSolution;
  return ConfigClass::Solution;
}

struct ClassMass {
  double solution = 0.0;
  double independent_non_solution = 0.0;
  double blockade_violating = 0.0;
};

struct Verdict {
  double p_solution = 0.0;
  double threshold = 0.5;
  bool satisfiable = false;
  ClassMass mass;
  BasisIndex best_solution_config = 0;
  double best_solution_weight = 0.0;
};

inline Verdict solution_mass(const Distribution& dist, const MisGraph& g,
                             const ReadoutLayout& layout, double threshold = 0.5) {
  Verdict v;
  v.threshold = threshold;
  for (const auto& [cfg, w] : dist.p) {
    switch (classify(cfg, g, layout)) {
      case ConfigClass::Solution:
        v.mass.solution += w;
        if (w > v.best_solution_weight) {
          v.best_solution_weight = w;
          v.best_solution_config = cfg;
        }
        break;
      case ConfigClass::IndependentNonSolution:
        v.mass.independent_non_solution += w;
        break;
      case ConfigClass::BlockadeViolating:
        v.mass.blockade_violating += w;
        break;
    }
  }
  v.p_solution = v.mass.solution;
  v.satisfiable = v.p_solution > v.threshold;
  return v;
}

// ---------------------------------------------------------------------------
// Repetition forecasts.

// P(at least one success in m repetitions), evaluated in log space.
inline double success_prob(double p_single, double repetitions) {
  if (p_single < 0 || p_single > 1) throw std::invalid_argument("success_prob: p outside [0,1]");
  if (repetitions < 0) throw std::invalid_argument("success_prob: negative repetitions");
  if (p_single == 0) return 0.0;
  if (p_single == 1) return repetitions > 0 ? 1.0 : 0.0;
  return -std::expm1(repetitions * std::log1p(-p_single));
}

// Smallest repetition count reaching the target success probability.
inline std::uint64_t repetitions_for(double p_single, double target) {
  if (p_single <= 0 || p_single > 1)
    throw std::invalid_argument("repetitions_for: p must be in (0,1]");
  if (target < 0 || target >= 1)
    throw std::invalid_argument("repetitions_for: target must be in [0,1)");
  if (target == 0) return 0;
  if (p_single == 1) return 1;
  const double r = std::log1p(-target) / std::log1p(-p_single);
  auto m = static_cast<std::uint64_t>(std::ceil(r - 1e-12));
  while (success_prob(p_single, static_cast<double>(m)) < target) ++m;
  while (m > 0 && success_prob(p_single, static_cast<double>(m - 1)) >= target) --m;
  return m;
}

// Observed per-shot solution probability trend with atom count.
inline double scaling_estimate(int num_atoms) {
  if (num_atoms < 0) throw std::invalid_argument("scaling_estimate: negative atom count");
  return std::pow(1.04, -num_atoms);
}

struct AtomBounds {
  std::uint64_t lower = 0;  // all clauses disjoint, no wires
  std::uint64_t upper = 0;  // every clause pair fully wired
};

inline AtomBounds atom_bounds(int num_clauses) {
  if (num_clauses < 1) throw std::invalid_argument("atom_bounds: need at least one clause");
  const auto nc = static_cast<std::uint64_t>(num_clauses);
  return {3 * nc, 36 * nc * nc};
}

}  // namespace rydsat
