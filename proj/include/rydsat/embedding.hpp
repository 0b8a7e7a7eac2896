#pragma once

// Geometric realization of a MisGraph as an atom arrangement.
//
// Clause gadgets are rigid shapes with side d (point, segment, equilateral
// triangle). Inter-clause edges are realized directly at distance d where a
// constrained layout exists, otherwise routed through even-length chains of
// auxiliary atoms (quantum wires). Every physical edge must sit within
// edge_tolerance of d and every non-edged pair must be separated by more than
// the blockade radius.
//
// Atom ordering is frozen: literal atoms first, in graph vertex order (atom
// index == vertex index), then wire atoms chain by chain.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rydsat/common.hpp"
#include "rydsat/reduction.hpp"

namespace rydsat {

struct GeometryParams {
  double edge_length = 7.0;      // d, um
  double blockade_radius = 10.0; // d_B, um
  double edge_tolerance = 0.05;  // um
  double min_separation = 4.0;   // um, hard floor for any pair
};

enum class SiteRole { Literal, Auxiliary };

struct AtomSite {
  int id = -1;
  SiteRole role = SiteRole::Literal;
  VertexId vertex;    // valid for Literal
  int wire_id = -1;   // valid for Auxiliary
  int wire_pos = -1;  // position along the chain, 0-based
  Vec3 position;
};

struct Wire {
  int id = -1;
  VertexId endpoint_a, endpoint_b;
  std::vector<int> chain;  // auxiliary site ids, endpoint_a side first; even length
};

struct Embedding {
  std::vector<AtomSite> sites;
  std::vector<Wire> wires;
  std::vector<std::pair<int, int>> physical_edges;  // (a,b) with a < b, sorted
  GeometryParams params;
  int dimension = 2;

  int num_sites() const { return static_cast<int>(sites.size()); }

  int site_for_vertex(const VertexId& v) const {
    for (const AtomSite& s : sites)
      if (s.role == SiteRole::Literal && s.vertex == v) return s.id;
    throw std::out_of_range("no site for vertex " + to_string(v));
  }

  bool edged(int a, int b) const {
    if (a > b) std::swap(a, b);
    return std::binary_search(physical_edges.begin(), physical_edges.end(),
                              std::make_pair(a, b));
  }

  void add_edge(int a, int b) {
    if (a > b) std::swap(a, b);
    physical_edges.emplace_back(a, b);
  }

  void finalize_edges() {
    std::sort(physical_edges.begin(), physical_edges.end());
    physical_edges.erase(std::unique(physical_edges.begin(), physical_edges.end()),
                         physical_edges.end());
  }
};

struct GeometryViolation {
  enum class Kind { EdgeLength, Separation, MinSeparation };
  Kind kind = Kind::EdgeLength;
  int a = -1, b = -1;
  double dist = 0.0;
};

inline std::string to_string(const GeometryViolation& v) {
  const char* what = v.kind == GeometryViolation::Kind::EdgeLength ? "edge length"
                     : v.kind == GeometryViolation::Kind::Separation
                         ? "blockade separation"
                         : "min separation";
  return std::string(what) + " violated by pair (" + std::to_string(v.a) + "," +
         std::to_string(v.b) + ") at " + std::to_string(v.dist) + " um";
}

inline std::vector<GeometryViolation> validate_geometry(const Embedding& e) {
  std::vector<GeometryViolation> out;
  const int n = e.num_sites();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double r = distance(e.sites[static_cast<size_t>(a)].position,
                                e.sites[static_cast<size_t>(b)].position);
      if (e.edged(a, b)) {
        if (std::abs(r - e.params.edge_length) > e.params.edge_tolerance)
          out.push_back({GeometryViolation::Kind::EdgeLength, a, b, r});
      } else if (r <= e.params.blockade_radius) {
        out.push_back({GeometryViolation::Kind::Separation, a, b, r});
      }
      if (r < e.params.min_separation)
        out.push_back({GeometryViolation::Kind::MinSeparation, a, b, r});
    }
  return out;
}

struct PairResidual {
  int a = -1, b = -1;
  double dist = 0.0;
  double value = 0.0;  // c6 / r^6, MHz
};

struct ResidualStats {
  double mean = 0.0, max = 0.0;
  std::vector<PairResidual> pairs;  // all non-edged pairs
};

// Residual van-der-Waals couplings over non-edged pairs. c6 in MHz*um^6
// (frequency convention, i.e. value/2pi).
inline ResidualStats residual_stats(const Embedding& e, double c6 = 1.0e6) {
  ResidualStats st;
  const int n = e.num_sites();
  double sum = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (e.edged(a, b)) continue;
      const double r = distance(e.sites[static_cast<size_t>(a)].position,
                                e.sites[static_cast<size_t>(b)].position);
      const double u = c6 / std::pow(r, 6);
      st.pairs.push_back({a, b, r, u});
      sum += u;
      st.max = std::max(st.max, u);
    }
  if (!st.pairs.empty()) st.mean = sum / static_cast<double>(st.pairs.size());
  return st;
}

class EmbeddingError : public std::runtime_error {
 public:
  explicit EmbeddingError(const std::string& msg,
                          std::vector<GeometryViolation> violations = {})
      : std::runtime_error(msg), violations_(std::move(violations)) {}
  const std::vector<GeometryViolation>& violations() const { return violations_; }

 private:
  std::vector<GeometryViolation> violations_;
};

struct EmbedReport {
  int attempts = 0;          // wire-plan attempts
  int restarts_tried = 0;
  int restart_selected = -1;
  std::vector<std::string> wire_notes;
  std::vector<double> objective_trace;  // accepted refinement values, non-increasing
};

// Returns one message per uncovered logical edge; empty means every edge of g
// is realized directly or through a wire.
inline std::vector<std::string> check_coverage(const Embedding& e, const MisGraph& g) {
  std::vector<std::string> out;
  for (const GraphEdge& ge : g.edges) {
    const VertexId va = g.vertices[static_cast<size_t>(ge.a)];
    const VertexId vb = g.vertices[static_cast<size_t>(ge.b)];
    const int sa = e.site_for_vertex(va), sb = e.site_for_vertex(vb);
    if (e.edged(sa, sb)) continue;
    bool wired = false;
    for (const Wire& w : e.wires)
      if ((w.endpoint_a == va && w.endpoint_b == vb) ||
          (w.endpoint_a == vb && w.endpoint_b == va)) {
        wired = true;
        break;
      }
    if (!wired)
      out.push_back("logical edge " + to_string(va) + "-" + to_string(vb) +
                    " neither direct nor wired");
  }
  return out;
}

namespace detail {

struct WirePlan {
  int va = -1, vb = -1;  // graph vertex indices
  int length = 2;
  std::string reason;
};

struct LayoutProblem {
  int n_literal = 0;
  std::vector<std::pair<int, int>> direct_inter;  // vertex-index pairs kept direct
  std::vector<WirePlan> wires;
};

// Decides which inter-clause edges become wires before any geometry is tried.
// Two structural rules, both consequences of rigid gadgets with exact side d
// and blockade radius d_B > d*sqrt(2):
//  - between any pair of clauses at most one inter edge can be direct (two
//    such edges never share an endpoint, and a 4-cycle of exact-d edges with
//    both diagonals beyond d_B cannot close),
//  - direct inter edges must form a forest over clauses (a closed chain of
//    rigid gadgets leaves no room to route the remaining wires).
// Lower-priority edges are wired first; priority is the sum of endpoint
// inter-degrees with lexicographic tie-break.
inline LayoutProblem plan_wires(const MisGraph& g) {
  LayoutProblem lp;
  lp.n_literal = g.num_vertices();

  std::vector<int> inter_degree(static_cast<size_t>(g.num_vertices()), 0);
  std::vector<GraphEdge> inter;
  for (const GraphEdge& e : g.edges)
    if (e.kind == EdgeKind::Inter) {
      inter.push_back(e);
      ++inter_degree[static_cast<size_t>(e.a)];
      ++inter_degree[static_cast<size_t>(e.b)];
    }

  auto priority = [&](const GraphEdge& e) {
    return inter_degree[static_cast<size_t>(e.a)] + inter_degree[static_cast<size_t>(e.b)];
  };
  std::sort(inter.begin(), inter.end(), [&](const GraphEdge& x, const GraphEdge& y) {
    if (priority(x) != priority(y)) return priority(x) > priority(y);
    return x < y;
  });

  std::set<std::pair<int, int>> clause_pair_used;
  std::map<int, int> uf;  // union-find over clause indices
  std::function<int(int)> find = [&](int c) -> int {
    auto it = uf.find(c);
    if (it == uf.end()) {
      uf[c] = c;
      return c;
    }
    if (it->second != c) it->second = find(it->second);
    return it->second;
  };

  for (const GraphEdge& e : inter) {
    const int ca = g.vertices[static_cast<size_t>(e.a)].clause;
    const int cb = g.vertices[static_cast<size_t>(e.b)].clause;
    auto cp = std::minmax(ca, cb);
    std::string wire_reason;
    if (clause_pair_used.count({cp.first, cp.second}))
      wire_reason = "second edge between clauses " + std::to_string(cp.first) + " and " +
                    std::to_string(cp.second);
    else if (find(ca) == find(cb))
      wire_reason = "closes a clause cycle through " + std::to_string(cp.first) + "-" +
                    std::to_string(cp.second);
    if (wire_reason.empty()) {
      clause_pair_used.insert({cp.first, cp.second});
      uf[find(ca)] = find(cb);
      lp.direct_inter.emplace_back(e.a, e.b);
    } else {
      lp.wires.push_back({e.a, e.b, 2, wire_reason});
    }
  }
  std::sort(lp.direct_inter.begin(), lp.direct_inter.end());
  std::sort(lp.wires.begin(), lp.wires.end(),
            [](const WirePlan& x, const WirePlan& y) {
              return std::make_pair(x.va, x.vb) < std::make_pair(y.va, y.vb);
            });
  return lp;
}

struct LayoutGeometry {
  std::vector<Vec3> pos;                           // literal atoms then wire atoms
  std::vector<std::pair<int, int>> edges;          // physical, atom indices
  std::vector<std::pair<int, int>> nonedges;       // all other pairs
  std::vector<std::pair<int, int>> wire_atom_span; // [first, last] atom index per wire
};

inline std::vector<Vec3> gadget_template(int size, double d) {
  switch (size) {
    case 1: return {{0, 0, 0}};
    case 2: return {{0, 0, 0}, {d, 0, 0}};
    case 3: return {{0, 0, 0}, {d, 0, 0}, {d / 2, d * std::sqrt(3.0) / 2.0, 0}};
    default: throw std::logic_error("gadget_template: clause size out of range");
  }
}

inline Vec3 rotate2(const Vec3& v, double ang) {
  const double c = std::cos(ang), s = std::sin(ang);
  return {v.x * c - v.y * s, v.x * s + v.y * c, v.z};
}

// Constructive first guess: BFS over the clause forest, each child gadget hung
// off its contact atom along the least crowded direction, wires interpolated
// with a sideways bulge.
inline LayoutGeometry initial_layout(const MisGraph& g, const LayoutProblem& lp,
                                     const GeometryParams& p) {
  const double d = p.edge_length;
  const int nl = g.num_vertices();

  std::vector<std::vector<int>> clause_slots(static_cast<size_t>(g.num_clauses));
  for (int v = 0; v < nl; ++v)
    clause_slots[static_cast<size_t>(g.vertices[static_cast<size_t>(v)].clause)].push_back(v);

  // Clause adjacency through kept direct inter edges.
  struct Contact {
    int other_clause, my_vertex, other_vertex;
  };
  std::vector<std::vector<Contact>> clause_adj(static_cast<size_t>(g.num_clauses));
  for (auto [a, b] : lp.direct_inter) {
    const int ca = g.vertices[static_cast<size_t>(a)].clause;
    const int cb = g.vertices[static_cast<size_t>(b)].clause;
    clause_adj[static_cast<size_t>(ca)].push_back({cb, a, b});
    clause_adj[static_cast<size_t>(cb)].push_back({ca, b, a});
  }

  LayoutGeometry geo;
  geo.pos.assign(static_cast<size_t>(nl), Vec3{});
  std::vector<bool> clause_placed(static_cast<size_t>(g.num_clauses), false);
  std::vector<std::vector<Vec3>> arms(static_cast<size_t>(nl));  // unit dirs leaving each atom

  auto place_gadget = [&](int clause, const Vec3& contact_pos, int contact_vertex,
                          double outward_angle) {
    const auto& slots = clause_slots[static_cast<size_t>(clause)];
    auto tpl = gadget_template(static_cast<int>(slots.size()), d);
    int contact_local = 0;
    for (size_t i = 0; i < slots.size(); ++i)
      if (slots[i] == contact_vertex) contact_local = static_cast<int>(i);
    // Rotate the template so the centroid leaves the contact atom along
    // outward_angle, then translate the contact atom onto contact_pos.
    Vec3 centroid{};
    for (const Vec3& t : tpl) centroid += t * (1.0 / static_cast<double>(tpl.size()));
    Vec3 off = centroid - tpl[static_cast<size_t>(contact_local)];
    double base = (off.norm() < 1e-12) ? 0.0 : std::atan2(off.y, off.x);
    const double rot = outward_angle - base;
    for (size_t i = 0; i < slots.size(); ++i) {
      Vec3 q = rotate2(tpl[i] - tpl[static_cast<size_t>(contact_local)], rot);
      geo.pos[static_cast<size_t>(slots[i])] = contact_pos + q;
    }
    clause_placed[static_cast<size_t>(clause)] = true;
    // Record intra arms.
    for (size_t i = 0; i < slots.size(); ++i)
      for (size_t j = 0; j < slots.size(); ++j)
        if (i != j)
          arms[static_cast<size_t>(slots[i])].push_back(
              (geo.pos[static_cast<size_t>(slots[j])] - geo.pos[static_cast<size_t>(slots[i])])
                  .normalized());
  };

  auto pick_direction = [&](int atom) {
    // Least crowded direction around `atom` on a 5-degree grid.
    double best_score = -1e300, best_ang = 0.0;
    for (int k = 0; k < 72; ++k) {
      const double ang = k * (two_pi / 72.0);
      const Vec3 dir{std::cos(ang), std::sin(ang), 0};
      double worst = two_pi;
      for (const Vec3& a : arms[static_cast<size_t>(atom)])
        worst = std::min(worst, std::acos(std::clamp(dir.dot(a), -1.0, 1.0)));
      if (worst > best_score) {
        best_score = worst;
        best_ang = ang;
      }
    }
    return best_ang;
  };

  // BFS per component, components spaced along +x.
  double x_offset = 0.0;
  std::vector<int> order(static_cast<size_t>(g.num_clauses));
  for (int c = 0; c < g.num_clauses; ++c) order[static_cast<size_t>(c)] = c;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const size_t sa = clause_adj[static_cast<size_t>(a)].size();
    const size_t sb = clause_adj[static_cast<size_t>(b)].size();
    if (sa != sb) return sa > sb;
    return a < b;
  });
  for (int root : order) {
    if (clause_placed[static_cast<size_t>(root)]) continue;
    const auto& slots = clause_slots[static_cast<size_t>(root)];
    auto tpl = gadget_template(static_cast<int>(slots.size()), d);
    for (size_t i = 0; i < slots.size(); ++i)
      geo.pos[static_cast<size_t>(slots[i])] = tpl[i] + Vec3{x_offset, 0, 0};
    clause_placed[static_cast<size_t>(root)] = true;
    for (size_t i = 0; i < slots.size(); ++i)
      for (size_t j = 0; j < slots.size(); ++j)
        if (i != j)
          arms[static_cast<size_t>(slots[i])].push_back(
              (geo.pos[static_cast<size_t>(slots[j])] - geo.pos[static_cast<size_t>(slots[i])])
                  .normalized());

    std::vector<int> queue{root};
    while (!queue.empty()) {
      const int c = queue.front();
      queue.erase(queue.begin());
      for (const Contact& ct : clause_adj[static_cast<size_t>(c)]) {
        if (clause_placed[static_cast<size_t>(ct.other_clause)]) continue;
        const double ang = pick_direction(ct.my_vertex);
        const Vec3 dir{std::cos(ang), std::sin(ang), 0};
        const Vec3 contact_pos = geo.pos[static_cast<size_t>(ct.my_vertex)] + dir * d;
        arms[static_cast<size_t>(ct.my_vertex)].push_back(dir);
        place_gadget(ct.other_clause, contact_pos, ct.other_vertex, ang);
        arms[static_cast<size_t>(ct.other_vertex)].push_back(dir * -1.0);
        queue.push_back(ct.other_clause);
      }
    }
    double max_x = x_offset;
    for (int c = 0; c < g.num_clauses; ++c)
      if (clause_placed[static_cast<size_t>(c)])
        for (int v : clause_slots[static_cast<size_t>(c)])
          max_x = std::max(max_x, geo.pos[static_cast<size_t>(v)].x);
    x_offset = max_x + p.blockade_radius + 2.0 * d;
  }

  // Wire atoms: along the endpoint segment with a perpendicular bulge away
  // from the layout centroid.
  Vec3 centroid{};
  for (int v = 0; v < nl; ++v) centroid += geo.pos[static_cast<size_t>(v)] * (1.0 / nl);
  int next_atom = nl;
  for (const WirePlan& w : lp.wires) {
    const Vec3 pa = geo.pos[static_cast<size_t>(w.va)];
    const Vec3 pb = geo.pos[static_cast<size_t>(w.vb)];
    Vec3 mid = (pa + pb) * 0.5;
    Vec3 axis = pb - pa;
    Vec3 perp{-axis.y, axis.x, 0};
    if (perp.norm() < 1e-9) perp = {0, 1, 0};
    perp = perp.normalized();
    if (perp.dot(mid - centroid) < 0) perp = perp * -1.0;
    const Vec3 ctrl = mid + perp * d;
    geo.wire_atom_span.emplace_back(next_atom, next_atom + w.length - 1);
    for (int i = 1; i <= w.length; ++i) {
      const double t = static_cast<double>(i) / (w.length + 1);
      // quadratic bezier through the bulge control point
      const Vec3 q = pa * ((1 - t) * (1 - t)) + ctrl * (2 * t * (1 - t)) + pb * (t * t);
      geo.pos.push_back(q);
      ++next_atom;
    }
  }

  // Physical edge list: intra cliques, kept inter edges, wire links.
  for (int a = 0; a < nl; ++a)
    for (int b = a + 1; b < nl; ++b)
      if (g.vertices[static_cast<size_t>(a)].clause == g.vertices[static_cast<size_t>(b)].clause)
        geo.edges.emplace_back(a, b);
  for (auto [a, b] : lp.direct_inter) geo.edges.emplace_back(std::min(a, b), std::max(a, b));
  for (size_t wi = 0; wi < lp.wires.size(); ++wi) {
    const auto [first, last] = geo.wire_atom_span[wi];
    int prev = lp.wires[wi].va;
    for (int a = first; a <= last; ++a) {
      geo.edges.emplace_back(std::min(prev, a), std::max(prev, a));
      prev = a;
    }
    geo.edges.emplace_back(std::min(prev, lp.wires[wi].vb), std::max(prev, lp.wires[wi].vb));
  }
  std::sort(geo.edges.begin(), geo.edges.end());

  const int n = static_cast<int>(geo.pos.size());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (!std::binary_search(geo.edges.begin(), geo.edges.end(), std::make_pair(a, b)))
        geo.nonedges.emplace_back(a, b);
  return geo;
}

// Alternating projections: edges to exact length d, non-edged pairs pushed
// past the blockade radius (with a little slack so the final strict checks
// hold). In 2D all positions stay in the z = 0 plane.
inline void project_constraints(LayoutGeometry& geo, const GeometryParams& p,
                                int iterations) {
  const double d = p.edge_length;
  const double sep = p.blockade_radius * 1.015;
  for (int it = 0; it < iterations; ++it) {
    double worst = 0.0;
    for (auto [i, j] : geo.edges) {
      Vec3& a = geo.pos[static_cast<size_t>(i)];
      Vec3& b = geo.pos[static_cast<size_t>(j)];
      Vec3 delta = b - a;
      double r = delta.norm();
      if (r < 1e-9) {
        b += Vec3{1e-3, 1e-3 * (i % 3), 0};
        delta = b - a;
        r = delta.norm();
      }
      const double err = r - d;
      worst = std::max(worst, std::abs(err));
      const Vec3 corr = delta * (0.5 * err / r);
      a += corr;
      b -= corr;
    }
    for (auto [i, j] : geo.nonedges) {
      Vec3& a = geo.pos[static_cast<size_t>(i)];
      Vec3& b = geo.pos[static_cast<size_t>(j)];
      Vec3 delta = b - a;
      double r = delta.norm();
      if (r >= sep) continue;
      if (r < 1e-9) {
        b += Vec3{1e-3, -1e-3 * (j % 3), 0};
        delta = b - a;
        r = delta.norm();
      }
      const double err = r - sep;
      worst = std::max(worst, -err);
      const Vec3 corr = delta * (0.5 * err / r);
      a += corr;
      b -= corr;
    }
    if (worst < 1e-10) break;
  }
}

inline bool layout_feasible(const LayoutGeometry& geo, const GeometryParams& p,
                            std::vector<GeometryViolation>* out = nullptr) {
  bool ok = true;
  for (auto [i, j] : geo.edges) {
    const double r = distance(geo.pos[static_cast<size_t>(i)], geo.pos[static_cast<size_t>(j)]);
    if (std::abs(r - p.edge_length) > p.edge_tolerance) {
      ok = false;
      if (out) out->push_back({GeometryViolation::Kind::EdgeLength, i, j, r});
    }
  }
  for (auto [i, j] : geo.nonedges) {
    const double r = distance(geo.pos[static_cast<size_t>(i)], geo.pos[static_cast<size_t>(j)]);
    if (r <= p.blockade_radius) {
      ok = false;
      if (out) out->push_back({GeometryViolation::Kind::Separation, i, j, r});
    }
  }
  return ok;
}

inline double layout_objective(const LayoutGeometry& geo, const GeometryParams& p) {
  double sum = 0.0;
  for (auto [i, j] : geo.nonedges) {
    const double r = distance(geo.pos[static_cast<size_t>(i)], geo.pos[static_cast<size_t>(j)]);
    sum += std::pow(p.blockade_radius / r, 6);
  }
  return sum;
}

// Monotone refinement: gradient steps on the residual objective, re-projected
// onto the constraints, accepted only when feasible and strictly better.
inline void refine_layout(LayoutGeometry& geo, const GeometryParams& p,
                          std::vector<double>* trace) {
  double obj = layout_objective(geo, p);
  if (trace) trace->push_back(obj);
  double eta = 0.05;
  const double db6 = std::pow(p.blockade_radius, 6);
  for (int step = 0; step < 120 && eta > 1e-4; ++step) {
    std::vector<Vec3> grad(geo.pos.size());
    for (auto [i, j] : geo.nonedges) {
      const Vec3 delta = geo.pos[static_cast<size_t>(i)] - geo.pos[static_cast<size_t>(j)];
      const double r = delta.norm();
      const Vec3 push = delta * (6.0 * db6 / std::pow(r, 8));
      grad[static_cast<size_t>(i)] += push;
      grad[static_cast<size_t>(j)] -= push;
    }
    LayoutGeometry candidate = geo;
    for (size_t i = 0; i < candidate.pos.size(); ++i)
      candidate.pos[i] += grad[i] * eta;
    project_constraints(candidate, p, 800);
    const double cand_obj = layout_objective(candidate, p);
    if (layout_feasible(candidate, p) && cand_obj < obj) {
      geo = std::move(candidate);
      obj = cand_obj;
      if (trace) trace->push_back(obj);
    } else {
      eta *= 0.5;
    }
  }
}

}  // namespace detail

inline Embedding embed(const MisGraph& g, const GeometryParams& params = {},
                       int dimension = 2, std::uint64_t seed = 1,
                       EmbedReport* report = nullptr) {
  if (dimension != 2 && dimension != 3)
    throw std::invalid_argument("embed: dimension must be 2 or 3");
  if (g.num_vertices() == 0) throw std::invalid_argument("embed: empty graph");

  detail::LayoutProblem lp = detail::plan_wires(g);
  EmbedReport local_report;
  EmbedReport& rep = report ? *report : local_report;
  for (const auto& w : lp.wires)
    rep.wire_notes.push_back("wire " + to_string(g.vertices[static_cast<size_t>(w.va)]) + "-" +
                             to_string(g.vertices[static_cast<size_t>(w.vb)]) + ": " + w.reason);

  const int restart_budget = 40;
  const int max_attempts = static_cast<int>(g.count_edges(EdgeKind::Inter)) + 6;
  std::vector<GeometryViolation> last_violations;

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    ++rep.attempts;
    detail::LayoutGeometry base = detail::initial_layout(g, lp, params);
    std::optional<detail::LayoutGeometry> best;
    double best_obj = 0.0;
    std::vector<double> best_trace;

    for (int r = 0; r < restart_budget; ++r) {
      ++rep.restarts_tried;
      detail::LayoutGeometry geo = base;
      if (r > 0) {
        std::mt19937_64 rng(seed * 1000003ull + static_cast<std::uint64_t>(attempt) * 1009ull +
                            static_cast<std::uint64_t>(r));
        const double amp = params.edge_length * (0.08 + 0.05 * std::min(r, 10));
        std::uniform_real_distribution<double> u(-amp, amp);
        for (Vec3& p : geo.pos) {
          p.x += u(rng);
          p.y += u(rng);
          if (dimension == 3) p.z += u(rng) * 0.5;
        }
      }
      detail::project_constraints(geo, params, 4000);
      std::vector<GeometryViolation> viol;
      if (!detail::layout_feasible(geo, params, &viol)) {
        if (!best && (last_violations.empty() || viol.size() < last_violations.size()))
          last_violations = viol;
        continue;
      }
      std::vector<double> trace;
      detail::refine_layout(geo, params, &trace);
      const double obj = detail::layout_objective(geo, params);
      if (!best || obj < best_obj) {
        best = geo;
        best_obj = obj;
        best_trace = trace;
        rep.restart_selected = r;
      }
    }

    if (best) {
      rep.objective_trace = best_trace;
      Embedding e;
      e.params = params;
      e.dimension = dimension;
      bool any_z = false;
      for (const Vec3& p : best->pos)
        if (std::abs(p.z) > 1e-9) any_z = true;
      e.dimension = any_z ? 3 : 2;
      for (int v = 0; v < g.num_vertices(); ++v) {
        AtomSite s;
        s.id = v;
        s.role = SiteRole::Literal;
        s.vertex = g.vertices[static_cast<size_t>(v)];
        s.position = best->pos[static_cast<size_t>(v)];
        e.sites.push_back(s);
      }
      for (size_t wi = 0; wi < lp.wires.size(); ++wi) {
        Wire w;
        w.id = static_cast<int>(wi);
        w.endpoint_a = g.vertices[static_cast<size_t>(lp.wires[wi].va)];
        w.endpoint_b = g.vertices[static_cast<size_t>(lp.wires[wi].vb)];
        const auto [first, last] = best->wire_atom_span[wi];
        for (int a = first; a <= last; ++a) {
          AtomSite s;
          s.id = a;
          s.role = SiteRole::Auxiliary;
          s.wire_id = w.id;
          s.wire_pos = a - first;
          s.position = best->pos[static_cast<size_t>(a)];
          e.sites.push_back(s);
          w.chain.push_back(a);
        }
        e.wires.push_back(w);
      }
      e.physical_edges = best->edges;
      e.finalize_edges();
      return e;
    }

    // No feasible restart. Grow the tightest wire if any looks too short,
    // otherwise demote the lowest-priority direct inter edge to a wire.
    bool grew = false;
    for (auto& w : lp.wires) {
      const double reach = (w.length + 1) * params.edge_length * 0.95;
      const double span = distance(base.pos[static_cast<size_t>(w.va)],
                                   base.pos[static_cast<size_t>(w.vb)]);
      if (span > reach && w.length + 2 <= 8) {
        w.length += 2;
        rep.wire_notes.push_back("wire " + to_string(g.vertices[static_cast<size_t>(w.va)]) +
                                 "-" + to_string(g.vertices[static_cast<size_t>(w.vb)]) +
                                 ": grown to " + std::to_string(w.length));
        grew = true;
        break;
      }
    }
    if (!grew) {
      if (lp.direct_inter.empty()) break;
      auto demoted = lp.direct_inter.back();
      lp.direct_inter.pop_back();
      lp.wires.push_back({demoted.first, demoted.second, 2, "direct layout failed"});
      std::sort(lp.wires.begin(), lp.wires.end(), [](const auto& x, const auto& y) {
        return std::make_pair(x.va, x.vb) < std::make_pair(y.va, y.vb);
      });
      rep.wire_notes.push_back("wire " + to_string(g.vertices[static_cast<size_t>(demoted.first)]) +
                               "-" + to_string(g.vertices[static_cast<size_t>(demoted.second)]) +
                               ": direct layout failed");
    }
  }
  throw EmbeddingError("embed: no feasible layout within restart budget", last_violations);
}

// ---------------------------------------------------------------------------
// alpha-transformation: rigid rotation of clause gadgets about hinge axes
// through a central atom, interpolated by alpha in [0,1].

struct Hinge {
  std::vector<int> sites;  // rigid body, atom ids
  Vec3 axis_point, axis_dir;
  double target_angle = 0.0;  // radians at alpha = 1
};

struct HingeSpec {
  int central_site = -1;
  std::vector<Hinge> hinges;
};

class TransformError : public std::runtime_error {
 public:
  explicit TransformError(const std::string& msg,
                          std::vector<GeometryViolation> violations = {})
      : std::runtime_error(msg), violations_(std::move(violations)) {}
  const std::vector<GeometryViolation>& violations() const { return violations_; }

 private:
  std::vector<GeometryViolation> violations_;
};

inline Embedding transform_alpha(const Embedding& e, double alpha, const HingeSpec& spec) {
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("transform_alpha: alpha outside [0,1]");
  if (alpha == 0.0) return e;
  Embedding out = e;
  for (const Hinge& h : spec.hinges) {
    const Vec3 axis = h.axis_dir.normalized();
    for (int id : h.sites) {
      if (id < 0 || id >= e.num_sites())
        throw std::invalid_argument("transform_alpha: bad site id in hinge");
      out.sites[static_cast<size_t>(id)].position = rotate_about_axis(
          e.sites[static_cast<size_t>(id)].position, h.axis_point, axis,
          alpha * h.target_angle);
    }
  }
  bool any_z = false;
  for (const AtomSite& s : out.sites)
    if (std::abs(s.position.z) > 1e-9) any_z = true;
  if (any_z) out.dimension = 3;
  auto viol = validate_geometry(out);
  if (!viol.empty())
    throw TransformError("transform_alpha: rotation breaks geometry at alpha = " +
                             std::to_string(alpha),
                         viol);
  return out;
}

namespace detail {

inline double hinge_objective(const Embedding& e, const HingeSpec& spec,
                              const std::vector<double>& angles, double alpha,
                              bool* valid) {
  HingeSpec s = spec;
  for (size_t i = 0; i < s.hinges.size(); ++i) s.hinges[i].target_angle = angles[i];
  try {
    Embedding t = transform_alpha(e, alpha, s);
    if (valid) *valid = true;
    double sum = 0.0;
    for (const PairResidual& pr : residual_stats(t, 1.0).pairs) sum += pr.value;
    return sum;
  } catch (const TransformError&) {
    if (valid) *valid = false;
    return 1e300;
  }
}

inline bool hinge_path_valid(const Embedding& e, const HingeSpec& spec,
                             const std::vector<double>& angles) {
  for (double a : {0.25, 0.5, 0.75, 1.0}) {
    bool ok = false;
    hinge_objective(e, spec, angles, a, &ok);
    if (!ok) return false;
  }
  return true;
}

}  // namespace detail

// Detects the star-of-gadgets pattern (every non-central clause attached to
// one central atom by a single direct inter edge) and picks hinge target
// angles minimizing the residual sum at alpha = 1, subject to the geometry
// staying valid along the whole alpha path.
inline HingeSpec auto_hinge_spec(const Embedding& e) {
  if (!e.wires.empty())
    throw std::invalid_argument("auto_hinge_spec: wired embeddings need an explicit HingeSpec");

  std::map<int, std::vector<int>> clauses;  // clause -> site ids
  for (const AtomSite& s : e.sites)
    clauses[s.vertex.clause].push_back(s.id);

  // Central atom: a site adjacent (physically) to exactly one contact in
  // every other clause.
  int central = -1;
  std::map<int, int> contacts;  // clause -> contact site, for the winning central
  for (const AtomSite& c : e.sites) {
    std::map<int, std::vector<int>> by_clause;
    for (const AtomSite& s : e.sites) {
      if (s.id == c.id || s.vertex.clause == c.vertex.clause) continue;
      if (e.edged(c.id, s.id)) by_clause[s.vertex.clause].push_back(s.id);
    }
    bool ok = static_cast<int>(by_clause.size()) == static_cast<int>(clauses.size()) - 1;
    for (const auto& [cl, v] : by_clause)
      if (v.size() != 1) ok = false;
    if (ok) {
      if (central != -1)
        throw std::invalid_argument("auto_hinge_spec: ambiguous central atom");
      central = c.id;
      contacts.clear();
      for (const auto& [cl, v] : by_clause) contacts[cl] = v[0];
    }
  }
  if (central == -1)
    throw std::invalid_argument("auto_hinge_spec: no star-of-gadgets pattern found");

  const Vec3 cpos = e.sites[static_cast<size_t>(central)].position;
  const int central_clause = e.sites[static_cast<size_t>(central)].vertex.clause;

  HingeSpec spec;
  spec.central_site = central;
  for (const auto& [cl, sites] : clauses) {
    if (cl == central_clause) continue;
    Hinge h;
    h.sites = sites;
    h.axis_point = cpos;
    h.axis_dir =
        (e.sites[static_cast<size_t>(contacts[cl])].position - cpos).normalized();
    spec.hinges.push_back(h);
  }
  std::vector<int> central_rest;
  for (int id : clauses[central_clause])
    if (id != central) central_rest.push_back(id);
  if (!central_rest.empty()) {
    Vec3 centroid{};
    for (int id : central_rest)
      centroid += e.sites[static_cast<size_t>(id)].position * (1.0 / central_rest.size());
    Vec3 radial = centroid - cpos;
    Vec3 axis = Vec3{0, 0, 1}.cross(radial);
    if (axis.norm() < 1e-9) axis = {0, 1, 0};
    Hinge h;
    h.sites = central_rest;
    h.axis_point = cpos;
    h.axis_dir = axis.normalized();
    spec.hinges.push_back(h);
  }

  // Angle search: coarse grid per hinge, then coordinate refinement.
  const size_t nh = spec.hinges.size();
  std::vector<double> best(nh, 0.0);
  double best_obj = detail::hinge_objective(e, spec, best, 1.0, nullptr);
  const double deg = two_pi / 360.0;

  std::vector<double> candidates;
  for (int a = -90; a <= 90; a += 15) candidates.push_back(a * deg);
  std::vector<size_t> idx(nh, 0);
  std::vector<double> angles(nh, 0.0);
  while (true) {
    for (size_t i = 0; i < nh; ++i) angles[i] = candidates[idx[i]];
    bool ok = false;
    const double obj = detail::hinge_objective(e, spec, angles, 1.0, &ok);
    if (ok && obj < best_obj && detail::hinge_path_valid(e, spec, angles)) {
      best_obj = obj;
      best = angles;
    }
    size_t k = 0;
    while (k < nh && ++idx[k] == candidates.size()) {
      idx[k] = 0;
      ++k;
    }
    if (k == nh) break;
  }
  for (int pass = 0; pass < 3; ++pass)
    for (size_t i = 0; i < nh; ++i)
      for (double step : {8.0 * deg, 4.0 * deg, 2.0 * deg})
        for (double sign : {1.0, -1.0}) {
          std::vector<double> trial = best;
          trial[i] += sign * step;
          if (std::abs(trial[i]) > 0.5 * two_pi / 2.0) continue;
          bool ok = false;
          const double obj = detail::hinge_objective(e, spec, trial, 1.0, &ok);
          if (ok && obj < best_obj && detail::hinge_path_valid(e, spec, trial)) {
            best_obj = obj;
            best = trial;
          }
        }

  for (size_t i = 0; i < nh; ++i) spec.hinges[i].target_angle = best[i];
  return spec;
}

inline Embedding transform_alpha(const Embedding& e, double alpha) {
  return transform_alpha(e, alpha, auto_hinge_spec(e));
}

}  // namespace rydsat
