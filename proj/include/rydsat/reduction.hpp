#pragma once

// 3-SAT to maximum-independent-set compilation.
//
// Vertices are (clause, slot) pairs labeled with their literal. Intra edges
// make each clause a clique; inter edges join complementary literals across
// distinct clauses, so an independent set can pick at most one literal per
// clause and never both x and ~x.

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rydsat/formula.hpp"

namespace rydsat {

struct VertexId {
  int clause = 0;  // 0-based
  int slot = 0;    // 0-based within the clause

  friend bool operator==(const VertexId& a, const VertexId& b) {
    return a.clause == b.clause && a.slot == b.slot;
  }
  friend bool operator<(const VertexId& a, const VertexId& b) {
    if (a.clause != b.clause) return a.clause < b.clause;
    return a.slot < b.slot;
  }
};

inline std::string to_string(const VertexId& v) {
  return "(" + std::to_string(v.clause) + "," + std::to_string(v.slot) + ")";
}

enum class EdgeKind { Intra, Inter };

struct GraphEdge {
  int a = 0, b = 0;  // vertex indices, a < b
  EdgeKind kind = EdgeKind::Intra;

  friend bool operator==(const GraphEdge& x, const GraphEdge& y) {
    return x.a == y.a && x.b == y.b && x.kind == y.kind;
  }
  friend bool operator<(const GraphEdge& x, const GraphEdge& y) {
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  }
};

struct MisGraph {
  int num_clauses = 0;
  std::vector<VertexId> vertices;  // clause-major, slot-minor
  std::vector<Literal> labels;     // parallel to vertices
  std::vector<GraphEdge> edges;    // sorted lexicographically

  int num_vertices() const { return static_cast<int>(vertices.size()); }

  int vertex_index(const VertexId& v) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
    if (it == vertices.end() || !(*it == v))
      throw std::out_of_range("unknown vertex " + to_string(v));
    return static_cast<int>(it - vertices.begin());
  }

  bool has_edge(int a, int b) const {
    if (a > b) std::swap(a, b);
    for (const GraphEdge& e : edges)
      if (e.a == a && e.b == b) return true;
    return false;
  }

  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(vertices.size());
    for (const GraphEdge& e : edges) {
      adj[static_cast<size_t>(e.a)].push_back(e.b);
      adj[static_cast<size_t>(e.b)].push_back(e.a);
    }
    return adj;
  }

  int count_edges(EdgeKind kind) const {
    int n = 0;
    for (const GraphEdge& e : edges)
      if (e.kind == kind) ++n;
    return n;
  }
};

inline MisGraph reduce(const Formula& f) {
  MisGraph g;
  g.num_clauses = static_cast<int>(f.clauses.size());
  for (int j = 0; j < g.num_clauses; ++j)
    for (int k = 0; k < static_cast<int>(f.clauses[static_cast<size_t>(j)].literals.size()); ++k) {
      g.vertices.push_back({j, k});
      g.labels.push_back(f.clauses[static_cast<size_t>(j)].literals[static_cast<size_t>(k)]);
    }
  const int n = g.num_vertices();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (g.vertices[static_cast<size_t>(a)].clause == g.vertices[static_cast<size_t>(b)].clause)
        g.edges.push_back({a, b, EdgeKind::Intra});
      else if (g.labels[static_cast<size_t>(a)] == g.labels[static_cast<size_t>(b)].negation())
        g.edges.push_back({a, b, EdgeKind::Inter});
    }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

inline bool is_independent(const MisGraph& g, const std::vector<int>& s) {
  std::set<int> members;
  for (int v : s) {
    if (v < 0 || v >= g.num_vertices())
      throw std::out_of_range("is_independent: vertex index " + std::to_string(v));
    members.insert(v);
  }
  for (const GraphEdge& e : g.edges)
    if (members.count(e.a) && members.count(e.b)) return false;
  return true;
}

// Maps a size-N_C independent set back to a satisfying assignment: chosen
// literals become true, untouched variables default to false.
inline Assignment decode(const MisGraph& g, const std::vector<int>& s, int num_variables) {
  if (static_cast<int>(s.size()) != g.num_clauses)
    throw std::invalid_argument("decode: set size " + std::to_string(s.size()) +
                                " != clause count " + std::to_string(g.num_clauses));
  if (!is_independent(g, s)) throw std::invalid_argument("decode: set is not independent");
  Assignment a;
  a.values.assign(static_cast<size_t>(num_variables), false);
  std::vector<bool> pinned(static_cast<size_t>(num_variables), false);
  for (int v : s) {
    const Literal& l = g.labels[static_cast<size_t>(v)];
    const bool want = !l.negated;
    const size_t i = static_cast<size_t>(l.variable - 1);
    if (pinned[i] && a.values[i] != want)
      throw std::logic_error("decode: conflicting demands on x" + std::to_string(l.variable) +
                             " from an independent set");
    a.values[i] = want;
    pinned[i] = true;
  }
  return a;
}

}  // namespace rydsat
