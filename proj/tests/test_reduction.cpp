#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <random>

#include "rydsat/fixtures.hpp"
#include "rydsat/reduction.hpp"

using namespace rydsat;

namespace {

std::vector<std::pair<int, int>> edge_pairs(const MisGraph& g, EdgeKind kind) {
  std::vector<std::pair<int, int>> out;
  for (const GraphEdge& e : g.edges)
    if (e.kind == kind) out.emplace_back(e.a, e.b);
  return out;
}

}  // namespace

TEST_CASE("reduce builds one vertex per literal slot, clause-major") {
  const MisGraph g = reduce(fixtures::psi1());
  REQUIRE(g.num_vertices() == 8);
  REQUIRE(g.num_clauses == 3);
  CHECK(g.vertices[0] == VertexId{0, 0});
  CHECK(g.vertices[3] == VertexId{1, 0});
  CHECK(g.vertices[4] == VertexId{1, 1});
  CHECK(g.vertices[7] == VertexId{2, 2});
  CHECK(g.labels[3] == Literal{1, true});
  CHECK(g.labels[4] == Literal{4, false});
  CHECK(g.labels[5] == Literal{1, false});
}

TEST_CASE("reduce adds intra-clause cliques and complementary inter edges") {
  SECTION("first instance: 7 intra, 2 inter") {
    const MisGraph g = reduce(fixtures::psi1());
    CHECK(g.count_edges(EdgeKind::Intra) == 7);
    const auto inter = edge_pairs(g, EdgeKind::Inter);
    const std::vector<std::pair<int, int>> expected{{0, 3}, {3, 5}};
    CHECK(inter == expected);
  }
  SECTION("second instance: 3 inter") {
    const MisGraph g = reduce(fixtures::psi2());
    CHECK(g.count_edges(EdgeKind::Intra) == 7);
    const auto inter = edge_pairs(g, EdgeKind::Inter);
    const std::vector<std::pair<int, int>> expected{{0, 3}, {1, 4}, {3, 5}};
    CHECK(inter == expected);
  }
  SECTION("third instance: 4 inter") {
    const MisGraph g = reduce(fixtures::psi3());
    CHECK(g.count_edges(EdgeKind::Intra) == 7);
    const auto inter = edge_pairs(g, EdgeKind::Inter);
    const std::vector<std::pair<int, int>> expected{{0, 3}, {1, 4}, {2, 6}, {3, 5}};
    CHECK(inter == expected);
  }
}

TEST_CASE("reduce links only complementary literals across clauses") {
  // Same polarity in different clauses stays disconnected.
  const Formula f = parse_dimacs(std::string("p cnf 2 2\n1 0\n1 2 0\n")).formula;
  const MisGraph g = reduce(f);
  CHECK(g.count_edges(EdgeKind::Inter) == 0);
  CHECK(g.count_edges(EdgeKind::Intra) == 1);
}

TEST_CASE("reduce of a single clause is a clique") {
  const Formula f = parse_dimacs(std::string("p cnf 3 1\n1 2 3 0\n")).formula;
  const MisGraph g = reduce(f);
  CHECK(g.num_vertices() == 3);
  CHECK(g.count_edges(EdgeKind::Intra) == 3);
  CHECK(g.count_edges(EdgeKind::Inter) == 0);
}

TEST_CASE("reduce is deterministic") {
  const MisGraph a = reduce(fixtures::psi3());
  const MisGraph b = reduce(fixtures::psi3());
  REQUIRE(a.edges.size() == b.edges.size());
  for (size_t i = 0; i < a.edges.size(); ++i) CHECK(a.edges[i] == b.edges[i]);
}

TEST_CASE("is_independent checks edges") {
  const MisGraph g = reduce(fixtures::psi1());
  CHECK(is_independent(g, {2, 4, 7}));
  CHECK_FALSE(is_independent(g, {0, 1}));   // same clause
  CHECK_FALSE(is_independent(g, {0, 3}));   // complementary pair
  CHECK(is_independent(g, {}));
  CHECK_THROWS_AS(is_independent(g, {42}), std::out_of_range);
}

TEST_CASE("decode maps chosen literals to an assignment") {
  const MisGraph g = reduce(fixtures::psi1());
  SECTION("a full clause cover gives a satisfying assignment") {
    const Assignment a = decode(g, {2, 4, 7}, 6);
    const std::vector<bool> expected{false, false, true, true, false, true};
    CHECK(a.values == expected);
    CHECK(evaluate(fixtures::psi1(), a));
  }
  SECTION("negated choices force the variable false, untouched variables default false") {
    const Assignment a = decode(g, {3}, 6);  // the negated shared literal
    for (int v = 1; v <= 6; ++v) CHECK_FALSE(a.value(v));
  }
  SECTION("non-independent input is rejected") {
    CHECK_THROWS_AS(decode(g, {0, 1, 4}, 6), std::invalid_argument);
  }
  SECTION("oversized input is rejected") {
    CHECK_THROWS_AS(decode(g, {0, 4, 6, 7}, 6), std::invalid_argument);
  }
}

TEST_CASE("decode rejects conflicting demands on a doctored graph") {
  // A graph missing the complementary edge can demand x1 both ways; the
  // reduction never produces this, so decode treats it as a logic error.
  MisGraph g;
  g.num_clauses = 2;
  g.vertices = {{0, 0}, {1, 0}};
  g.labels = {{1, false}, {1, true}};
  CHECK_THROWS_AS(decode(g, {0, 1}, 1), std::logic_error);
}

TEST_CASE("random instances: decoded clause covers satisfy the formula") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Formula f;
    f.num_variables = 2 + static_cast<int>(rng() % 4);
    const int m = 1 + static_cast<int>(rng() % 4);
    for (int c = 0; c < m; ++c) {
      Clause cl;
      const int width = 1 + static_cast<int>(rng() % 3);
      for (int l = 0; l < width; ++l) {
        Literal lit{1 + static_cast<int>(rng() % f.num_variables), (rng() & 1) != 0};
        bool dup = false;
        for (const Literal& prev : cl.literals)
          if (prev == lit) dup = true;
        if (!dup) cl.literals.push_back(lit);
      }
      f.clauses.push_back(cl);
    }
    const MisGraph g = reduce(f);

    // Any independent set picking one vertex per clause decodes to a
    // satisfying assignment.
    std::vector<int> pick;
    std::function<bool(int)> choose = [&](int clause) {
      if (clause == g.num_clauses) return true;
      for (int v = 0; v < g.num_vertices(); ++v) {
        if (g.vertices[static_cast<size_t>(v)].clause != clause) continue;
        bool ok = true;
        for (int u : pick)
          if (g.has_edge(u, v)) ok = false;
        if (!ok) continue;
        pick.push_back(v);
        if (choose(clause + 1)) return true;
        pick.pop_back();
      }
      return false;
    };
    if (choose(0)) {
      const Assignment a = decode(g, pick, f.num_variables);
      CHECK(evaluate(f, a));
    } else {
      CHECK_FALSE(brute_force_sat(f).satisfiable);
    }
  }
}
