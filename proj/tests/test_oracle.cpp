#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "rydsat/fixtures.hpp"
#include "rydsat/oracle.hpp"

using namespace rydsat;

namespace {

// Reference oracle: scan every subset. Only viable for small n, which is the
// point; it shares no code with the branch-and-bound search.
MisResult naive_mis(int n, const std::vector<std::pair<int, int>>& edges) {
  MisResult res;
  res.alpha = 0;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    bool independent = true;
    for (auto [a, b] : edges)
      if ((mask >> a & 1) && (mask >> b & 1)) {
        independent = false;
        break;
      }
    if (!independent) continue;
    const int size = __builtin_popcountll(mask);
    if (size > res.alpha) {
      res.alpha = size;
      res.maximum_sets.clear();
    }
    if (size == res.alpha) {
      std::vector<int> s;
      for (int v = 0; v < n; ++v)
        if (mask >> v & 1) s.push_back(v);
      res.maximum_sets.push_back(s);
    }
  }
  std::sort(res.maximum_sets.begin(), res.maximum_sets.end());
  return res;
}

}  // namespace

TEST_CASE("enumerate_mis on elementary graphs") {
  SECTION("triangle") {
    const MisResult r = enumerate_mis(3, {{0, 1}, {0, 2}, {1, 2}});
    CHECK(r.alpha == 1);
    const std::vector<std::vector<int>> expected{{0}, {1}, {2}};
    CHECK(r.maximum_sets == expected);
  }
  SECTION("edgeless graph") {
    const MisResult r = enumerate_mis(4, {});
    CHECK(r.alpha == 4);
    REQUIRE(r.maximum_sets.size() == 1);
    CHECK(r.maximum_sets[0] == std::vector<int>{0, 1, 2, 3});
  }
  SECTION("path of four vertices") {
    const MisResult r = enumerate_mis(4, {{0, 1}, {1, 2}, {2, 3}});
    CHECK(r.alpha == 2);
    const std::vector<std::vector<int>> expected{{0, 2}, {0, 3}, {1, 3}};
    CHECK(r.maximum_sets == expected);
  }
}

TEST_CASE("enumerate_mis on the worked instances") {
  SECTION("first instance: independence number 3 with 13 maximum sets") {
    const MisGraph g = reduce(fixtures::psi1());
    const MisResult r = enumerate_mis(g);
    CHECK(r.alpha == 3);
    CHECK(r.maximum_sets.size() == 13);
    // Vertex 4 is the non-shared slot of the two-literal clause; vertex 3 is
    // the shared negated literal. Together they cover every maximum set.
    int with_v4 = 0, with_v3 = 0;
    for (const auto& s : r.maximum_sets) {
      if (std::find(s.begin(), s.end(), 4) != s.end()) ++with_v4;
      if (std::find(s.begin(), s.end(), 3) != s.end()) ++with_v3;
    }
    CHECK(with_v4 == 9);
    CHECK(with_v3 == 4);
    CHECK(with_v4 + with_v3 == static_cast<int>(r.maximum_sets.size()));
  }
  SECTION("second and third instances still reach one vertex per clause") {
    CHECK(enumerate_mis(reduce(fixtures::psi2())).alpha == 3);
    CHECK(enumerate_mis(reduce(fixtures::psi3())).alpha == 3);
  }
}

TEST_CASE("enumerate_mis output is canonical") {
  const MisResult r = enumerate_mis(reduce(fixtures::psi1()));
  for (const auto& s : r.maximum_sets) {
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(static_cast<int>(s.size()) == r.alpha);
  }
  CHECK(std::is_sorted(r.maximum_sets.begin(), r.maximum_sets.end()));
  CHECK(std::adjacent_find(r.maximum_sets.begin(), r.maximum_sets.end()) ==
        r.maximum_sets.end());
}

TEST_CASE("enumerate_mis matches subset scan on random graphs") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 13);
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (rng() % 100 < 30) edges.emplace_back(a, b);
    const MisResult fast = enumerate_mis(n, edges);
    const MisResult slow = naive_mis(n, edges);
    REQUIRE(fast.alpha == slow.alpha);
    REQUIRE(fast.maximum_sets == slow.maximum_sets);
  }
}

TEST_CASE("enumerate_mis guards its input") {
  CHECK_THROWS_AS(enumerate_mis(41, {}), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_mis(0, {}), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_mis(2, {{0, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_mis(2, {{0, 0}}), std::invalid_argument);
}

TEST_CASE("clause covers decode exactly when the formula is satisfiable") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 80; ++trial) {
    Formula f;
    f.num_variables = 2 + static_cast<int>(rng() % 4);
    const int m = 1 + static_cast<int>(rng() % 3);
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
    const MisResult r = enumerate_mis(g);
    const bool sat = brute_force_sat(f).satisfiable;
    REQUIRE((r.alpha == g.num_clauses) == sat);
    if (sat)
      for (const auto& s : r.maximum_sets)
        CHECK(evaluate(f, decode(g, s, f.num_variables)));
  }
}
