#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "rydsat/fixtures.hpp"
#include "rydsat/formula.hpp"

using namespace rydsat;

TEST_CASE("parse_dimacs reads the worked instance") {
  const DimacsResult r = parse_dimacs(std::string(fixtures::psi1_dimacs()));
  REQUIRE(r.warnings.empty());
  const Formula& f = r.formula;
  REQUIRE(f.num_variables == 6);
  REQUIRE(f.clauses.size() == 3);
  REQUIRE(f.clauses[0].literals.size() == 3);
  REQUIRE(f.clauses[1].literals.size() == 2);
  CHECK(f.clauses[0].literals[0] == Literal{1, false});
  CHECK(f.clauses[1].literals[0] == Literal{1, true});
  CHECK(f.clauses[1].literals[1] == Literal{4, false});
  CHECK(f.clauses[2].literals[2] == Literal{6, false});
}

TEST_CASE("parse_dimacs tolerates comments, blank lines, CRLF, split clauses") {
  const std::string text =
      "c a comment\r\n"
      "\r\n"
      "p cnf 3 2\r\n"
      "1 -2\r\n"
      "3 0\r\n"
      "c mid comment\n"
      "-1 2 0\n";
  const DimacsResult r = parse_dimacs(text);
  REQUIRE(r.formula.clauses.size() == 2);
  REQUIRE(r.formula.clauses[0].literals.size() == 3);
  CHECK(r.formula.clauses[0].literals[2] == Literal{3, false});
}

TEST_CASE("parse_dimacs warns on duplicates and tautologies") {
  SECTION("duplicate literal inside a clause is dropped with a warning") {
    const DimacsResult r = parse_dimacs(std::string("p cnf 2 1\n1 1 2 0\n"));
    REQUIRE(r.warnings.size() == 1);
    REQUIRE(r.formula.clauses[0].literals.size() == 2);
  }
  SECTION("tautological clause is kept with a warning") {
    const DimacsResult r = parse_dimacs(std::string("p cnf 2 1\n1 -1 0\n"));
    REQUIRE(r.warnings.size() == 1);
    REQUIRE(r.formula.clauses[0].literals.size() == 2);
  }
}

TEST_CASE("parse_dimacs rejects malformed input") {
  CHECK_THROWS_AS(parse_dimacs(std::string("1 2 0\n")), ParseError);            // no header
  CHECK_THROWS_AS(parse_dimacs(std::string("p cnf 2\n1 0\n")), ParseError);     // short header
  CHECK_THROWS_AS(parse_dimacs(std::string("p cnf 0 1\n1 0\n")), ParseError);   // zero vars
  CHECK_THROWS_AS(parse_dimacs(std::string("p cnf 2 1\n0\n")), ParseError);     // empty clause
  CHECK_THROWS_AS(parse_dimacs(std::string("p cnf 2 1\n1 2 -1 -2 0\n")), ParseError);  // too wide
  CHECK_THROWS_AS(parse_dimacs(std::string("p cnf 2 1\n3 0\n")), ParseError);   // var overflow
  CHECK_THROWS_AS(parse_dimacs(std::string("p cnf 2 2\n1 0\n")), ParseError);   // count mismatch
  CHECK_THROWS_AS(parse_dimacs(std::string("p cnf 2 1\n1 0\n2 0\n")), ParseError);
  CHECK_THROWS_AS(parse_dimacs(std::string("p cnf 2 1\n1 2\n")), ParseError);   // unterminated
  CHECK_THROWS_AS(parse_dimacs(std::string("p cnf 2 1\n1 x 0\n")), ParseError); // not a number
  CHECK_THROWS_AS(parse_dimacs(std::string("p cnf 2 1\np cnf 2 1\n1 0\n")), ParseError);
}

TEST_CASE("write_dimacs round-trips") {
  for (const char* text :
       {fixtures::psi1_dimacs(), fixtures::psi2_dimacs(), fixtures::psi3_dimacs()}) {
    const Formula f = parse_dimacs(std::string(text)).formula;
    const std::string emitted = write_dimacs(f);
    CHECK(emitted == text);
    const Formula again = parse_dimacs(emitted).formula;
    CHECK(write_dimacs(again) == emitted);
  }
}

TEST_CASE("write_dimacs then parse_dimacs preserves random formulas") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    Formula f;
    f.num_variables = 1 + static_cast<int>(rng() % 6);
    const int m = 1 + static_cast<int>(rng() % 5);
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
    const Formula back = parse_dimacs(write_dimacs(f)).formula;
    REQUIRE(back.num_variables == f.num_variables);
    REQUIRE(back.clauses.size() == f.clauses.size());
    for (size_t c = 0; c < f.clauses.size(); ++c) {
      REQUIRE(back.clauses[c].literals.size() == f.clauses[c].literals.size());
      for (size_t l = 0; l < f.clauses[c].literals.size(); ++l)
        CHECK(back.clauses[c].literals[l] == f.clauses[c].literals[l]);
    }
  }
}

TEST_CASE("evaluate follows clause semantics") {
  const Formula f = fixtures::psi1();
  // x3, x4, x6 true satisfies every clause.
  CHECK(evaluate(f, Assignment{{false, false, true, true, false, true}}));
  // x1 true forces x4 for the middle clause.
  CHECK_FALSE(evaluate(f, Assignment{{true, false, false, false, false, false}}));
  CHECK(evaluate(f, Assignment{{true, false, false, true, false, false}}));
  CHECK_THROWS_AS(evaluate(f, Assignment{{true, false}}), std::invalid_argument);
}

TEST_CASE("brute_force_sat counts and witnesses") {
  SECTION("the worked instance has 34 satisfying assignments") {
    // By cases on x1: x1 = 1 forces x4 (16 assignments); x1 = 0 leaves
    // (x2 or x3) and (x5 or x6), 32 * 3/4 * 3/4 = 18.
    const SatResult r = brute_force_sat(fixtures::psi1());
    REQUIRE(r.satisfiable);
    CHECK(r.count == 34);
    REQUIRE(r.witness.has_value());
    CHECK(evaluate(fixtures::psi1(), *r.witness));
    const std::vector<bool> expected{false, false, true, false, false, true};
    CHECK(r.witness->values == expected);
  }
  SECTION("count matches direct enumeration on random instances") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      Formula f;
      f.num_variables = 1 + static_cast<int>(rng() % 4);
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
      std::uint64_t direct = 0;
      for (std::uint64_t bits = 0; bits < (1ull << f.num_variables); ++bits) {
        Assignment a;
        for (int v = 0; v < f.num_variables; ++v) a.values.push_back((bits >> v) & 1);
        if (evaluate(f, a)) ++direct;
      }
      const SatResult r = brute_force_sat(f);
      REQUIRE(r.count == direct);
      REQUIRE(r.satisfiable == (direct > 0));
      if (r.satisfiable) CHECK(evaluate(f, *r.witness));
    }
  }
  SECTION("contradiction") {
    const Formula f = parse_dimacs(std::string("p cnf 1 2\n1 0\n-1 0\n")).formula;
    const SatResult r = brute_force_sat(f);
    CHECK_FALSE(r.satisfiable);
    CHECK(r.count == 0);
    CHECK_FALSE(r.witness.has_value());
  }
  SECTION("tautologies count every assignment") {
    const Formula f = parse_dimacs(std::string("p cnf 2 2\n1 -1 0\n2 -2 0\n")).formula;
    CHECK(brute_force_sat(f).count == 4);
  }
}
