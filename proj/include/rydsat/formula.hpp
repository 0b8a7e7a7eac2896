#pragma once

// CNF data model, DIMACS I/O, and a brute-force satisfiability oracle.
//
// Strictly 3-SAT: clauses hold 1..3 literals. Longer clauses are rejected at
// parse time rather than split.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rydsat {

struct Literal {
  int variable = 1;  // 1-based
  bool negated = false;

  Literal negation() const { return {variable, !negated}; }

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.variable == b.variable && a.negated == b.negated;
  }
  friend bool operator<(const Literal& a, const Literal& b) {
    if (a.variable != b.variable) return a.variable < b.variable;
    return a.negated < b.negated;
  }
};

inline std::string to_string(const Literal& l) {
  return (l.negated ? "~x" : "x") + std::to_string(l.variable);
}

struct Clause {
  std::vector<Literal> literals;  // source order, 1..3 entries, no exact duplicates
};

struct Formula {
  int num_variables = 0;
  std::vector<Clause> clauses;
};

struct Assignment {
  std::vector<bool> values;  // index 0 <-> variable 1

  bool value(int variable) const { return values.at(static_cast<size_t>(variable - 1)); }
  int size() const { return static_cast<int>(values.size()); }
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DimacsResult {
  Formula formula;
  std::vector<std::string> warnings;
};

namespace detail {

inline void validate_clause(std::vector<Literal>& lits, int num_variables, size_t clause_no,
                            std::vector<std::string>& warnings) {
  if (lits.empty())
    throw ParseError("clause " + std::to_string(clause_no) +
                     " is empty (trivially unsatisfiable)");
  std::vector<Literal> unique;
  for (const Literal& l : lits) {
    if (l.variable < 1 || l.variable > num_variables)
      throw ParseError("clause " + std::to_string(clause_no) + ": variable index " +
                       std::to_string(l.variable) + " outside 1.." +
                       std::to_string(num_variables));
    if (std::find(unique.begin(), unique.end(), l) == unique.end())
      unique.push_back(l);
  }
  if (unique.size() != lits.size())
    warnings.push_back("clause " + std::to_string(clause_no) +
                       ": duplicate literals removed");
  if (unique.size() > 3)
    throw ParseError("clause " + std::to_string(clause_no) + " has " +
                     std::to_string(unique.size()) + " literals (3-SAT only)");
  for (size_t i = 0; i < unique.size(); ++i)
    for (size_t j = i + 1; j < unique.size(); ++j)
      if (unique[i] == unique[j].negation()) {
        warnings.push_back("clause " + std::to_string(clause_no) +
                           " is tautological (contains x and ~x)");
        i = unique.size();
        break;
      }
  lits = std::move(unique);
}

}  // namespace detail

inline DimacsResult parse_dimacs(std::istream& in) {
  DimacsResult out;
  std::string line;
  bool have_header = false;
  int declared_clauses = 0;
  std::vector<Literal> current;

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c") continue;
    if (tok[0] == 'c' && tok.size() > 1) continue;
    if (tok == "p") {
      if (have_header) throw ParseError("duplicate 'p' header");
      std::string fmt;
      if (!(ls >> fmt) || fmt != "cnf")
        throw ParseError("malformed header: expected 'p cnf n m'");
      if (!(ls >> out.formula.num_variables >> declared_clauses))
        throw ParseError("malformed header: expected 'p cnf n m'");
      if (out.formula.num_variables < 1 || declared_clauses < 1)
        throw ParseError("header requires n >= 1 and m >= 1");
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError("clause data before 'p cnf' header");
    ls.clear();
    ls.seekg(0);
    int v;
    while (ls >> v) {
      if (v == 0) {
        detail::validate_clause(current, out.formula.num_variables,
                                out.formula.clauses.size() + 1, out.warnings);
        out.formula.clauses.push_back({std::move(current)});
        current.clear();
      } else {
        current.push_back({std::abs(v), v < 0});
      }
    }
    if (!ls.eof()) throw ParseError("non-integer token in clause data: '" + line + "'");
  }
  if (!have_header) throw ParseError("missing 'p cnf' header");
  if (!current.empty()) throw ParseError("last clause not terminated by 0");
  if (static_cast<int>(out.formula.clauses.size()) != declared_clauses)
    throw ParseError("header declares " + std::to_string(declared_clauses) +
                     " clauses but found " + std::to_string(out.formula.clauses.size()));
  return out;
}

inline DimacsResult parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

// Canonical writer: header, one clause per line, LF endings.
inline void write_dimacs(const Formula& f, std::ostream& out) {
  out << "p cnf " << f.num_variables << ' ' << f.clauses.size() << '\n';
  for (const Clause& c : f.clauses) {
    for (const Literal& l : c.literals) out << (l.negated ? -l.variable : l.variable) << ' ';
    out << "0\n";
  }
}

inline std::string write_dimacs(const Formula& f) {
  std::ostringstream out;
  write_dimacs(f, out);
  return out.str();
}

inline bool evaluate(const Formula& f, const Assignment& a) {
  if (a.size() != f.num_variables)
    throw std::invalid_argument("evaluate: assignment covers " + std::to_string(a.size()) +
                                " variables, formula has " +
                                std::to_string(f.num_variables));
  for (const Clause& c : f.clauses) {
    bool sat = false;
    for (const Literal& l : c.literals)
      if (a.value(l.variable) != l.negated) {
        sat = true;
        break;
      }
    if (!sat) return false;
  }
  return true;
}

struct SatResult {
  bool satisfiable = false;
  std::optional<Assignment> witness;  // lexicographically first, x1 = most significant
  std::uint64_t count = 0;
};

inline SatResult brute_force_sat(const Formula& f) {
  if (f.num_variables > 24)
    throw std::invalid_argument("brute_force_sat: n > 24 not enumerable");
  const int n = f.num_variables;
  SatResult res;
  Assignment a;
  a.values.assign(static_cast<size_t>(n), false);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t m = 0; m < total; ++m) {
    // m counts with x1 as the most significant bit so witnesses come out in
    // lexicographic order over (x1, ..., xn).
    for (int i = 0; i < n; ++i)
      a.values[static_cast<size_t>(i)] = (m >> (n - 1 - i)) & 1u;
    if (evaluate(f, a)) {
      ++res.count;
      if (!res.witness) res.witness = a;
    }
  }
  res.satisfiable = res.count > 0;
  return res;
}

}  // namespace rydsat
