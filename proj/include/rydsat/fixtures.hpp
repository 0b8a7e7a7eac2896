#pragma once

// Worked instances used across tests and documentation: three small formulas
// exercising progressively more inter-clause structure, and a compact planar
// arrangement of the first instance's graph that leaves headroom for the
// out-of-plane hinge transformation.

#include <string>

#include "rydsat/embedding.hpp"
#include "rydsat/formula.hpp"
#include "rydsat/reduction.hpp"

namespace rydsat::fixtures {

inline const char* psi1_dimacs() {
  return "p cnf 6 3\n1 2 3 0\n-1 4 0\n1 5 6 0\n";
}

inline const char* psi2_dimacs() {
  return "p cnf 6 3\n1 2 3 0\n-1 -2 0\n1 5 6 0\n";
}

inline const char* psi3_dimacs() {
  return "p cnf 6 3\n1 2 3 0\n-1 -2 0\n1 -3 6 0\n";
}

inline Formula psi1() { return parse_dimacs(std::string(psi1_dimacs())).formula; }
inline Formula psi2() { return parse_dimacs(std::string(psi2_dimacs())).formula; }
inline Formula psi3() { return parse_dimacs(std::string(psi3_dimacs())).formula; }

// Hand-placed realization of the psi1 graph: the shared negated literal at
// the origin, the three arms at 120 degrees, and both triangle fans spun
// toward each other. The spin packs the layout tightly (the closest non-edged
// pair sits just past the blockade radius), which is what gives the hinge
// rotations room to lower the residual couplings.
inline Embedding g1_compact(const GeometryParams& params = {}) {
  const double d = params.edge_length;
  const double deg = two_pi / 360.0;
  auto polar = [&](double r, double angle_deg) {
    return Vec3{r * std::cos(angle_deg * deg), r * std::sin(angle_deg * deg), 0.0};
  };

  const Vec3 hub{0, 0, 0};            // (1,0), shared negated literal
  const Vec3 c0 = polar(d, 90.0);     // (0,0) contact
  const Vec3 c2 = polar(d, 210.0);    // (2,0) contact
  const Vec3 x4 = polar(d, 330.0);    // (1,1)

  const double spin = 38.0;
  const Vec3 p01 = c0 + polar(d, 60.0 + spin);    // (0,1)
  const Vec3 p02 = c0 + polar(d, 120.0 + spin);   // (0,2)
  const Vec3 p21 = c2 + polar(d, 180.0 - spin);   // (2,1)
  const Vec3 p22 = c2 + polar(d, 240.0 - spin);   // (2,2)

  Embedding e;
  e.params = params;
  e.dimension = 2;
  auto add = [&](int id, int clause, int slot, const Vec3& pos) {
    AtomSite s;
    s.id = id;
    s.role = SiteRole::Literal;
    s.vertex = {clause, slot};
    s.position = pos;
    e.sites.push_back(s);
  };
  add(0, 0, 0, c0);
  add(1, 0, 1, p01);
  add(2, 0, 2, p02);
  add(3, 1, 0, hub);
  add(4, 1, 1, x4);
  add(5, 2, 0, c2);
  add(6, 2, 1, p21);
  add(7, 2, 2, p22);

  const std::pair<int, int> edges[] = {{0, 1}, {0, 2}, {1, 2},  // clause 0 triangle
                                       {3, 4},                  // clause 1 segment
                                       {5, 6}, {5, 7}, {6, 7},  // clause 2 triangle
                                       {0, 3}, {3, 5}};         // inter contacts
  for (auto [a, b] : edges) e.add_edge(a, b);
  e.finalize_edges();
  return e;
}

}  // namespace rydsat::fixtures
