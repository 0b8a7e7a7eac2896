#pragma once

// JSON serialization for the pipeline artifacts. Keys are emitted in a fixed
// order and configurations are written as bitstrings (atom 0 leftmost), so
// identical inputs serialize byte-identically.

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "rydsat/embedding.hpp"
#include "rydsat/readout.hpp"
#include "rydsat/reduction.hpp"

namespace rydsat {

using Json = nlohmann::ordered_json;

class JsonError : public std::runtime_error {
 public:
  explicit JsonError(const std::string& msg) : std::runtime_error(msg) {}
};

inline Json graph_to_json(const MisGraph& g) {
  Json j;
  j["num_clauses"] = g.num_clauses;
  Json verts = Json::array();
  for (int v = 0; v < g.num_vertices(); ++v) {
    const VertexId& id = g.vertices[static_cast<size_t>(v)];
    const Literal& lit = g.labels[static_cast<size_t>(v)];
    verts.push_back({{"clause", id.clause},
                     {"slot", id.slot},
                     {"variable", lit.variable},
                     {"negated", lit.negated}});
  }
  j["vertices"] = std::move(verts);
  Json edges = Json::array();
  for (const GraphEdge& e : g.edges)
    edges.push_back({{"a", e.a},
                     {"b", e.b},
                     {"kind", e.kind == EdgeKind::Intra ? "intra" : "inter"}});
  j["edges"] = std::move(edges);
  return j;
}

inline MisGraph graph_from_json(const Json& j) {
  try {
    MisGraph g;
    g.num_clauses = j.at("num_clauses").get<int>();
    for (const Json& v : j.at("vertices")) {
      g.vertices.push_back({v.at("clause").get<int>(), v.at("slot").get<int>()});
      g.labels.push_back({v.at("variable").get<int>(), v.at("negated").get<bool>()});
    }
    for (const Json& e : j.at("edges")) {
      const std::string kind = e.at("kind").get<std::string>();
      if (kind != "intra" && kind != "inter") throw JsonError("graph: bad edge kind");
      g.edges.push_back({e.at("a").get<int>(), e.at("b").get<int>(),
                         kind == "intra" ? EdgeKind::Intra : EdgeKind::Inter});
    }
    return g;
  } catch (const Json::exception& ex) {
    throw JsonError(std::string("graph: ") + ex.what());
  }
}

inline Json embedding_to_json(const Embedding& e) {
  Json j;
  j["dimension"] = e.dimension;
  j["params"] = {{"edge_length", e.params.edge_length},
                 {"blockade_radius", e.params.blockade_radius},
                 {"edge_tolerance", e.params.edge_tolerance},
                 {"min_separation", e.params.min_separation}};
  Json sites = Json::array();
  for (const AtomSite& s : e.sites) {
    Json js;
    js["id"] = s.id;
    js["role"] = s.role == SiteRole::Literal ? "literal" : "auxiliary";
    if (s.role == SiteRole::Literal) {
      js["clause"] = s.vertex.clause;
      js["slot"] = s.vertex.slot;
    } else {
      js["wire"] = s.wire_id;
      js["wire_pos"] = s.wire_pos;
    }
    js["position"] = {s.position.x, s.position.y, s.position.z};
    sites.push_back(std::move(js));
  }
  j["sites"] = std::move(sites);
  Json wires = Json::array();
  for (const Wire& w : e.wires) {
    wires.push_back({{"id", w.id},
                     {"endpoint_a", {{"clause", w.endpoint_a.clause}, {"slot", w.endpoint_a.slot}}},
                     {"endpoint_b", {{"clause", w.endpoint_b.clause}, {"slot", w.endpoint_b.slot}}},
                     {"chain", w.chain}});
  }
  j["wires"] = std::move(wires);
  Json edges = Json::array();
  for (auto [a, b] : e.physical_edges) edges.push_back({a, b});
  j["physical_edges"] = std::move(edges);
  return j;
}

inline Embedding embedding_from_json(const Json& j) {
  try {
    Embedding e;
    e.dimension = j.at("dimension").get<int>();
    const Json& p = j.at("params");
    e.params.edge_length = p.at("edge_length").get<double>();
    e.params.blockade_radius = p.at("blockade_radius").get<double>();
    e.params.edge_tolerance = p.at("edge_tolerance").get<double>();
    e.params.min_separation = p.at("min_separation").get<double>();
    for (const Json& js : j.at("sites")) {
      AtomSite s;
      s.id = js.at("id").get<int>();
      const std::string role = js.at("role").get<std::string>();
      if (role == "literal") {
        s.role = SiteRole::Literal;
        s.vertex = {js.at("clause").get<int>(), js.at("slot").get<int>()};
      } else if (role == "auxiliary") {
        s.role = SiteRole::Auxiliary;
        s.wire_id = js.at("wire").get<int>();
        s.wire_pos = js.at("wire_pos").get<int>();
      } else {
        throw JsonError("embedding: bad site role");
      }
      const Json& pos = js.at("position");
      s.position = {pos.at(0).get<double>(), pos.at(1).get<double>(), pos.at(2).get<double>()};
      e.sites.push_back(std::move(s));
    }
    for (const Json& jw : j.at("wires")) {
      Wire w;
      w.id = jw.at("id").get<int>();
      w.endpoint_a = {jw.at("endpoint_a").at("clause").get<int>(),
                      jw.at("endpoint_a").at("slot").get<int>()};
      w.endpoint_b = {jw.at("endpoint_b").at("clause").get<int>(),
                      jw.at("endpoint_b").at("slot").get<int>()};
      w.chain = jw.at("chain").get<std::vector<int>>();
      e.wires.push_back(std::move(w));
    }
    for (const Json& je : j.at("physical_edges"))
      e.physical_edges.emplace_back(je.at(0).get<int>(), je.at(1).get<int>());
    e.finalize_edges();
    return e;
  } catch (const Json::exception& ex) {
    throw JsonError(std::string("embedding: ") + ex.what());
  }
}

inline Json counts_to_json(const Counts& c) {
  Json j;
  j["num_atoms"] = c.num_atoms;
  j["total"] = c.total;
  Json by = Json::object();
  for (const auto& [cfg, n] : c.by_config) by[to_bitstring(cfg, c.num_atoms)] = n;
  j["counts"] = std::move(by);
  return j;
}

inline Counts counts_from_json(const Json& j) {
  try {
    Counts c;
    c.num_atoms = j.at("num_atoms").get<int>();
    for (const auto& [key, val] : j.at("counts").items()) {
      const std::uint64_t n = val.get<std::uint64_t>();
      c.by_config[from_bitstring(key)] = n;
      c.total += n;
    }
    if (j.contains("total") && j.at("total").get<std::uint64_t>() != c.total)
      throw JsonError("counts: total does not match entries");
    return c;
  } catch (const Json::exception& ex) {
    throw JsonError(std::string("counts: ") + ex.what());
  }
}

inline Json distribution_to_json(const Distribution& d) {
  Json j;
  j["num_atoms"] = d.num_atoms;
  Json by = Json::object();
  for (const auto& [cfg, p] : d.p) by[to_bitstring(cfg, d.num_atoms)] = p;
  j["probabilities"] = std::move(by);
  return j;
}

inline Distribution distribution_from_json(const Json& j) {
  try {
    Distribution d;
    d.num_atoms = j.at("num_atoms").get<int>();
    for (const auto& [key, val] : j.at("probabilities").items())
      d.p[from_bitstring(key)] = val.get<double>();
    return d;
  } catch (const Json::exception& ex) {
    throw JsonError(std::string("distribution: ") + ex.what());
  }
}

}  // namespace rydsat
