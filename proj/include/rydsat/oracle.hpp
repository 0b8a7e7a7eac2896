#pragma once

// Exact maximum-independent-set enumeration by branch and bound.
//
// The bound is a greedy clique cover: any clique contributes at most one
// vertex to an independent set, so the number of cliques covering the open
// vertices bounds what remains. Instances here are desk-scale (|V| <= 40).

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rydsat/reduction.hpp"

namespace rydsat {

struct MisResult {
  int alpha = 0;
  std::vector<std::vector<int>> maximum_sets;  // each sorted; list sorted lexicographically
};

namespace detail {

class MisSearch {
 public:
  MisSearch(int n, const std::vector<std::vector<int>>& adj) : n_(n), adj_(adj) {}

  MisResult run() {
    std::vector<int> open(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) open[static_cast<size_t>(i)] = i;
    std::vector<int> chosen;
    expand(open, chosen);
    std::sort(best_sets_.begin(), best_sets_.end());
    best_sets_.erase(std::unique(best_sets_.begin(), best_sets_.end()), best_sets_.end());
    return {best_, std::move(best_sets_)};
  }

 private:
  int clique_cover_bound(const std::vector<int>& open) const {
    // Greedy: repeatedly start a clique at the first uncovered vertex and
    // absorb vertices adjacent to every member.
    std::vector<bool> covered(static_cast<size_t>(n_), false);
    int cliques = 0;
    for (int v : open) {
      if (covered[static_cast<size_t>(v)]) continue;
      ++cliques;
      covered[static_cast<size_t>(v)] = true;
      std::vector<int> clique{v};
      for (int u : open) {
        if (covered[static_cast<size_t>(u)]) continue;
        bool all = true;
        for (int w : clique)
          if (!std::binary_search(adj_[static_cast<size_t>(u)].begin(),
                                  adj_[static_cast<size_t>(u)].end(), w)) {
            all = false;
            break;
          }
        if (all) {
          covered[static_cast<size_t>(u)] = true;
          clique.push_back(u);
        }
      }
    }
    return cliques;
  }

  void expand(std::vector<int>& open, std::vector<int>& chosen) {
    if (open.empty()) {
      const int size = static_cast<int>(chosen.size());
      if (size > best_) {
        best_ = size;
        best_sets_.clear();
      }
      if (size == best_) {
        std::vector<int> s = chosen;
        std::sort(s.begin(), s.end());
        best_sets_.push_back(std::move(s));
      }
      return;
    }
    const int bound = static_cast<int>(chosen.size()) + clique_cover_bound(open);
    if (bound < best_) return;

    // Branch on the max-degree open vertex: include it, then exclude it.
    int v = open[0], vd = -1;
    for (int u : open) {
      int d = 0;
      for (int w : adj_[static_cast<size_t>(u)])
        if (std::find(open.begin(), open.end(), w) != open.end()) ++d;
      if (d > vd) {
        vd = d;
        v = u;
      }
    }

    std::vector<int> without_nbhd;
    for (int u : open)
      if (u != v && !std::binary_search(adj_[static_cast<size_t>(v)].begin(),
                                        adj_[static_cast<size_t>(v)].end(), u))
        without_nbhd.push_back(u);
    chosen.push_back(v);
    expand(without_nbhd, chosen);
    chosen.pop_back();

    std::vector<int> without_v;
    for (int u : open)
      if (u != v) without_v.push_back(u);
    expand(without_v, chosen);
  }

  int n_;
  const std::vector<std::vector<int>>& adj_;
  int best_ = 0;
  std::vector<std::vector<int>> best_sets_;
};

}  // namespace detail

inline MisResult enumerate_mis(int num_vertices, const std::vector<std::pair<int, int>>& edges) {
  if (num_vertices > 40)
    throw std::invalid_argument("enumerate_mis: |V| > 40 not enumerable exactly");
  std::vector<std::vector<int>> adj(static_cast<size_t>(num_vertices));
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= num_vertices || b >= num_vertices || a == b)
      throw std::invalid_argument("enumerate_mis: bad edge");
    adj[static_cast<size_t>(a)].push_back(b);
    adj[static_cast<size_t>(b)].push_back(a);
  }
  for (auto& nb : adj) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  detail::MisSearch search(num_vertices, adj);
  return search.run();
}

inline MisResult enumerate_mis(const MisGraph& g) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(g.edges.size());
  for (const GraphEdge& e : g.edges) edges.emplace_back(e.a, e.b);
  return enumerate_mis(g.num_vertices(), edges);
}

}  // namespace rydsat
