#include <algorithm>
#include <set>

#include "harmonizer/graph.hpp"

namespace harmonizer {

namespace {

// Single-source shortest paths on the unweighted skeleton.
struct Bfs {
  std::vector<std::uint32_t> order;  // non-decreasing distance
  std::vector<int> dist;
  std::vector<double> sigma;
  std::vector<double> delta;  // Brandes dependency, all targets

  Bfs(const SimilarityGraph& g, std::uint32_t s) : dist(g.node_count(), -1), sigma(g.node_count(), 0.0),
                                                   delta(g.node_count(), 0.0) {
    dist[s] = 0;
    sigma[s] = 1.0;
    order.push_back(s);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const std::uint32_t v = order[head];
      for (const auto& [w, _] : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          order.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const std::uint32_t w = *it;
      for (const auto& [v, _] : g.neighbors(w)) {
        if (dist[v] >= 0 && dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
    }
  }

  bool child(std::uint32_t parent, std::uint32_t c) const { return dist[c] >= 0 && dist[c] == dist[parent] + 1; }
};

}  // namespace

std::vector<double> bridgeness_centrality(const SimilarityGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> score(n, 0.0);
  for (std::uint32_t s = 0; s < n; ++s) {
    const Bfs bfs(g, s);
    for (std::uint32_t v : bfs.order) {
      if (v == s || bfs.dist[v] < 2) continue;  // s must lie outside v's closed neighborhood
      // Drop targets adjacent to v: each such child w of v contributed sigma_sv / sigma_sw.
      double d = bfs.delta[v];
      for (const auto& [w, _] : g.neighbors(v)) {
        if (bfs.child(v, w)) d -= bfs.sigma[v] / bfs.sigma[w];
      }
      score[v] += d;
    }
  }
  for (double& x : score) x = std::max(0.0, x / 2.0);
  return score;
}

std::vector<double> edge_bridgeness_centrality(const SimilarityGraph& g) {
  const auto edges = g.edges();
  std::vector<double> score(edges.size(), 0.0);
  const std::size_t n = g.node_count();
  for (std::uint32_t s = 0; s < n; ++s) {
    const Bfs bfs(g, s);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      auto [u, w, _] = edges[e];
      if (bfs.dist[u] < 0 || bfs.dist[u] == bfs.dist[w]) continue;
      if (bfs.dist[u] > bfs.dist[w]) std::swap(u, w);  // u -> w along the DAG
      if (bfs.dist[u] < 2) continue;                   // s must avoid N[u] and N[w]
      // Targets strictly beyond w, minus those adjacent to w.
      double c = bfs.sigma[u] / bfs.sigma[w] * bfs.delta[w];
      for (const auto& [x, __] : g.neighbors(w)) {
        if (bfs.child(w, x)) c -= bfs.sigma[u] / bfs.sigma[x];
      }
      score[e] += c;
    }
  }
  for (double& x : score) x = std::max(0.0, x / 2.0);
  return score;
}

std::size_t prune_global_bridges(SimilarityGraph& g, double beta, PruneRule rule) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> doomed;
  if (rule == PruneRule::Incident) {
    const auto b = bridgeness_centrality(g);
    for (std::uint32_t v = 0; v < g.node_count(); ++v) {
      if (b[v] <= beta) continue;
      for (const auto& [w, _] : g.neighbors(v)) doomed.emplace(std::min(v, w), std::max(v, w));
    }
  } else {
    const auto edges = g.edges();
    const auto b = edge_bridgeness_centrality(g);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (b[e] > beta) doomed.emplace(std::get<0>(edges[e]), std::get<1>(edges[e]));
    }
  }
  for (const auto& [u, v] : doomed) g.remove_edge(u, v);
  return doomed.size();
}

}  // namespace harmonizer
