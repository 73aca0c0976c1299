#include <map>
#include <numeric>

#include "harmonizer/error.hpp"
#include "harmonizer/graph.hpp"
#include "harmonizer/util/rng.hpp"

namespace harmonizer {

namespace {

struct LevelGraph {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;  // no self entries
  std::vector<double> self;                                         // internal weight, each edge once
  std::vector<double> degree;                                       // incl. 2 * self
};

LevelGraph from_graph(const SimilarityGraph& g) {
  LevelGraph lg;
  const std::size_t n = g.node_count();
  lg.adj.resize(n);
  lg.self.assign(n, 0.0);
  lg.degree.assign(n, 0.0);
  for (std::uint32_t u = 0; u < n; ++u) {
    for (const auto& [v, w] : g.neighbors(u)) {
      lg.adj[u].emplace_back(v, w);
      lg.degree[u] += w;
    }
  }
  return lg;
}

// One round of local moves. Returns the community of every node, or an empty
// vector when no node moved.
std::vector<std::uint32_t> local_moves(const LevelGraph& lg, double m, double resolution, Rng& rng) {
  const std::size_t n = lg.adj.size();
  std::vector<std::uint32_t> comm(n);
  std::iota(comm.begin(), comm.end(), 0u);
  std::vector<double> tot = lg.degree;
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  rng.shuffle(std::span<std::uint32_t>(order));

  std::vector<double> link(n, 0.0);
  std::vector<char> is_touched(n, 0);
  std::vector<std::uint32_t> touched;
  bool moved_any = false;
  const double two_m_sq = 2.0 * m * m;
  for (bool improved = true; improved;) {
    improved = false;
    for (std::uint32_t i : order) {
      const std::uint32_t own = comm[i];
      const double k = lg.degree[i];
      touched.clear();
      for (const auto& [j, w] : lg.adj[i]) {
        const std::uint32_t c = comm[j];
        if (!is_touched[c]) {
          is_touched[c] = 1;
          touched.push_back(c);
        }
        link[c] += w;
      }
      tot[own] -= k;
      std::uint32_t best = own;
      double best_gain = link[own] / m - resolution * tot[own] * k / two_m_sq;
      for (std::uint32_t c : touched) {
        if (c == own) continue;
        const double gain = link[c] / m - resolution * tot[c] * k / two_m_sq;
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best = c;
        }
      }
      tot[best] += k;
      comm[i] = best;
      if (best != own) {
        improved = true;
        moved_any = true;
      }
      for (std::uint32_t c : touched) {
        link[c] = 0.0;
        is_touched[c] = 0;
      }
    }
  }
  if (!moved_any) return {};
  return comm;
}

}  // namespace

Partition louvain(const SimilarityGraph& g, double resolution, std::uint64_t seed) {
  if (!(resolution > 0)) throw ConfigError("louvain: resolution must be > 0");
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> assignment(n);
  std::iota(assignment.begin(), assignment.end(), 0u);
  const double m = g.total_weight();
  if (n == 0 || m <= 0) return Partition::from_labels(assignment);

  LevelGraph lg = from_graph(g);
  for (std::uint64_t level = 0;; ++level) {
    Rng rng(derive_seed(seed, level));
    std::vector<std::uint32_t> comm = local_moves(lg, m, resolution, rng);
    if (comm.empty()) break;
    const Partition dense = Partition::from_labels(comm);
    for (auto& a : assignment) a = dense.community[a];

    LevelGraph next;
    next.adj.resize(dense.count);
    next.self.assign(dense.count, 0.0);
    next.degree.assign(dense.count, 0.0);
    std::vector<std::map<std::uint32_t, double>> merged(dense.count);
    for (std::uint32_t u = 0; u < lg.adj.size(); ++u) {
      const std::uint32_t cu = dense.community[u];
      next.self[cu] += lg.self[u];
      next.degree[cu] += lg.degree[u];
      for (const auto& [v, w] : lg.adj[u]) {
        const std::uint32_t cv = dense.community[v];
        if (cu == cv) {
          if (u < v) next.self[cu] += w;
        } else {
          merged[cu][cv] += w;
        }
      }
    }
    for (std::uint32_t c = 0; c < dense.count; ++c) next.adj[c].assign(merged[c].begin(), merged[c].end());
    if (dense.count == lg.adj.size()) break;
    lg = std::move(next);
  }
  return Partition::from_labels(assignment);
}

}  // namespace harmonizer
