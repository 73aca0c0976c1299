#include "harmonizer/graph.hpp"

#include <algorithm>
#include <cmath>

#include "harmonizer/error.hpp"

namespace harmonizer {

SimilarityGraph::SimilarityGraph(std::vector<std::string> labels)
    : labels_(std::move(labels)), adjacency_(labels_.size()) {}

std::uint32_t SimilarityGraph::add_node(std::string label) {
  labels_.push_back(std::move(label));
  adjacency_.emplace_back();
  return static_cast<std::uint32_t>(labels_.size() - 1);
}

void SimilarityGraph::add_edge(std::uint32_t u, std::uint32_t v, double weight) {
  if (u >= node_count() || v >= node_count()) throw ContractError("add_edge: node index out of range");
  if (u == v) throw ContractError("add_edge: self-loop on " + labels_[u]);
  if (!std::isfinite(weight)) throw ContractError("add_edge: non-finite weight");
  auto insert = [&](std::uint32_t from, std::uint32_t to) {
    auto& adj = adjacency_[from];
    const auto it = std::lower_bound(adj.begin(), adj.end(), to, [](const Neighbor& n, std::uint32_t x) { return n.first < x; });
    if (it != adj.end() && it->first == to) throw ContractError("add_edge: duplicate edge");
    adj.insert(it, {to, weight});
  };
  insert(u, v);
  insert(v, u);
  ++edges_;
}

bool SimilarityGraph::remove_edge(std::uint32_t u, std::uint32_t v) {
  if (u >= node_count() || v >= node_count()) return false;
  auto erase = [&](std::uint32_t from, std::uint32_t to) {
    auto& adj = adjacency_[from];
    const auto it = std::lower_bound(adj.begin(), adj.end(), to, [](const Neighbor& n, std::uint32_t x) { return n.first < x; });
    if (it == adj.end() || it->first != to) return false;
    adj.erase(it);
    return true;
  };
  if (!erase(u, v)) return false;
  erase(v, u);
  --edges_;
  return true;
}

bool SimilarityGraph::has_edge(std::uint32_t u, std::uint32_t v) const {
  if (u >= node_count() || v >= node_count()) return false;
  const auto& adj = adjacency_[u];
  return std::binary_search(adj.begin(), adj.end(), Neighbor{v, 0.0},
                            [](const Neighbor& a, const Neighbor& b) { return a.first < b.first; });
}

double SimilarityGraph::total_weight() const {
  double w = 0.0;
  for (std::uint32_t u = 0; u < node_count(); ++u) {
    for (const auto& [v, x] : adjacency_[u]) {
      if (u < v) w += x;
    }
  }
  return w;
}

std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> SimilarityGraph::edges() const {
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> out;
  out.reserve(edges_);
  for (std::uint32_t u = 0; u < node_count(); ++u) {
    for (const auto& [v, w] : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v, w);
    }
  }
  return out;
}

SimilarityGraph SimilarityGraph::induced(std::span<const std::uint32_t> nodes) const {
  std::vector<std::string> labels;
  labels.reserve(nodes.size());
  std::vector<std::int64_t> position(node_count(), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    labels.push_back(labels_.at(nodes[i]));
    position[nodes[i]] = static_cast<std::int64_t>(i);
  }
  SimilarityGraph sub(std::move(labels));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (const auto& [v, w] : adjacency_[nodes[i]]) {
      const auto j = position[v];
      if (j > static_cast<std::int64_t>(i)) sub.add_edge(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), w);
    }
  }
  return sub;
}

void FilterParams::validate() const {
  if (!std::isfinite(threshold)) throw ConfigError("graph.threshold must be finite");
  if (!std::isfinite(resolution) || resolution <= 0) throw ConfigError("graph.resolution must be > 0");
  if (!std::isfinite(bridgeness_threshold)) throw ConfigError("graph.bridgeness_threshold must be finite");
  if (!std::isfinite(location_boost) || location_boost < 0) throw ConfigError("graph.location_boost must be >= 0");
  if (refine_depth < 1) throw ConfigError("graph.refine_depth must be >= 1");
}

SimilarityGraph build_graph(std::vector<std::string> labels, std::span<const ScoredPair> pairs,
                            std::span<const std::set<LocationKey>> locations, const FilterParams& params) {
  if (!locations.empty() && locations.size() != labels.size())
    throw ContractError("build_graph: one location set per node expected");
  SimilarityGraph g(std::move(labels));
  for (const auto& p : pairs) {
    const bool shared = !locations.empty() && share_location(locations[p.a], locations[p.b]);
    const double boosted = p.score + (shared ? params.location_boost : 0.0);
    const double tested = params.boost_before_threshold ? boosted : p.score;
    if (tested < params.threshold || boosted <= 0.0) continue;
    g.add_edge(p.a, p.b, boosted);
  }
  return g;
}

Partition Partition::from_labels(std::span<const std::uint32_t> labels) {
  Partition p;
  p.community.resize(labels.size());
  std::vector<std::int64_t> lookup;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::uint32_t l = labels[i];
    if (l >= lookup.size()) lookup.resize(static_cast<std::size_t>(l) + 1, -1);
    if (lookup[l] < 0) lookup[l] = static_cast<std::int64_t>(p.count++);
    p.community[i] = static_cast<std::uint32_t>(lookup[l]);
  }
  return p;
}

std::vector<std::vector<std::uint32_t>> Partition::members() const {
  std::vector<std::vector<std::uint32_t>> out(count);
  for (std::uint32_t v = 0; v < community.size(); ++v) out[community[v]].push_back(v);
  return out;
}

double modularity(const SimilarityGraph& g, const Partition& p, double resolution) {
  const double m = g.total_weight();
  if (m <= 0) return 0.0;
  std::vector<double> internal(p.count, 0.0);
  std::vector<double> degree(p.count, 0.0);
  for (std::uint32_t u = 0; u < g.node_count(); ++u) {
    for (const auto& [v, w] : g.neighbors(u)) {
      degree[p.community[u]] += w;
      if (u < v && p.community[u] == p.community[v]) internal[p.community[u]] += w;
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < p.count; ++c) {
    const double share = degree[c] / (2.0 * m);
    q += internal[c] / m - resolution * share * share;
  }
  return q;
}

std::string_view to_string(NamingStrategy s) { return s == NamingStrategy::Centroid ? "centroid" : "volume"; }

std::string_view to_string(PruneRule r) { return r == PruneRule::Incident ? "incident" : "edge_bridgeness"; }

}  // namespace harmonizer
