#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "harmonizer/embed.hpp"
#include "harmonizer/ingest.hpp"
#include "harmonizer/match.hpp"

namespace harmonizer {

// Undirected, weighted, no self-loops, no parallel edges. Nodes are dense
// indices with a string label each.
class SimilarityGraph {
 public:
  using Neighbor = std::pair<std::uint32_t, double>;

  SimilarityGraph() = default;
  explicit SimilarityGraph(std::vector<std::string> labels);

  std::uint32_t add_node(std::string label);
  // Throws ContractError on a self-loop, a bad index, a duplicate edge or a
  // non-finite weight.
  void add_edge(std::uint32_t u, std::uint32_t v, double weight);
  bool remove_edge(std::uint32_t u, std::uint32_t v);
  bool has_edge(std::uint32_t u, std::uint32_t v) const;

  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return edges_; }
  const std::string& label(std::uint32_t v) const { return labels_.at(v); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  // Sorted by neighbor index.
  const std::vector<Neighbor>& neighbors(std::uint32_t v) const { return adjacency_.at(v); }
  double total_weight() const;

  // Edges (u < v) in lexicographic order.
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> edges() const;

  // Subgraph on `nodes` (in that order); node i of the result is nodes[i].
  SimilarityGraph induced(std::span<const std::uint32_t> nodes) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::size_t edges_ = 0;
};

enum class NamingStrategy { Centroid, Volume };
enum class PruneRule { Incident, EdgeBridgeness };

struct FilterParams {
  double threshold = 3.9;
  double resolution = 1.0;
  double bridgeness_threshold = 1.0;
  double location_boost = 1.0;
  std::uint64_t seed = 0;
  NamingStrategy naming = NamingStrategy::Centroid;
  PruneRule prune_rule = PruneRule::Incident;
  // 1 = Louvain only, 2 = one prune + re-cluster pass, and so on.
  int refine_depth = 2;
  // Keep refining until a pass removes no edge (refine_depth is then ignored).
  bool refine_until_stable = false;
  // Compare score + boost against the threshold instead of the bare score.
  bool boost_before_threshold = false;

  // Throws ConfigError on out-of-range values.
  void validate() const;
};

// Node i is labels[i]; locations[i] is node i's location set. Edge when the
// score reaches the threshold; weight = score + boost for shared locations.
// Edges with weight <= 0 are dropped since modularity needs positive weights.
SimilarityGraph build_graph(std::vector<std::string> labels, std::span<const ScoredPair> pairs,
                            std::span<const std::set<LocationKey>> locations, const FilterParams& params);

// community[v] for every node; ids dense, numbered by first appearance in node order.
struct Partition {
  std::vector<std::uint32_t> community;
  std::size_t count = 0;

  // Renumbers densely by first appearance.
  static Partition from_labels(std::span<const std::uint32_t> labels);
  std::vector<std::vector<std::uint32_t>> members() const;
};

double modularity(const SimilarityGraph& g, const Partition& p, double resolution = 1.0);

// Multi-level Louvain. Visit order is shuffled with a seeded generator, so the
// result is a pure function of (graph, resolution, seed).
Partition louvain(const SimilarityGraph& g, double resolution, std::uint64_t seed);

// Shortest-path betweenness on the unweighted skeleton, counting only
// unordered endpoint pairs outside the node's closed neighborhood.
std::vector<double> bridgeness_centrality(const SimilarityGraph& g);

// Same restriction for edges: endpoints outside both closed neighborhoods.
// Same order as g.edges().
std::vector<double> edge_bridgeness_centrality(const SimilarityGraph& g);

// Incident: drop every edge touching a node with bridgeness > beta.
// EdgeBridgeness: drop every edge whose own bridgeness > beta.
// Returns the number of removed edges.
std::size_t prune_global_bridges(SimilarityGraph& g, double beta, PruneRule rule = PruneRule::Incident);

// Louvain, then per pass: prune bridges inside each community and re-cluster
// only the communities that lost an edge.
Partition refine_communities(const SimilarityGraph& g, const FilterParams& params, unsigned threads = 1);

struct NamingMember {
  std::string record_id;
  std::string raw_name;
  std::string cleaned;
  std::uint64_t patent_count = 0;
  const NameEmbedding* embedding = nullptr;  // null or degenerate: not a centroid candidate
};

// Index of the member with the largest mean cosine to the other members. Ties
// (within 1e-12): smaller cleaned name, then smaller record id. Falls back to
// volume when no member has a usable embedding.
std::size_t name_community_centroid(std::span<const NamingMember> members);
// Index of the member with the most patents. Ties: smaller raw name, then record id.
std::size_t name_community_volume(std::span<const NamingMember> members);

std::string_view to_string(NamingStrategy s);
std::string_view to_string(PruneRule r);

}  // namespace harmonizer
