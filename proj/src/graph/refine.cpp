#include <atomic>

#include "harmonizer/graph.hpp"
#include "harmonizer/util/parallel.hpp"
#include "harmonizer/util/rng.hpp"

namespace harmonizer {

Partition refine_communities(const SimilarityGraph& g, const FilterParams& params, unsigned threads) {
  params.validate();
  Partition current = louvain(g, params.resolution, params.seed);
  const int passes = params.refine_until_stable ? static_cast<int>(g.node_count()) + 1 : params.refine_depth - 1;

  for (int pass = 1; pass <= passes; ++pass) {
    const auto groups = current.members();
    std::vector<std::vector<std::uint32_t>> sub_labels(groups.size());
    std::atomic<std::size_t> removed{0};
    parallel_for(groups.size(), threads, [&](std::size_t c) {
      SimilarityGraph sub = g.induced(groups[c]);
      const std::size_t cut = prune_global_bridges(sub, params.bridgeness_threshold, params.prune_rule);
      removed += cut;
      // Untouched communities stay whole.
      if (cut == 0) {
        sub_labels[c].assign(groups[c].size(), 0);
        return;
      }
      const auto seed = derive_seed(derive_seed(params.seed, static_cast<std::uint64_t>(pass)), c);
      sub_labels[c] = louvain(sub, params.resolution, seed).community;
    });

    // Label = (parent community, sub-community), made dense in node order.
    std::vector<std::uint32_t> offset(groups.size() + 1, 0);
    for (std::size_t c = 0; c < groups.size(); ++c) {
      std::uint32_t k = 0;
      for (std::uint32_t x : sub_labels[c]) k = std::max(k, x + 1);
      offset[c + 1] = offset[c] + k;
    }
    std::vector<std::uint32_t> labels(g.node_count());
    for (std::size_t c = 0; c < groups.size(); ++c) {
      for (std::size_t i = 0; i < groups[c].size(); ++i) labels[groups[c][i]] = offset[c] + sub_labels[c][i];
    }
    current = Partition::from_labels(labels);
    if (params.refine_until_stable && removed == 0) break;
  }
  return current;
}

}  // namespace harmonizer
