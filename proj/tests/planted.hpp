#pragma once

#include <cstdint>
#include <vector>

#include "harmonizer/graph.hpp"
#include "harmonizer/util/rng.hpp"

namespace test_support {

struct PlantedGraph {
  harmonizer::SimilarityGraph graph;
  std::vector<std::uint32_t> block;  // planted block of each node
};

// Blocks of the given sizes, unit-weight edges with probability p_in inside a
// block and p_out across blocks.
inline PlantedGraph planted_partition(const std::vector<std::size_t>& sizes, double p_in, double p_out,
                                      std::uint64_t seed) {
  harmonizer::Rng rng(seed);
  PlantedGraph out;
  for (std::uint32_t b = 0; b < sizes.size(); ++b) {
    for (std::size_t i = 0; i < sizes[b]; ++i) {
      out.graph.add_node("v" + std::to_string(out.block.size()));
      out.block.push_back(b);
    }
  }
  const auto n = static_cast<std::uint32_t>(out.block.size());
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t v = u + 1; v < n; ++v) {
      if (rng.uniform() < (out.block[u] == out.block[v] ? p_in : p_out)) out.graph.add_edge(u, v, 1.0);
    }
  }
  return out;
}

}  // namespace test_support
