#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "harmonizer/embed.hpp"
#include "harmonizer/match.hpp"
#include "harmonizer/parse.hpp"
#include "harmonizer/util/rng.hpp"

namespace test_support {

struct RandomCorpus {
  std::vector<harmonizer::NameProfile> profiles;
  harmonizer::CommonWordList common;
};

// Names of 1-4 tokens drawn from a skewed vocabulary, so some tokens end up
// common and some names are Type2. Domains and url tokens come from small
// pools to force collisions.
inline RandomCorpus random_corpus(std::size_t n, std::uint64_t seed, std::size_t n_common = 12) {
  using namespace harmonizer;
  Rng rng(seed);
  auto skewed = [&](std::size_t k) {
    const double u = rng.uniform();
    return static_cast<std::size_t>(std::floor(k * u * u * u));
  };
  std::vector<CleanName> names(n);
  for (std::size_t i = 0; i < n; ++i) {
    names[i].record_id = "n" + std::to_string(100000 + i);
    const std::size_t len = 1 + rng.below(4);
    for (std::size_t t = 0; t < len; ++t) names[i].tokens.push_back("w" + std::to_string(skewed(400)));
  }
  RandomCorpus out;
  out.common = build_common_word_list(names, n_common);
  std::vector<std::vector<std::string>> docs;
  for (const auto& nm : names) docs.push_back(nm.tokens);
  const auto idf = compute_idf(docs);
  const HashingBackend backend(64, seed);
  for (const auto& nm : names) {
    NameProfile p;
    p.id = nm.record_id;
    p.tokens = nm.tokens;
    p.name_class = classify_name_type(p.tokens, out.common);
    if (rng.uniform() < 0.6) p.domains.insert("d" + std::to_string(skewed(n / 2 + 1)) + ".com");
    if (rng.uniform() < 0.5) {
      p.url_eligible = rng.uniform() < 0.7;
      const std::size_t k = 1 + rng.below(3);
      for (std::size_t t = 0; t < k; ++t) p.url_tokens.insert("u" + std::to_string(skewed(300)));
    }
    p.embedding = embed_name(p.id, p.tokens, backend, idf);
    out.profiles.push_back(std::move(p));
  }
  return out;
}

}  // namespace test_support
