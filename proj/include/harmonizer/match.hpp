#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "harmonizer/embed.hpp"
#include "harmonizer/parse.hpp"

namespace harmonizer {

struct WeightVector {
  double token = 1.0;
  double first_token = 1.0;
  double url_text = 1.0;
  double domain = 1.0;
  double cos = 1.0;

  // Throws ConfigError unless every weight is finite and non-negative.
  void validate() const;
  // (token, first_token, url_text, domain, cos) or (domain, cos).
  std::vector<double> for_class(NameClass c) const;
};

struct ConditionVector {
  NameClass name_class = NameClass::Type1;
  // token, first_token and url_text are only defined for Type1.
  std::uint8_t token_common = 0;
  std::uint8_t first_token_common = 0;
  std::uint8_t url_text_common = 0;
  std::uint8_t domain_common = 0;
  double cos = 0.0;
  // An embedding was degenerate; cos was recorded as 0.
  bool cos_degenerate = false;

  // Five components for Type1, two for Type2, in WeightVector::for_class order.
  std::vector<double> components() const;
};

// Plain dot product. Throws ContractError when the lengths differ.
double matching_score(std::span<const double> conditions, std::span<const double> weights);
double matching_score(const ConditionVector& c, const WeightVector& w);

// Everything matching needs to know about one name.
struct NameProfile {
  std::string id;
  NameClass name_class = NameClass::Type1;
  std::vector<std::string> tokens;
  std::set<std::string> domains;  // after the frequent-domain filter
  std::set<std::string> url_tokens;
  bool url_eligible = false;
  NameEmbedding embedding;
};

ConditionVector evaluate_conditions_type1(const NameProfile& a, const NameProfile& b);
ConditionVector evaluate_conditions_type2(const NameProfile& a, const NameProfile& b);
// Dispatches on the class; ContractError when the classes differ.
ConditionVector evaluate_conditions(const NameProfile& a, const NameProfile& b);

// Indices into the profile array, a < b.
struct CandidatePair {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  friend auto operator<=>(const CandidatePair&, const CandidatePair&) = default;
};

// Profiles must be sorted by strictly increasing id, so index order is id order.
// Emits each within-class pair sharing a key once, sorted. Keys: non-common
// tokens, domains, and url tokens of url-eligible names (Type1); domains (Type2).
std::vector<CandidatePair> generate_candidate_pairs(std::span<const NameProfile> profiles,
                                                    const CommonWordList& common);

// Same keys, widened so that no pair scoring >= threshold under `weights` is
// lost: common tokens join the keys when a shared common token alone can
// reach the threshold, and every within-class pair is emitted when the cosine
// term alone can.
std::vector<CandidatePair> generate_candidate_pairs(std::span<const NameProfile> profiles,
                                                    const CommonWordList& common, const WeightVector& weights,
                                                    double threshold);

// Every within-class pair.
std::vector<CandidatePair> all_within_class_pairs(std::span<const NameProfile> profiles);

struct ScoredPair {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  std::string id_a;
  std::string id_b;
  ConditionVector conditions;
  double score = 0.0;
};

// Evaluates conditions on every candidate (in parallel) and scores them.
// Output follows candidate order.
std::vector<ScoredPair> score_pairs(std::span<const NameProfile> profiles, std::span<const CandidatePair> candidates,
                                    const WeightVector& weights, unsigned threads = 1);

// Recomputes every score from the stored conditions.
void rescore(std::vector<ScoredPair>& pairs, const WeightVector& weights);

// TSV with header `id_a id_b token first urltext domain cos score`; undefined
// Type2 fields are "-", reals use %.17g.
std::string format_pairs_tsv(std::span<const ScoredPair> pairs);

}  // namespace harmonizer
