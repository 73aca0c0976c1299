#include "harmonizer/match.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <unordered_map>

#include "harmonizer/error.hpp"
#include "harmonizer/util/parallel.hpp"

namespace harmonizer {

namespace {

template <typename Set>
bool sets_intersect(const Set& a, const Set& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

bool tokens_intersect(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  for (const auto& x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) return true;
  }
  return false;
}

double cos_or_zero(const NameProfile& a, const NameProfile& b, bool& degenerate) {
  if (a.embedding.degenerate || b.embedding.degenerate) {
    degenerate = true;
    return 0.0;
  }
  return cosine_similarity(a.embedding, b.embedding);
}

void require_sorted(std::span<const NameProfile> profiles) {
  for (std::size_t i = 1; i < profiles.size(); ++i) {
    if (!(profiles[i - 1].id < profiles[i].id))
      throw ContractError("candidate generation needs profiles sorted by unique id, found '" + profiles[i - 1].id +
                          "' before '" + profiles[i].id + "'");
  }
}

std::vector<CandidatePair> blocked_pairs(std::span<const NameProfile> profiles, const CommonWordList& common,
                                         bool common_tokens_are_keys, bool all_type1, bool all_type2) {
  require_sorted(profiles);
  std::unordered_map<std::string, std::vector<std::uint32_t>> postings;
  std::vector<std::uint32_t> type1;
  std::vector<std::uint32_t> type2;
  for (std::uint32_t i = 0; i < profiles.size(); ++i) {
    const NameProfile& p = profiles[i];
    const bool is1 = p.name_class == NameClass::Type1;
    (is1 ? type1 : type2).push_back(i);
    if (is1 ? all_type1 : all_type2) continue;
    const std::string cls = is1 ? "1" : "2";
    for (const auto& d : p.domains) postings["d" + cls + d].push_back(i);
    if (!is1) continue;
    for (const auto& t : p.tokens) {
      if (common_tokens_are_keys || !common.contains(t)) postings["t" + t].push_back(i);
    }
    if (p.url_eligible) {
      for (const auto& t : p.url_tokens) postings["u" + t].push_back(i);
    }
  }

  std::vector<std::uint64_t> packed;
  auto emit_all = [&](std::vector<std::uint32_t>& ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (std::size_t x = 0; x < ids.size(); ++x) {
      for (std::size_t y = x + 1; y < ids.size(); ++y)
        packed.push_back((static_cast<std::uint64_t>(ids[x]) << 32) | ids[y]);
    }
  };
  for (auto& [_, ids] : postings) emit_all(ids);
  if (all_type1) emit_all(type1);
  if (all_type2) emit_all(type2);

  std::sort(packed.begin(), packed.end());
  packed.erase(std::unique(packed.begin(), packed.end()), packed.end());
  std::vector<CandidatePair> out;
  out.reserve(packed.size());
  for (std::uint64_t v : packed)
    out.push_back({static_cast<std::uint32_t>(v >> 32), static_cast<std::uint32_t>(v & 0xffffffffULL)});
  return out;
}

std::string fmt_real(double x) { return fmt::format("{:.17g}", x); }

}  // namespace

void WeightVector::validate() const {
  for (double w : {token, first_token, url_text, domain, cos}) {
    if (!std::isfinite(w) || w < 0) throw ConfigError("matching weights must be finite and non-negative");
  }
}

std::vector<double> WeightVector::for_class(NameClass c) const {
  if (c == NameClass::Type1) return {token, first_token, url_text, domain, cos};
  return {domain, cos};
}

std::vector<double> ConditionVector::components() const {
  if (name_class == NameClass::Type1)
    return {double(token_common), double(first_token_common), double(url_text_common), double(domain_common), cos};
  return {double(domain_common), cos};
}

double matching_score(std::span<const double> conditions, std::span<const double> weights) {
  if (conditions.size() != weights.size())
    throw ContractError("matching_score: " + std::to_string(conditions.size()) + " conditions but " +
                        std::to_string(weights.size()) + " weights");
  double s = 0.0;
  for (std::size_t i = 0; i < conditions.size(); ++i) s += conditions[i] * weights[i];
  return s;
}

double matching_score(const ConditionVector& c, const WeightVector& w) {
  if (c.name_class == NameClass::Type1)
    return c.token_common * w.token + c.first_token_common * w.first_token + c.url_text_common * w.url_text +
           c.domain_common * w.domain + c.cos * w.cos;
  return c.domain_common * w.domain + c.cos * w.cos;
}

ConditionVector evaluate_conditions_type1(const NameProfile& a, const NameProfile& b) {
  if (a.name_class != NameClass::Type1 || b.name_class != NameClass::Type1)
    throw ContractError("evaluate_conditions_type1 on a non-type1 name");
  ConditionVector c;
  c.name_class = NameClass::Type1;
  c.token_common = tokens_intersect(a.tokens, b.tokens);
  c.first_token_common = c.token_common && !a.tokens.empty() && !b.tokens.empty() && a.tokens[0] == b.tokens[0];
  c.url_text_common = a.url_eligible && b.url_eligible && sets_intersect(a.url_tokens, b.url_tokens);
  c.domain_common = sets_intersect(a.domains, b.domains);
  c.cos = cos_or_zero(a, b, c.cos_degenerate);
  return c;
}

ConditionVector evaluate_conditions_type2(const NameProfile& a, const NameProfile& b) {
  if (a.name_class != NameClass::Type2 || b.name_class != NameClass::Type2)
    throw ContractError("evaluate_conditions_type2 on a non-type2 name");
  ConditionVector c;
  c.name_class = NameClass::Type2;
  c.domain_common = sets_intersect(a.domains, b.domains);
  c.cos = cos_or_zero(a, b, c.cos_degenerate);
  return c;
}

ConditionVector evaluate_conditions(const NameProfile& a, const NameProfile& b) {
  if (a.name_class != b.name_class) throw ContractError("type1 and type2 names are never compared");
  return a.name_class == NameClass::Type1 ? evaluate_conditions_type1(a, b) : evaluate_conditions_type2(a, b);
}

std::vector<CandidatePair> generate_candidate_pairs(std::span<const NameProfile> profiles,
                                                    const CommonWordList& common) {
  return blocked_pairs(profiles, common, false, false, false);
}

std::vector<CandidatePair> generate_candidate_pairs(std::span<const NameProfile> profiles,
                                                    const CommonWordList& common, const WeightVector& weights,
                                                    double threshold) {
  weights.validate();
  const bool all = threshold <= weights.cos;
  const bool common_keys = threshold <= weights.token + weights.first_token + weights.cos;
  return blocked_pairs(profiles, common, common_keys, all, all);
}

std::vector<CandidatePair> all_within_class_pairs(std::span<const NameProfile> profiles) {
  return blocked_pairs(profiles, CommonWordList{}, false, true, true);
}

std::vector<ScoredPair> score_pairs(std::span<const NameProfile> profiles, std::span<const CandidatePair> candidates,
                                    const WeightVector& weights, unsigned threads) {
  std::vector<ScoredPair> out(candidates.size());
  parallel_for(candidates.size(), threads, [&](std::size_t i) {
    const auto [a, b] = candidates[i];
    ScoredPair& sp = out[i];
    sp.a = a;
    sp.b = b;
    sp.id_a = profiles[a].id;
    sp.id_b = profiles[b].id;
    sp.conditions = evaluate_conditions(profiles[a], profiles[b]);
    sp.score = matching_score(sp.conditions, weights);
  });
  return out;
}

void rescore(std::vector<ScoredPair>& pairs, const WeightVector& weights) {
  for (auto& p : pairs) p.score = matching_score(p.conditions, weights);
}

std::string format_pairs_tsv(std::span<const ScoredPair> pairs) {
  std::string out = "id_a\tid_b\ttoken\tfirst\turltext\tdomain\tcos\tscore\n";
  for (const auto& p : pairs) {
    const ConditionVector& c = p.conditions;
    const bool t1 = c.name_class == NameClass::Type1;
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n", p.id_a, p.id_b, t1 ? std::to_string(c.token_common) : "-",
                       t1 ? std::to_string(c.first_token_common) : "-",
                       t1 ? std::to_string(c.url_text_common) : "-", int(c.domain_common), fmt_real(c.cos),
                       fmt_real(p.score));
  }
  return out;
}

}  // namespace harmonizer
