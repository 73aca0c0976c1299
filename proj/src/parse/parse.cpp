#include "harmonizer/parse.hpp"

#include <algorithm>
#include <unordered_map>

#include "harmonizer/error.hpp"

namespace harmonizer {

std::string_view to_string(NameClass c) { return c == NameClass::Type1 ? "type1" : "type2"; }

std::vector<std::string> strip_legal_suffixes(std::vector<std::string> tokens, const LegalDesignatorDictionary& dict,
                                              bool interior) {
  for (;;) {
    const std::size_t n = dict.longest_suffix_match(tokens, tokens.size());
    if (n == 0) break;
    tokens.resize(tokens.size() - n);
  }
  if (!interior) return tokens;

  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size();) {
    const std::size_t n = dict.longest_prefix_match(tokens, i);
    if (n > 0) {
      i += n;
    } else {
      kept.push_back(std::move(tokens[i]));
      ++i;
    }
  }
  return kept;
}

CleanName clean_name(std::string_view record_id, std::string_view raw, const std::optional<std::string>& correction,
                     const LegalDesignatorDictionary& dict, const CleanOptions& options) {
  const std::string_view source = correction && !correction->empty() ? std::string_view(*correction) : raw;
  CleanName out;
  out.record_id = std::string(record_id);
  const std::string normalized = text::normalize(source, options.exceptions);
  auto tokens = text::split_tokens(normalized);
  auto stripped = strip_legal_suffixes(tokens, dict, options.strip_interior);
  if (stripped.empty()) {
    out.degenerate = true;
    out.tokens = std::move(tokens);
  } else {
    out.tokens = std::move(stripped);
  }
  out.cleaned = text::join(out.tokens, " ");
  return out;
}

CleanName clean_name(std::string_view raw, const std::optional<std::string>& correction,
                     const LegalDesignatorDictionary& dict, const CleanOptions& options) {
  return clean_name("", raw, correction, dict, options);
}

CommonWordList::CommonWordList(std::vector<std::string> ordered_words, std::size_t n) : n_(n) {
  if (ordered_words.size() > n) ordered_words.resize(n);
  words_ = std::move(ordered_words);
  lookup_.insert(words_.begin(), words_.end());
}

bool CommonWordList::contains(std::string_view token) const { return lookup_.contains(std::string(token)); }

std::string CommonWordList::export_text() const {
  std::string out;
  for (const auto& w : words_) {
    out += w;
    out += '\n';
  }
  return out;
}

CommonWordList build_common_word_list(std::span<const CleanName> names, std::size_t n) {
  std::unordered_map<std::string, std::size_t> presence;
  for (const auto& name : names) {
    std::vector<std::string> distinct = name.tokens;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (auto& t : distinct) ++presence[std::move(t)];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(presence.begin(), presence.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<std::string> words;
  for (std::size_t i = 0; i < ranked.size() && i < n; ++i) words.push_back(std::move(ranked[i].first));
  return CommonWordList(std::move(words), n);
}

NameClass classify_name_type(std::span<const std::string> tokens, const CommonWordList& common) {
  if (tokens.empty()) throw ContractError("classify_name_type: empty token list");
  const bool all_common = std::all_of(tokens.begin(), tokens.end(), [&](const auto& t) { return common.contains(t); });
  return all_common ? NameClass::Type2 : NameClass::Type1;
}

}  // namespace harmonizer
