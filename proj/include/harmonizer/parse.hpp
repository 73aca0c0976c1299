#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "harmonizer/util/text.hpp"

namespace harmonizer {

enum class NameClass { Type1, Type2 };

std::string_view to_string(NameClass c);

struct CleanName {
  std::string record_id;
  // Lowercase, punctuation-free, single-spaced.
  std::string cleaned;
  std::vector<std::string> tokens;
  std::optional<NameClass> name_class;
  // Stripping legal designators left nothing; `cleaned` keeps them instead.
  bool degenerate = false;
};

// Legal-form token sequences ("inc", "co ltd", "s a r l"), grouped by language.
class LegalDesignatorDictionary {
 public:
  using Sequence = std::vector<std::string>;

  LegalDesignatorDictionary() = default;

  // One designator per line, optional "lang:" prefix, '#' comments. Entries are
  // normalized like names, so "S.A.R.L." and "s a r l" are the same entry.
  static LegalDesignatorDictionary load(const std::filesystem::path& path);
  static const LegalDesignatorDictionary& builtin();

  void add(std::string_view language, std::string_view designator);

  // Length of the longest designator ending exactly at tokens[end-1], 0 if none.
  std::size_t longest_suffix_match(std::span<const std::string> tokens, std::size_t end) const;
  // Length of the longest designator starting at tokens[begin], 0 if none.
  std::size_t longest_prefix_match(std::span<const std::string> tokens, std::size_t begin) const;

  const std::map<std::string, std::vector<Sequence>>& by_language() const noexcept { return by_language_; }
  std::size_t size() const noexcept { return all_.size(); }

 private:
  std::map<std::string, std::vector<Sequence>> by_language_;
  std::vector<Sequence> all_;
  std::size_t max_length_ = 0;
};

struct CleanOptions {
  text::PunctuationExceptions exceptions = text::default_punctuation_exceptions();
  // Also remove designators in the middle of a name (whole-token matches only).
  bool strip_interior = false;
};

// Longest-match designators removed from the tail until none remains; with
// `interior`, matches anywhere are removed too.
std::vector<std::string> strip_legal_suffixes(std::vector<std::string> tokens, const LegalDesignatorDictionary& dict,
                                              bool interior = false);

// correction substitution -> case/diacritic folding -> punctuation to spaces
// -> whitespace collapse -> designator stripping. name_class is left unset.
CleanName clean_name(std::string_view record_id, std::string_view raw, const std::optional<std::string>& correction,
                     const LegalDesignatorDictionary& dict, const CleanOptions& options = {});
CleanName clean_name(std::string_view raw, const std::optional<std::string>& correction,
                     const LegalDesignatorDictionary& dict, const CleanOptions& options = {});

// Top-n tokens by the number of names containing them (ties: lexicographic).
class CommonWordList {
 public:
  CommonWordList() = default;
  CommonWordList(std::vector<std::string> ordered_words, std::size_t n);

  bool contains(std::string_view token) const;
  const std::vector<std::string>& words() const noexcept { return words_; }
  std::size_t capacity() const noexcept { return n_; }
  std::size_t size() const noexcept { return words_.size(); }

  // One token per line.
  std::string export_text() const;

 private:
  std::vector<std::string> words_;
  std::unordered_set<std::string> lookup_;
  std::size_t n_ = 0;
};

CommonWordList build_common_word_list(std::span<const CleanName> names, std::size_t n);

// Type2 iff every token is a common word. Throws ContractError on empty tokens.
NameClass classify_name_type(std::span<const std::string> tokens, const CommonWordList& common);

}  // namespace harmonizer
