#include <algorithm>
#include <fstream>

#include "harmonizer/error.hpp"
#include "harmonizer/parse.hpp"

namespace harmonizer {

namespace {

struct Entry {
  const char* language;
  const char* designator;
};

// Legal forms of the most frequent filing languages. Kept identical to
// data/legal_designators.txt.
const Entry kBuiltin[] = {
    {"en", "inc"}, {"en", "incorporated"}, {"en", "corp"}, {"en", "corporation"}, {"en", "co"},
    {"en", "company"}, {"en", "ltd"}, {"en", "limited"}, {"en", "llc"}, {"en", "l l c"}, {"en", "llp"},
    {"en", "l l p"}, {"en", "lp"}, {"en", "l p"}, {"en", "plc"}, {"en", "p l c"}, {"en", "pllc"},
    {"en", "co ltd"}, {"en", "co inc"}, {"en", "corp ltd"}, {"en", "pty"}, {"en", "pty ltd"}, {"en", "pte"},
    {"en", "pte ltd"}, {"en", "pvt"}, {"en", "pvt ltd"}, {"en", "private limited"}, {"en", "lc"},
    {"en", "ltd co"}, {"de", "gmbh"}, {"de", "g m b h"}, {"de", "mbh"}, {"de", "ag"}, {"de", "a g"}, {"de", "aktiengesellschaft"},
    {"de", "kg"}, {"de", "k g"}, {"de", "kgaa"}, {"de", "gmbh co kg"}, {"de", "gmbh and co kg"},
    {"de", "gmbh und co kg"}, {"de", "co kg"}, {"de", "ohg"}, {"de", "e v"}, {"de", "ev"}, {"de", "ug"},
    {"fr", "sa"}, {"fr", "s a"}, {"fr", "sas"}, {"fr", "s a s"}, {"fr", "sarl"}, {"fr", "s a r l"},
    {"fr", "sasu"}, {"fr", "sca"}, {"fr", "snc"}, {"fr", "eurl"}, {"it", "spa"}, {"it", "s p a"},
    {"it", "srl"}, {"it", "s r l"}, {"it", "sapa"}, {"it", "scarl"}, {"it", "s c a r l"}, {"es", "sl"},
    {"es", "s l"}, {"es", "sau"}, {"es", "s a u"}, {"es", "sa de cv"}, {"es", "s a de c v"},
    {"es", "sociedad anonima"}, {"pt", "ltda"}, {"pt", "lda"}, {"nl", "bv"}, {"nl", "b v"}, {"nl", "nv"},
    {"nl", "n v"}, {"nl", "vof"}, {"sv", "ab"}, {"sv", "a b"}, {"fi", "oy"}, {"fi", "oyj"}, {"no", "asa"},
    {"no", "as"}, {"da", "a s"}, {"da", "aps"}, {"da", "a p s"}, {"sr", "a d"}, {"sr", "d o o"},
    {"sr", "doo"}, {"pl", "sp z o o"}, {"pl", "spzoo"}, {"hu", "kft"}, {"hu", "zrt"}, {"ru", "ooo"},
    {"ru", "zao"}, {"ru", "oao"}, {"ja", "kk"}, {"ja", "k k"}, {"ja", "kabushiki kaisha"},
    {"ja", "kabushikikaisha"}, {"ja", "yk"}, {"ms", "sdn bhd"}, {"ms", "bhd"}, {"id", "tbk"},
};

}  // namespace

void LegalDesignatorDictionary::add(std::string_view language, std::string_view designator) {
  Sequence seq = text::split_tokens(text::normalize(designator));
  if (seq.empty()) return;
  if (std::find(all_.begin(), all_.end(), seq) == all_.end()) {
    max_length_ = std::max(max_length_, seq.size());
    all_.push_back(seq);
  }
  by_language_[std::string(language)].push_back(std::move(seq));
}

LegalDesignatorDictionary LegalDesignatorDictionary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open legal designator dictionary " + path.string());
  LegalDesignatorDictionary dict;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = text::trim(line);
    if (line.empty()) continue;
    std::string language = "any";
    const auto colon = line.find(':');
    if (colon != std::string::npos) {
      language = text::trim(std::string_view(line).substr(0, colon));
      line = line.substr(colon + 1);
    }
    dict.add(language, line);
  }
  return dict;
}

const LegalDesignatorDictionary& LegalDesignatorDictionary::builtin() {
  static const LegalDesignatorDictionary dict = [] {
    LegalDesignatorDictionary d;
    for (const auto& e : kBuiltin) d.add(e.language, e.designator);
    return d;
  }();
  return dict;
}

std::size_t LegalDesignatorDictionary::longest_suffix_match(std::span<const std::string> tokens,
                                                            std::size_t end) const {
  std::size_t best = 0;
  for (const auto& seq : all_) {
    if (seq.size() > end || seq.size() <= best) continue;
    if (std::equal(seq.begin(), seq.end(), tokens.begin() + static_cast<long>(end - seq.size()))) best = seq.size();
  }
  return best;
}

std::size_t LegalDesignatorDictionary::longest_prefix_match(std::span<const std::string> tokens,
                                                            std::size_t begin) const {
  std::size_t best = 0;
  for (const auto& seq : all_) {
    if (begin + seq.size() > tokens.size() || seq.size() <= best) continue;
    if (std::equal(seq.begin(), seq.end(), tokens.begin() + static_cast<long>(begin))) best = seq.size();
  }
  return best;
}

}  // namespace harmonizer
