#include <unicode/uchar.h>

#include <fstream>

#include "harmonizer/error.hpp"
#include "harmonizer/ingest.hpp"
#include "harmonizer/util/text.hpp"

namespace harmonizer {

namespace {

// Kept identical to data/institution_keywords.txt.
const char* const kInstitutionKeywords[] = {
    "university", "universities", "universite", "universitat", "universitaet", "universita", "universidad",
    "universidade", "universiteit", "universitet", "uniwersytet", "college", "polytechnic", "politecnico",
    "polytechnique", "hochschule", "school of medicine", "institute of technology", "institute of science",
    "research institute", "institut national", "istituto", "instituto", "fraunhofer", "max planck", "cnrs",
    "centre national de la recherche scientifique", "commissariat a l energie atomique", "hospital",
    "hopital", "ospedale", "krankenhaus", "klinikum", "medical center", "medical centre", "health system",
    "government", "ministry", "ministere", "ministerio", "department of", "secretary of", "represented by",
    "national aeronautics and space administration", "national institutes of health",
    "board of regents", "board of trustees", "regents of the", "academy of sciences", "academie",
    "akademie", "chinese academy", "research council", "navy", "army", "air force",
};

const char* const kOrganizationMarkers[] = {
    "inc", "incorporated", "corp", "corporation", "co", "company", "companies", "ltd", "limited", "llc",
    "llp", "lp", "plc", "gmbh", "ag", "kg", "sa", "sas", "sarl", "srl", "spa", "bv", "nv", "ab", "oy",
    "oyj", "asa", "kk", "pte", "pty", "pvt", "sdn", "bhd", "consulting", "consultants", "technologies",
    "technology", "systems", "group", "holding", "holdings", "industries", "international", "solutions",
    "services", "labs", "laboratories", "enterprises", "partners", "associates", "trust", "bank",
    "products", "manufacturing", "engineering", "electronics", "pharmaceuticals", "pharma", "software",
    "networks", "capital", "ventures", "design", "designs", "studio", "works",
    // Dotted forms ("S.p.A.", "B.V.") normalize to single letters.
    "s a", "s p a", "s a s", "s a r l", "s r l", "b v", "n v", "a g", "k k", "l l c", "l l p", "p l c",
    "a b", "g m b h",
};

std::vector<std::string> to_vector(const char* const* begin, const char* const* end) {
  return std::vector<std::string>(begin, end);
}

bool is_name_char(char32_t cp) {
  return u_isalpha(static_cast<UChar32>(cp)) || cp == U' ' || cp == U'.' || cp == U'-' || cp == U'\'';
}

// "Surname, Forename(s)": one comma, 1-3 surname words, 1-4 forename words,
// letters and name punctuation only.
bool looks_like_person(std::string_view raw) {
  const std::string trimmed = text::collapse_whitespace(raw);
  const auto comma = trimmed.find(',');
  if (comma == std::string::npos || trimmed.find(',', comma + 1) != std::string::npos) return false;
  const std::string surname = text::trim(std::string_view(trimmed).substr(0, comma));
  const std::string forenames = text::trim(std::string_view(trimmed).substr(comma + 1));
  if (surname.empty() || forenames.empty()) return false;
  for (const auto& part : {surname, forenames}) {
    for (char32_t cp : text::decode_utf8(part)) {
      if (!is_name_char(cp)) return false;
    }
  }
  const auto surname_words = text::split_tokens(surname).size();
  const auto forename_words = text::split_tokens(forenames).size();
  return surname_words >= 1 && surname_words <= 3 && forename_words >= 1 && forename_words <= 4;
}

}  // namespace

std::string_view to_string(NameKind kind) {
  switch (kind) {
    case NameKind::Organization: return "organization";
    case NameKind::Individual: return "individual";
    case NameKind::Institution: return "institution";
  }
  return "organization";
}

KeywordList::KeywordList(std::vector<std::string> phrases) {
  for (const auto& p : phrases) {
    auto tokens = text::split_tokens(text::normalize(p));
    if (!tokens.empty()) phrases_.push_back(std::move(tokens));
  }
}

KeywordList KeywordList::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open keyword list " + path.string());
  std::vector<std::string> phrases;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = text::trim(line);
    if (!line.empty()) phrases.push_back(line);
  }
  return KeywordList(std::move(phrases));
}

const KeywordList& KeywordList::default_institutions() {
  static const KeywordList list(to_vector(std::begin(kInstitutionKeywords), std::end(kInstitutionKeywords)));
  return list;
}

const KeywordList& KeywordList::default_organization_markers() {
  static const KeywordList list(to_vector(std::begin(kOrganizationMarkers), std::end(kOrganizationMarkers)));
  return list;
}

bool KeywordList::matches(const std::vector<std::string>& name_tokens) const {
  for (const auto& phrase : phrases_) {
    if (phrase.size() > name_tokens.size()) continue;
    for (std::size_t start = 0; start + phrase.size() <= name_tokens.size(); ++start) {
      bool hit = true;
      for (std::size_t k = 0; k < phrase.size() && hit; ++k) hit = name_tokens[start + k] == phrase[k];
      if (hit) return true;
    }
  }
  return false;
}

NameKind classify_name_kind(std::string_view raw_name, const KeywordList& institutions,
                            const KeywordList& organization_markers) {
  const auto tokens = text::split_tokens(text::normalize(raw_name));
  if (institutions.matches(tokens)) return NameKind::Institution;
  // Organization markers take precedence over the person pattern.
  if (looks_like_person(raw_name) && !organization_markers.matches(tokens)) return NameKind::Individual;
  return NameKind::Organization;
}

NameKind classify_name_kind(std::string_view raw_name) {
  return classify_name_kind(raw_name, KeywordList::default_institutions(),
                            KeywordList::default_organization_markers());
}

}  // namespace harmonizer
