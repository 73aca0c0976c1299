#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "harmonizer/error.hpp"
#include "harmonizer/parse.hpp"
#include "support.hpp"

using namespace harmonizer;

namespace {

using Tokens = std::vector<std::string>;

CleanName named(const std::string& cleaned) {
  CleanName n;
  n.cleaned = cleaned;
  n.tokens = text::split_tokens(cleaned);
  return n;
}

}  // namespace

TEST_CASE("clean_name strips legal forms") {
  const auto& dict = LegalDesignatorDictionary::builtin();
  CHECK(clean_name("PFIZER, INC.", std::nullopt, dict).cleaned == "pfizer");
  CHECK(clean_name("NOKIA MOBILES PHONES, LTD.", std::nullopt, dict).cleaned == "nokia mobiles phones");
  CHECK(clean_name("Siemens Aktiengesellschaft", std::nullopt, dict).cleaned == "siemens");
  CHECK(clean_name("BASF", std::nullopt, dict).tokens == Tokens{"basf"});
}

TEST_CASE("all-designator names are degenerate and keep their tokens") {
  const auto n = clean_name("r9", "L.L.C.", std::nullopt, LegalDesignatorDictionary::builtin());
  CHECK(n.record_id == "r9");
  CHECK(n.degenerate);
  CHECK(n.cleaned == "l l c");
  CHECK_FALSE(n.name_class.has_value());
}

TEST_CASE("corrections replace the raw name") {
  const auto n = clean_name("INNOVASION LABS, INC.", std::string("INNOVATION LABS, INC."),
                            LegalDesignatorDictionary::builtin());
  CHECK(n.cleaned == "innovation labs");
}

TEST_CASE("strip_legal_suffixes") {
  const auto& dict = LegalDesignatorDictionary::builtin();
  CHECK(strip_legal_suffixes({"ibm", "ltd"}, dict) == Tokens{"ibm"});
  CHECK(strip_legal_suffixes({"basf"}, dict) == Tokens{"basf"});
  CHECK(strip_legal_suffixes({"michelin", "recherche", "et", "technique", "s", "a"}, dict) ==
        Tokens{"michelin", "recherche", "et", "technique"});
  // Repeated tails come off one designator at a time.
  CHECK(strip_legal_suffixes({"acme", "co", "ltd", "inc"}, dict) == Tokens{"acme"});
  CHECK(strip_legal_suffixes({"acme", "gmbh", "tools"}, dict) == Tokens{"acme", "gmbh", "tools"});
  CHECK(strip_legal_suffixes({"acme", "gmbh", "tools"}, dict, true) == Tokens{"acme", "tools"});
}

TEST_CASE("designator file matches the built-in dictionary") {
  const auto file = LegalDesignatorDictionary::load(test_support::data_file("legal_designators.txt"));
  CHECK(file.size() == LegalDesignatorDictionary::builtin().size());
  CHECK(file.by_language() == LegalDesignatorDictionary::builtin().by_language());
}

TEST_CASE("dictionary entries are normalized") {
  LegalDesignatorDictionary dict;
  dict.add("fr", "S.A.R.L.");
  const Tokens t{"x", "s", "a", "r", "l"};
  CHECK(dict.longest_suffix_match(t, t.size()) == 4);
  CHECK(dict.longest_prefix_match(t, 1) == 4);
  CHECK(dict.longest_suffix_match(t, 1) == 0);
}

TEST_CASE("common word list") {
  const std::vector<CleanName> names{named("alpha tech"), named("beta tech"), named("gamma")};
  CHECK(build_common_word_list(names, 0).size() == 0);
  CHECK(build_common_word_list(names, 1).words() == Tokens{"tech"});
  // Ties broken lexicographically.
  CHECK(build_common_word_list(names, 3).words() == Tokens{"tech", "alpha", "beta"});
  const std::vector<CleanName> repeats{named("tech tech"), named("beta gamma"), named("beta")};
  CHECK(build_common_word_list(repeats, 1).words() == Tokens{"beta"});
  CHECK(build_common_word_list(names, 2).export_text() == "tech\nalpha\n");
}

TEST_CASE("classify_name_type") {
  const CommonWordList common({"advanced", "technologies", "networks", "pharma", "group"}, 5);
  CHECK(classify_name_type(Tokens{"advanced", "technologies"}, common) == NameClass::Type2);
  CHECK(classify_name_type(Tokens{"nokia", "networks"}, common) == NameClass::Type1);
  CHECK(classify_name_type(Tokens{"pharma", "group"}, common) == NameClass::Type2);
  CHECK_THROWS_AS(classify_name_type(Tokens{}, common), ContractError);
}
