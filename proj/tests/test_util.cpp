#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <numeric>

#include "harmonizer/error.hpp"
#include "harmonizer/util/digest.hpp"
#include "harmonizer/util/parallel.hpp"
#include "harmonizer/util/rng.hpp"
#include "harmonizer/util/text.hpp"
#include "harmonizer/util/tsv.hpp"
#include "support.hpp"

using namespace harmonizer;

TEST_CASE("normalize folds case, marks and punctuation") {
  CHECK(text::normalize("PFIZER, INC.") == "pfizer inc");
  CHECK(text::normalize("Société Générale") == "societe generale");
  CHECK(text::normalize("AT&T") == "at and t");
  CHECK(text::normalize("  New   York  ") == "new york");
  CHECK(text::normalize("ＡＢＣ　Ｃｏ") == "abc co");  // fullwidth forms
  CHECK(text::normalize("") == "");
  CHECK(text::normalize("...") == "");
}

TEST_CASE("normalize is idempotent") {
  for (const char* s : {"L'ORÉAL S.A.", "Müller-Thurgau GmbH & Co. KG", "3M Company", "ＮＴＴ　ドコモ"}) {
    const auto once = text::normalize(s);
    CHECK(text::normalize(once) == once);
  }
}

TEST_CASE("token and string helpers") {
  CHECK(text::split_tokens("a  b c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(text::split_tokens("").empty());
  CHECK(text::join({"x", "y"}, "|") == "x|y");
  CHECK(text::split("a||b", '|') == std::vector<std::string>{"a", "", "b"});
  CHECK(text::collapse_whitespace(" a \t b ") == "a b");
  CHECK(text::truncate_code_points("héllo", 2) == "hé");
  CHECK(text::decode_utf8("\xff") == std::u32string(1, U'�'));
}

TEST_CASE("sha256 matches the FIPS 180-2 vector") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("tsv read and atomic write") {
  test_support::TempDir dir;
  const auto p = dir / "t.tsv";
  tsv::write_file_atomic(p, "a\tb\r\n1\t2\n\n3\t4\n");
  const auto t = tsv::read(p);
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1].fields == std::vector<std::string>{"3", "4"});
  CHECK(t.rows[1].line == 4);
  CHECK(t.column("b") == 1);
  CHECK(t.column("zz") == -1);
  CHECK_THROWS_AS(tsv::read(dir / "missing.tsv"), InputError);
}

TEST_CASE("rng is reproducible and in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.below(7) < 7);
  }
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
  std::vector<int> v(20);
  std::iota(v.begin(), v.end(), 0);
  auto w = v;
  Rng(3).shuffle(std::span<int>(v));
  Rng(3).shuffle(std::span<int>(w));
  CHECK(v == w);
  std::sort(v.begin(), v.end());
  CHECK(v[19] == 19);
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(100, 3,
                               [](std::size_t i) {
                                 if (i == 50) throw InputError("boom");
                               }),
                  InputError);
}
