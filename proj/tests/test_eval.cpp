#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "harmonizer/error.hpp"
#include "harmonizer/eval.hpp"
#include "pair_oracle.hpp"
#include "support.hpp"

using namespace harmonizer;

namespace {

using Labels = std::vector<std::string>;

std::vector<MappingRow> mapping(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::vector<MappingRow> out;
  for (const auto& [id, c] : rows) out.push_back({id, id, c, ""});
  return out;
}

}  // namespace

TEST_CASE("confusion examples") {
  const Labels gold{"E1", "E1", "E1", "E2"};
  CHECK(pairwise_confusion(gold, gold) == PairwiseConfusion{3, 0, 0});
  CHECK(pairwise_confusion(Labels{"x", "x", "y", "y"}, gold) == PairwiseConfusion{1, 1, 2});
  CHECK(pairwise_confusion(Labels{"a", "b", "c"}, Labels{"E", "E", "F"}) == PairwiseConfusion{0, 0, 1});
  CHECK_THROWS_AS(pairwise_confusion(Labels{"a"}, gold), ContractError);
}

TEST_CASE("confusion matches pair enumeration") {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(120);
    const auto pred = test_support::random_labels(n, 1 + rng.below(30), rng);
    const auto gold = test_support::random_labels(n, 1 + rng.below(30), rng);
    CHECK(pairwise_confusion(pred, gold) == test_support::enumerate_pairs(pred, gold));
  }
}

TEST_CASE("metric examples") {
  const auto m = compute_metrics({1, 1, 2});
  CHECK(m.precision == 0.5);
  CHECK(m.recall == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(m.f1 == doctest::Approx(0.4).epsilon(1e-12));
  const auto perfect = compute_metrics({4, 0, 0});
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f1 == 1.0);
  const auto wrong = compute_metrics({0, 3, 1});
  CHECK(wrong.precision == 0.0);
  CHECK(wrong.f1 == 0.0);
  const auto nothing = compute_metrics({0, 0, 0});
  CHECK(nothing.f1 == 1.0);
  CHECK(compute_metrics({0, 0, 2}).precision == 0.0);
}

TEST_CASE("b-cubed of a perfect clustering is one") {
  const Labels gold{"E1", "E1", "E2"};
  const auto b = bcubed(gold, gold);
  CHECK(b.precision == 1.0);
  CHECK(b.recall == 1.0);
  // One cluster holding everything: recall 1, precision (2/3*2 + 1/3)/3.
  const auto lumped = bcubed(Labels{"x", "x", "x"}, gold);
  CHECK(lumped.recall == 1.0);
  CHECK(lumped.precision == doctest::Approx(5.0 / 9.0));
}

TEST_CASE("reduction rate") {
  CHECK(reduction_rate(325917, 188445) == doctest::Approx(0.4218).epsilon(1e-4));
  CHECK(reduction_rate(10, 10) == 0.0);
  CHECK(reduction_rate(100, 50) == 0.5);
  CHECK_THROWS_WITH_AS(reduction_rate(0, 0), doctest::Contains("no input names"), InputError);
}

TEST_CASE("evaluate uses the gold records as the universe") {
  const std::vector<GoldLabel> gold{{"a", "E1"}, {"b", "E1"}, {"c", "E1"}, {"d", "E2"}, {"z", "E3"}};
  const auto pred = mapping({{"a", "0"}, {"b", "0"}, {"c", "1"}, {"d", "1"}, {"extra", "0"}});
  const auto r = evaluate(pred, gold);
  CHECK(r.n_missing_pred == 1);
  CHECK(r.confusion == PairwiseConfusion{1, 1, 2});
  CHECK(r.metrics.f1 == doctest::Approx(0.4));
  CHECK(r.n_records == 5);
  CHECK(r.n_gold_clusters == 3);
  CHECK(r.n_pred_clusters == 3);
  const auto json = r.to_json();
  CHECK(json.find("\"f1\"") != std::string::npos);
  CHECK(json.find("\"reduction_rate\": null") != std::string::npos);
  CHECK_THROWS_AS(evaluate(mapping({{"a", "0"}}), gold), InputError);
}

TEST_CASE("portfolio") {
  const std::vector<AssigneeRecord> records{{"h1", "HITACHI LTD", 5, {}},  {"h2", "HITACHI, LTD.", 3, {}},
                                            {"h3", "HITACHI LIMITED", 2, {}}, {"h4", "HITACH LTD", 1, {}},
                                            {"h5", "HITACHI KK", 1, {}},     {"s1", "SOLO", 7, {}}};
  const auto pred = mapping({{"h1", "0"}, {"h2", "0"}, {"h3", "0"}, {"h4", "0"}, {"h5", "0"}, {"s1", "1"}});
  const std::vector<std::string> focus{"h1", "s1", "nope"};
  const auto rows = portfolio_report(pred, records, focus);
  CHECK(rows[0].variants == 5);
  CHECK(rows[0].portfolio == 12);
  CHECK(rows[1].variants == 1);
  CHECK(rows[1].portfolio == 7);
  CHECK(rows[2].missing);
}

TEST_CASE("mapping io") {
  test_support::TempDir dir;
  const std::vector<MappingRow> rows{{"r1", "A", "0", "A"}, {"r2", "B", "0", "A"}};
  const auto p = dir.write("m.tsv", format_mapping_tsv(rows));
  const auto back = load_mapping(p);
  REQUIRE(back.size() == 2);
  CHECK(back[1].canonical_name == "A");
  CHECK(format_mapping_tsv(back) == format_mapping_tsv(rows));
  CHECK_THROWS_AS(load_mapping(dir.write("d.tsv", "record_id\tcommunity_id\nr1\t0\nr1\t1\n")), InputError);
  CHECK_THROWS_AS(load_mapping(dir.write("x.tsv", "id\tcommunity\n")), InputError);
}
