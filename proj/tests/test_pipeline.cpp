#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "json.hpp"

#include "harmonizer/error.hpp"
#include "harmonizer/pipeline.hpp"
#include "harmonizer/util/digest.hpp"
#include "support.hpp"

using namespace harmonizer;
using test_support::fixture;
using test_support::slurp;
using test_support::TempDir;

namespace {

PipelineConfig planted_config(const TempDir& dir) {
  PipelineConfig cfg = load_config(fixture("planted60/config.json"));
  cfg.output.dir = dir / "out";
  return cfg;
}

std::vector<MappingRow> rows(const std::vector<std::tuple<std::string, std::string, std::string>>& r) {
  std::vector<MappingRow> out;
  for (const auto& [id, raw, c] : r) out.push_back({id, raw, c, raw});
  return out;
}

}  // namespace

TEST_CASE("config loading") {
  TempDir dir;
  const auto cfg = load_config(dir.write("c.json", R"({"graph": {"threshold": 3.5}, "match.weights.cos": 0.5,
                                                      "input": {"assignees": "a.tsv"}})"));
  CHECK(cfg.graph.threshold == 3.5);
  CHECK(cfg.match.weights.cos == 0.5);
  CHECK(cfg.input.assignees == (dir / "a.tsv").lexically_normal());
  CHECK_THROWS_WITH_AS(load_config(dir.write("u.json", R"({"graph": {"treshold": 3}})")),
                       doctest::Contains("graph.treshold"), ConfigError);
  CHECK_THROWS_AS(load_config(dir.write("t.json", R"({"graph": {"threshold": "high"}})")), ConfigError);
  CHECK_THROWS_AS(load_config(dir.write("j.json", "{")), ConfigError);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
}

TEST_CASE("environment overrides") {
  PipelineConfig cfg;
  const std::map<std::string, std::string> env{{"TERR_GRAPH_THRESHOLD", "4.2"},
                                               {"TERR_MATCH_WEIGHTS_COS", "0.25"},
                                               {"TERR_GRAPH_NAMING", "volume"}};
  apply_env_overrides(cfg, [&](const char* k) -> const char* {
    const auto it = env.find(k);
    return it == env.end() ? nullptr : it->second.c_str();
  });
  CHECK(cfg.graph.threshold == 4.2);
  CHECK(cfg.match.weights.cos == 0.25);
  CHECK(cfg.graph.naming == NamingStrategy::Volume);
  CHECK(env_var_for_key("graph.location_boost") == "TERR_GRAPH_LOCATION_BOOST");
  CHECK_THROWS_AS(apply_env_overrides(cfg, [](const char* k) -> const char* {
                    return std::string(k) == "TERR_GRAPH_SEED" ? "-3" : nullptr;
                  }),
                  ConfigError);
}

TEST_CASE("config hash follows the serialized config") {
  PipelineConfig a, b;
  CHECK(a.hash() == b.hash());
  b.set("graph.resolution", "0.5");
  CHECK(a.hash() != b.hash());
  const auto j = nlohmann::json::parse(b.to_json());
  CHECK(j["graph"]["resolution"] == 0.5);
  CHECK_THROWS_AS(a.set("nope.key", "1"), ConfigError);
  PipelineConfig bad;
  bad.run.threads = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("planted 60-name corpus resolves into its 12 entities") {
  TempDir dir;
  const auto cfg = planted_config(dir);
  const auto out = run_pipeline(cfg);
  REQUIRE(out.mapping.size() == 60);
  std::set<std::string> communities;
  for (const auto& m : out.mapping) communities.insert(m.community_id);
  CHECK(communities.size() == 12);
  const auto report = evaluate(out.mapping, load_gold_standard(cfg.input.gold));
  CHECK(report.metrics.f1 == 1.0);

  for (const char* f : {"mapping.tsv", "cleaned.tsv", "common_words.txt", "pairs.tsv", "summary.json", "manifest.json"})
    CHECK(std::filesystem::exists(cfg.output.dir / f));
  const auto manifest = nlohmann::json::parse(slurp(cfg.output.dir / "manifest.json"));
  CHECK(manifest["config_hash"] == cfg.hash());
  CHECK(manifest["outputs"]["mapping.tsv"] == sha256_hex(slurp(cfg.output.dir / "mapping.tsv")));
  CHECK(manifest["counts"]["records"] == 60);
}

TEST_CASE("reruns are byte-identical") {
  TempDir dir;
  auto cfg = planted_config(dir);
  run_pipeline(cfg);
  const auto first = slurp(cfg.output.dir / "mapping.tsv");
  const auto first_pairs = slurp(cfg.output.dir / "pairs.tsv");
  cfg.run.threads = 3;
  run_pipeline(cfg);
  CHECK(slurp(cfg.output.dir / "mapping.tsv") == first);
  CHECK(slurp(cfg.output.dir / "pairs.tsv") == first_pairs);
}

TEST_CASE("empty input") {
  TempDir dir;
  PipelineConfig cfg;
  cfg.input.assignees = dir.write("a.tsv", "record_id\traw_name\n");
  cfg.augment.offline = true;
  cfg.output.dir = dir / "out";
  const auto out = run_pipeline(cfg);
  CHECK(out.mapping.empty());
  const auto summary = nlohmann::json::parse(out.summary_json);
  CHECK(summary["reduction_rate"].is_null());
  CHECK(summary["message"] == "no input names");
  CHECK(slurp(cfg.output.dir / "mapping.tsv") == "record_id\traw_name\tcommunity_id\tcanonical_name\n");
}

TEST_CASE("failures name the stage and leave no outputs") {
  TempDir dir;
  auto cfg = planted_config(dir);
  cfg.input.cache = dir / "missing.jsonl";
  CHECK_THROWS_WITH_AS(run_pipeline(cfg), doctest::Contains("augment:"), InputError);
  CHECK_FALSE(std::filesystem::exists(cfg.output.dir));

  cfg = planted_config(dir);
  cfg.output.dir = dir.write("blocked", "a regular file");
  try {
    run_pipeline(cfg);
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "emit");
  }
  CHECK(slurp(cfg.output.dir) == "a regular file");
  for (const auto& entry : std::filesystem::directory_iterator(dir.path()))
    CHECK(entry.path().filename().string().find("staging") == std::string::npos);

  cfg = planted_config(dir);
  cfg.input.assignees = dir.write("bad.tsv", "record_id\traw_name\nr1\tA\nr1\tB\n");
  CHECK_THROWS_WITH_AS(run_pipeline(cfg), doctest::Contains("ingest:"), InputError);
}

TEST_CASE("summaries") {
  std::vector<std::tuple<std::string, std::string, std::string>> hundred;
  for (int i = 0; i < 100; ++i) hundred.emplace_back("r" + std::to_string(i), "N" + std::to_string(i), std::to_string(i % 58));
  const auto s = nlohmann::json::parse(summarize_json(rows(hundred), {}));
  CHECK(s["unique_raw_names"] == 100);
  CHECK(s["communities"] == 58);
  CHECK(s["reduction_rate"].get<double>() == doctest::Approx(0.42));

  const auto singles = nlohmann::json::parse(summarize_json(rows({{"a", "A", "0"}, {"b", "B", "1"}}), {}));
  CHECK(singles["reduction_rate"] == 0.0);

  std::vector<std::tuple<std::string, std::string, std::string>> hitachi;
  for (int i = 0; i < 424; ++i)
    hitachi.emplace_back("h" + std::to_string(i), "HITACHI VARIANT " + std::to_string(i), std::to_string(i % 67));
  const auto h = nlohmann::json::parse(summarize_json(rows(hitachi), {}, 3));
  CHECK(h["unique_raw_names"] == 424);
  CHECK(h["communities"] == 67);
  REQUIRE(h["largest_communities"].size() == 3);
  CHECK(h["largest_communities"][0]["community_id"] == "0");
  CHECK(h["largest_communities"][0]["variants"] == 7);
}

TEST_CASE("tuning context reproduces the default run") {
  const auto cfg = load_config(fixture("planted60/config.json"));
  const auto ctx = make_tuning_context(cfg);
  const auto params = params_from_config(cfg);
  CHECK(params.size() == 9);
  CHECK(tuning_objective(ctx, params, cfg.graph.seed) == 1.0);
  WeightVector w;
  FilterParams f;
  CHECK_THROWS_AS(apply_params(std::vector<double>{1, 2}, w, f), ContractError);
}
