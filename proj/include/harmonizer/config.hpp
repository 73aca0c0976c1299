#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "harmonizer/augment.hpp"
#include "harmonizer/graph.hpp"
#include "harmonizer/match.hpp"
#include "harmonizer/tune.hpp"

namespace harmonizer {

enum class CosineSource { Cleaned, Raw };
enum class EmbedBackendKind { Hashing, File };

struct PipelineConfig {
  struct {
    std::filesystem::path assignees;
    std::filesystem::path gold;
    std::filesystem::path cache;
  } input;
  struct {
    std::filesystem::path dir = "out";
  } output;
  struct {
    std::filesystem::path institutions;  // empty: built-in list
    bool match_individuals = false;
  } ingest;
  struct {
    bool offline = false;
    std::size_t blocklist_k = 100;
    unsigned parallelism = 1;
  } augment;
  ProviderSettings provider;
  struct {
    std::size_t common_words = 250;
    std::filesystem::path designators;  // empty: built-in dictionary
    bool strip_interior = false;
  } parse;
  struct {
    EmbedBackendKind backend = EmbedBackendKind::Hashing;
    std::size_t dim = 256;
    std::uint64_t seed = 0;
    std::filesystem::path vectors;
  } embed;
  struct {
    WeightVector weights;
    CosineSource cos_on = CosineSource::Cleaned;
    bool brute_force = false;
  } match;
  FilterParams graph;
  struct {
    TpeConfig tpe;
    std::size_t trials = 30;
    SearchSpace space = SearchSpace::pipeline_default();
    // Up to this many names, tuning scores every within-class pair once.
    std::size_t brute_force_max_names = 3000;
    bool seed_default_trial = true;
  } tune;
  struct {
    unsigned threads = 1;
  } run;

  // Dotted keys ("graph.threshold") to JSON values. Unknown keys and wrong
  // types throw ConfigError. Relative paths resolve against `base_dir`.
  void set(const std::string& key, const std::string& json_value, const std::filesystem::path& base_dir = {});
  std::vector<std::string> keys() const;

  // Checks cross-field constraints. Throws ConfigError.
  void validate() const;

  // Nested JSON of every key, in a fixed order.
  std::string to_json() const;
  std::string hash() const;  // sha256 of to_json()
};

// JSON file (nested objects or dotted keys). Arrays are values, not sections.
PipelineConfig load_config(const std::filesystem::path& path);

// Applies TERR_<SECTION>_<KEY> variables, e.g. TERR_GRAPH_THRESHOLD or
// TERR_MATCH_WEIGHTS_COS. Values are parsed as JSON, falling back to a string.
// `getenv` is injectable for tests.
void apply_env_overrides(PipelineConfig& cfg,
                         const std::function<const char*(const char*)>& getenv_fn = {});

std::string env_var_for_key(const std::string& key);

}  // namespace harmonizer
