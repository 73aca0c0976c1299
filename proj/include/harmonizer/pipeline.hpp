#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "harmonizer/augment.hpp"
#include "harmonizer/config.hpp"
#include "harmonizer/embed.hpp"
#include "harmonizer/eval.hpp"
#include "harmonizer/graph.hpp"
#include "harmonizer/ingest.hpp"
#include "harmonizer/match.hpp"
#include "harmonizer/parse.hpp"
#include "harmonizer/tune.hpp"

namespace harmonizer {

// Records that share a cleaned name form one unit, the node of the similarity
// graph. Individuals (unless enabled) and degenerate names stay out of
// matching and end up as singletons.
struct PreparedCorpus {
  std::vector<AssigneeRecord> records;
  std::vector<NameKind> kinds;
  std::vector<std::optional<std::string>> corrections;
  std::vector<CleanName> cleaned;
  CommonWordList common;
  std::set<std::string> domain_blocklist;

  std::vector<NameProfile> profiles;                 // sorted by id (smallest member record id)
  std::vector<std::vector<std::size_t>> unit_members;  // record indices per profile
  std::vector<std::set<LocationKey>> unit_locations;
  std::vector<long> record_unit;                     // -1 when not matched

  std::size_t n_augmented = 0;
  std::size_t n_type1 = 0;
  std::size_t n_type2 = 0;
};

std::unique_ptr<EmbeddingBackend> make_embedding_backend(const PipelineConfig& cfg);

// Everything before pair scoring. `cache` may be null (no augmentation).
PreparedCorpus prepare_corpus(std::vector<AssigneeRecord> records, const AugmentationCache* cache,
                              const PipelineConfig& cfg);

// Candidate pairs per config (bound-aware blocking, or every within-class
// pair with match.brute_force), scored with the configured weights.
std::vector<ScoredPair> match_corpus(const PreparedCorpus& corpus, const PipelineConfig& cfg);

struct Harmonization {
  std::vector<MappingRow> mapping;  // input order
  std::size_t n_communities = 0;
  std::size_t n_edges = 0;
};

// Graph, refinement, and (optionally) naming. Pairs below the threshold are ignored.
Harmonization harmonize(const PreparedCorpus& corpus, std::span<const ScoredPair> pairs, const FilterParams& params,
                        unsigned threads, bool name_communities = true);

// Unique raw names, community count, reduction rate and the largest communities.
std::string summarize_json(std::span<const MappingRow> mapping, std::span<const AssigneeRecord> records,
                           std::size_t top_k = 10);

struct RunOutcome {
  std::vector<MappingRow> mapping;
  std::string manifest_json;
  std::string summary_json;
};

// Full run. Outputs (mapping.tsv, cleaned.tsv, common_words.txt, pairs.tsv,
// summary.json, manifest.json) are staged and moved into cfg.output.dir only
// when every stage succeeded. Stage failures raise StageError.
RunOutcome run_pipeline(const PipelineConfig& cfg);

// Fetches missing names into the cache (or only counts hits when offline).
AugmentReport run_augment(const PipelineConfig& cfg);

// Tuning on cached conditions.
struct TuningContext {
  PreparedCorpus corpus;
  std::vector<ScoredPair> pairs;  // conditions only; scores are recomputed per trial
  std::vector<GoldLabel> gold;
  PipelineConfig base;
};

TuningContext make_tuning_context(const PipelineConfig& cfg);

// Parameter vector in SearchSpace::pipeline_default() order.
std::vector<double> params_from_config(const PipelineConfig& cfg);
void apply_params(std::span<const double> params, WeightVector& weights, FilterParams& filter);

// Pairwise F1 of one parameter vector.
double tuning_objective(const TuningContext& ctx, std::span<const double> params, std::uint64_t seed);

// Runs cfg.tune.trials trials (default config first when enabled), appending
// each trial to `trial_store` when it is non-empty.
TuneResult run_tuning(const TuningContext& ctx, const std::filesystem::path& trial_store);

}  // namespace harmonizer
