#include <fstream>

#include <spdlog/spdlog.h>

#include "harmonizer/error.hpp"
#include "harmonizer/pipeline.hpp"

namespace harmonizer {

TuningContext make_tuning_context(const PipelineConfig& cfg) {
  cfg.validate();
  if (cfg.input.assignees.empty()) throw InputError("input.assignees is not set");
  if (cfg.input.gold.empty()) throw InputError("input.gold is not set");
  TuningContext ctx;
  ctx.base = cfg;
  ctx.gold = load_gold_standard(cfg.input.gold);

  std::unique_ptr<AugmentationCache> cache;
  if (!cfg.input.cache.empty()) {
    if (!std::filesystem::exists(cfg.input.cache)) throw InputError("cache not found: " + cfg.input.cache.string());
    cache = std::make_unique<AugmentationCache>(cfg.input.cache);
  }
  ctx.corpus = prepare_corpus(load_assignee_table(cfg.input.assignees), cache.get(), cfg);

  // Weights change per trial, so the candidate set must not depend on them.
  std::vector<CandidatePair> candidates = ctx.corpus.profiles.size() <= cfg.tune.brute_force_max_names
                                              ? all_within_class_pairs(ctx.corpus.profiles)
                                              : generate_candidate_pairs(ctx.corpus.profiles, ctx.corpus.common);
  ctx.pairs = score_pairs(ctx.corpus.profiles, candidates, cfg.match.weights, cfg.run.threads);
  spdlog::info("tune: {} units, {} candidate pairs", ctx.corpus.profiles.size(), ctx.pairs.size());
  return ctx;
}

std::vector<double> params_from_config(const PipelineConfig& cfg) {
  const WeightVector& w = cfg.match.weights;
  const FilterParams& g = cfg.graph;
  return {w.token, w.first_token, w.url_text, w.domain, w.cos, g.threshold, g.resolution, g.bridgeness_threshold,
          g.location_boost};
}

void apply_params(std::span<const double> params, WeightVector& weights, FilterParams& filter) {
  if (params.size() != 9) throw ContractError("apply_params: expected 9 parameters");
  weights.token = params[0];
  weights.first_token = params[1];
  weights.url_text = params[2];
  weights.domain = params[3];
  weights.cos = params[4];
  filter.threshold = params[5];
  filter.resolution = params[6];
  filter.bridgeness_threshold = params[7];
  filter.location_boost = params[8];
}

double tuning_objective(const TuningContext& ctx, std::span<const double> params, std::uint64_t seed) {
  WeightVector weights = ctx.base.match.weights;
  FilterParams filter = ctx.base.graph;
  apply_params(params, weights, filter);
  filter.seed = seed;
  weights.validate();
  filter.validate();

  const double slack = filter.boost_before_threshold ? std::max(0.0, filter.location_boost) : 0.0;
  std::vector<ScoredPair> kept;
  for (const auto& p : ctx.pairs) {
    const double score = matching_score(p.conditions, weights);
    if (score >= filter.threshold - slack) {
      kept.push_back(p);
      kept.back().score = score;
    }
  }
  const Harmonization h = harmonize(ctx.corpus, kept, filter, ctx.base.run.threads, false);
  return evaluate(h.mapping, ctx.gold).metrics.f1;
}

TuneResult run_tuning(const TuningContext& ctx, const std::filesystem::path& trial_store) {
  std::vector<std::vector<double>> enqueued;
  if (ctx.base.tune.seed_default_trial) enqueued.push_back(params_from_config(ctx.base));

  std::ofstream store;
  if (!trial_store.empty()) {
    if (trial_store.has_parent_path()) std::filesystem::create_directories(trial_store.parent_path());
    store.open(trial_store, std::ios::app);
    if (!store) throw InputError("cannot open trial store: " + trial_store.string());
  }
  const SearchSpace& space = ctx.base.tune.space;
  auto objective = [&](const std::vector<double>& params, std::uint64_t seed) {
    return tuning_objective(ctx, params, seed);
  };
  auto on_trial = [&](const Trial& t) {
    spdlog::info("trial {}: f1 {:.6f}{}", t.trial_id, t.objective, t.error ? " (" + *t.error + ")" : "");
    if (store) {
      store << trial_to_json_line(t, space) << '\n';
      store.flush();
    }
  };
  return optimize(objective, space, ctx.base.tune.trials, ctx.base.tune.tpe, enqueued, on_trial);
}

}  // namespace harmonizer
