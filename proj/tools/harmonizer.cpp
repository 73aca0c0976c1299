// harmonizer: command-line front end.
//
//   harmonizer [--config c.json] [--threads N] [--seed S] [--offline] <subcommand> ...
//
// Exit codes: 0 ok, 2 config error, 3 input error, 4 stage failure.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"

#include "harmonizer/error.hpp"
#include "harmonizer/pipeline.hpp"
#include "harmonizer/util/tsv.hpp"

namespace fs = std::filesystem;
using namespace harmonizer;

namespace {

struct GlobalOptions {
  std::string config;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  bool offline = false;
  std::string log_level = "info";
};

PipelineConfig resolve_config(const GlobalOptions& g) {
  PipelineConfig cfg = g.config.empty() ? PipelineConfig{} : load_config(g.config);
  apply_env_overrides(cfg);
  if (g.threads) cfg.run.threads = *g.threads;
  if (g.seed) {
    cfg.graph.seed = *g.seed;
    cfg.tune.tpe.seed = *g.seed;
  }
  if (g.offline) cfg.augment.offline = true;
  return cfg;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    tsv::write_file_atomic(path, content);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Assignee name harmonization"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for clustering and tuning");
  app.add_flag("--offline", g.offline, "Use the augmentation cache only");
  app.add_option("--log-level", g.log_level, "trace|debug|info|warn|error|off");

  std::string input, cache, gold, out, pred, mapping;
  std::size_t trials = 0;
  std::size_t top_k = 10;

  auto* augment = app.add_subcommand("augment", "Fill the augmentation cache");
  augment->add_option("--input", input, "Assignee TSV");
  augment->add_option("--cache", cache, "Cache JSONL");

  auto* run = app.add_subcommand("run", "Run the full pipeline");
  run->add_option("--input", input, "Assignee TSV");
  run->add_option("--cache", cache, "Cache JSONL");
  run->add_option("--out", out, "Output directory");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a mapping against gold labels");
  evaluate_cmd->add_option("--pred", pred, "Mapping TSV")->required();
  evaluate_cmd->add_option("--gold", gold, "Gold TSV")->required();
  evaluate_cmd->add_option("--out", out, "Report JSON (default stdout)");

  auto* tune = app.add_subcommand("tune", "Search weights and filter parameters");
  tune->add_option("--input", input, "Assignee TSV");
  tune->add_option("--gold", gold, "Gold TSV");
  tune->add_option("--cache", cache, "Cache JSONL");
  tune->add_option("--trials", trials, "Number of trials");
  tune->add_option("--out", out, "Trial store JSONL");

  auto* summarize = app.add_subcommand("summarize", "Report counts for a mapping");
  summarize->add_option("--mapping", mapping, "Mapping TSV")->required();
  summarize->add_option("--input", input, "Assignee TSV (raw name universe)");
  summarize->add_option("--top-k", top_k, "Largest communities to list");
  summarize->add_option("--out", out, "Summary JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto logger = spdlog::stderr_color_mt("harmonizer");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::from_str(g.log_level));

  try {
    PipelineConfig cfg = resolve_config(g);
    if (!input.empty()) cfg.input.assignees = input;
    if (!cache.empty()) cfg.input.cache = cache;
    if (!gold.empty()) cfg.input.gold = gold;

    if (augment->parsed()) {
      cfg.validate();
      const AugmentReport r = run_augment(cfg);
      std::cout << "cached " << r.cached << ", fetched " << r.fetched << ", failed " << r.failed.size() << "\n";
      for (const auto& name : r.failed) spdlog::warn("not augmented: {}", name);
    } else if (run->parsed()) {
      if (!out.empty()) cfg.output.dir = out;
      const RunOutcome r = run_pipeline(cfg);
      std::cout << r.summary_json;
    } else if (evaluate_cmd->parsed()) {
      const EvalReport report = evaluate(load_mapping(pred), load_gold_standard(gold));
      write_output(out, report.to_json());
    } else if (tune->parsed()) {
      if (trials > 0) cfg.tune.trials = trials;
      const TuningContext ctx = make_tuning_context(cfg);
      const TuneResult result = run_tuning(ctx, out);
      if (result.history.empty()) {
        std::cout << "no trials\n";
      } else {
        std::cout << trial_to_json_line(result.history[result.best], cfg.tune.space) << "\n";
      }
    } else if (summarize->parsed()) {
      const auto rows = load_mapping(mapping);
      std::vector<AssigneeRecord> records;
      if (!input.empty()) records = load_assignee_table(input);
      write_output(out, summarize_json(rows, records, top_k));
    }
  } catch (const ConfigError& e) {
    spdlog::error("config error: {}", e.what());
    return 2;
  } catch (const InputError& e) {
    spdlog::error("input error: {}", e.what());
    return 3;
  } catch (const StageError& e) {
    spdlog::error("stage failure: {}", e.what());
    return 4;
  } catch (const std::exception& e) {
    spdlog::error("failure: {}", e.what());
    return 4;
  }
  return 0;
}
