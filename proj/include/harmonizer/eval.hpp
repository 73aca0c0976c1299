#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "harmonizer/ingest.hpp"

namespace harmonizer {

struct PairwiseConfusion {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  bool operator==(const PairwiseConfusion&) const = default;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Record-aligned cluster labels: pred[i] and gold[i] describe the same record.
// Counted from the contingency table, so linear in the number of records.
PairwiseConfusion pairwise_confusion(std::span<const std::string> pred, std::span<const std::string> gold);

// precision = tp/(tp+fp), 1 when nothing was predicted and nothing was missed,
// 0 when nothing was predicted but something was missed; recall likewise with
// fn; f1 = 2PR/(P+R), 0 when P+R = 0.
Metrics compute_metrics(const PairwiseConfusion& c);

// Record-level B-cubed averages.
Metrics bcubed(std::span<const std::string> pred, std::span<const std::string> gold);

// (n_before - n_after) / n_before. InputError("no input names") when n_before = 0.
double reduction_rate(std::size_t n_before, std::size_t n_after);

struct MappingRow {
  std::string record_id;
  std::string raw_name;
  std::string community_id;
  std::string canonical_name;
};

std::vector<MappingRow> load_mapping(const std::filesystem::path& path);
std::string format_mapping_tsv(std::span<const MappingRow> rows);

struct EvalReport {
  Metrics metrics;
  PairwiseConfusion confusion;
  std::size_t n_records = 0;
  std::size_t n_pred_clusters = 0;
  std::size_t n_gold_clusters = 0;
  std::optional<double> reduction_rate;
  Metrics bcubed;
  std::size_t n_missing_pred = 0;  // gold records without a prediction (scored as singletons)

  std::string to_json() const;
};

// Universe = gold records. Gold records absent from `pred` are predicted
// singletons. InputError when fewer than two gold records have a prediction.
EvalReport evaluate(std::span<const MappingRow> pred, std::span<const GoldLabel> gold);

struct PortfolioRow {
  std::string record_id;
  std::string raw_name;
  bool missing = false;
  std::size_t variants = 0;
  std::uint64_t portfolio = 0;
};

PortfolioRow compute_portfolio(const std::string& focus_id, std::span<const MappingRow> pred,
                               std::span<const AssigneeRecord> records);
std::vector<PortfolioRow> portfolio_report(std::span<const MappingRow> pred, std::span<const AssigneeRecord> records,
                                           std::span<const std::string> focus_ids);

}  // namespace harmonizer
