#include "harmonizer/eval.hpp"

#include <map>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "harmonizer/error.hpp"
#include "harmonizer/util/tsv.hpp"

namespace harmonizer {

namespace {

std::uint64_t choose2(std::uint64_t n) { return n * (n - (n > 0 ? 1 : 0)) / 2; }

std::size_t distinct(std::span<const std::string> labels) {
  return std::unordered_set<std::string_view>(labels.begin(), labels.end()).size();
}

}  // namespace

PairwiseConfusion pairwise_confusion(std::span<const std::string> pred, std::span<const std::string> gold) {
  if (pred.size() != gold.size()) throw ContractError("pairwise_confusion: label vectors differ in length");
  std::map<std::pair<std::string_view, std::string_view>, std::uint64_t> cells;
  std::unordered_map<std::string_view, std::uint64_t> pred_sizes;
  std::unordered_map<std::string_view, std::uint64_t> gold_sizes;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ++cells[{pred[i], gold[i]}];
    ++pred_sizes[pred[i]];
    ++gold_sizes[gold[i]];
  }
  std::uint64_t tp = 0;
  std::uint64_t pred_pairs = 0;
  std::uint64_t gold_pairs = 0;
  for (const auto& [_, n] : cells) tp += choose2(n);
  for (const auto& [_, n] : pred_sizes) pred_pairs += choose2(n);
  for (const auto& [_, n] : gold_sizes) gold_pairs += choose2(n);
  return {tp, pred_pairs - tp, gold_pairs - tp};
}

Metrics compute_metrics(const PairwiseConfusion& c) {
  Metrics m;
  if (c.tp + c.fp == 0) {
    m.precision = c.fn == 0 ? 1.0 : 0.0;
  } else {
    m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  }
  if (c.tp + c.fn == 0) {
    m.recall = c.fp == 0 ? 1.0 : 0.0;
  } else {
    m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  }
  const double s = m.precision + m.recall;
  m.f1 = s > 0 ? 2.0 * m.precision * m.recall / s : 0.0;
  return m;
}

Metrics bcubed(std::span<const std::string> pred, std::span<const std::string> gold) {
  if (pred.size() != gold.size()) throw ContractError("bcubed: label vectors differ in length");
  Metrics m;
  if (pred.empty()) return m;
  std::map<std::pair<std::string_view, std::string_view>, double> cells;
  std::unordered_map<std::string_view, double> pred_sizes;
  std::unordered_map<std::string_view, double> gold_sizes;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ++cells[{pred[i], gold[i]}];
    ++pred_sizes[pred[i]];
    ++gold_sizes[gold[i]];
  }
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double overlap = cells[{pred[i], gold[i]}];
    m.precision += overlap / pred_sizes[pred[i]];
    m.recall += overlap / gold_sizes[gold[i]];
  }
  m.precision /= static_cast<double>(pred.size());
  m.recall /= static_cast<double>(pred.size());
  const double s = m.precision + m.recall;
  m.f1 = s > 0 ? 2.0 * m.precision * m.recall / s : 0.0;
  return m;
}

double reduction_rate(std::size_t n_before, std::size_t n_after) {
  if (n_before == 0) throw InputError("no input names");
  if (n_after > n_before) throw ContractError("reduction_rate: more names after than before");
  return static_cast<double>(n_before - n_after) / static_cast<double>(n_before);
}

std::vector<MappingRow> load_mapping(const std::filesystem::path& path) {
  const tsv::Table table = tsv::read(path);
  const long id = table.column("record_id");
  const long raw = table.column("raw_name");
  const long community = table.column("community_id");
  const long canonical = table.column("canonical_name");
  if (id < 0 || community < 0)
    throw InputError(path.string() + ": mapping needs record_id and community_id columns");
  std::vector<MappingRow> rows;
  std::unordered_set<std::string> seen;
  for (const auto& row : table.rows) {
    if (row.fields.size() != table.header.size())
      throw InputError(path.string() + ":" + std::to_string(row.line) + ": expected " +
                       std::to_string(table.header.size()) + " fields");
    MappingRow m;
    m.record_id = row.fields[static_cast<std::size_t>(id)];
    m.community_id = row.fields[static_cast<std::size_t>(community)];
    if (raw >= 0) m.raw_name = row.fields[static_cast<std::size_t>(raw)];
    if (canonical >= 0) m.canonical_name = row.fields[static_cast<std::size_t>(canonical)];
    if (!seen.insert(m.record_id).second)
      throw InputError(path.string() + ":" + std::to_string(row.line) + ": duplicate record_id " + m.record_id);
    rows.push_back(std::move(m));
  }
  return rows;
}

std::string format_mapping_tsv(std::span<const MappingRow> rows) {
  std::string out = "record_id\traw_name\tcommunity_id\tcanonical_name\n";
  for (const auto& r : rows) out += r.record_id + '\t' + r.raw_name + '\t' + r.community_id + '\t' + r.canonical_name + '\n';
  return out;
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["precision"] = metrics.precision;
  j["recall"] = metrics.recall;
  j["f1"] = metrics.f1;
  j["tp"] = confusion.tp;
  j["fp"] = confusion.fp;
  j["fn"] = confusion.fn;
  j["n_records"] = n_records;
  j["n_pred_clusters"] = n_pred_clusters;
  j["n_gold_clusters"] = n_gold_clusters;
  j["reduction_rate"] = reduction_rate ? nlohmann::ordered_json(*reduction_rate) : nlohmann::ordered_json(nullptr);
  j["bcubed"] = {{"precision", bcubed.precision}, {"recall", bcubed.recall}, {"f1", bcubed.f1}};
  j["n_missing_pred"] = n_missing_pred;
  return j.dump(2) + "\n";
}

EvalReport evaluate(std::span<const MappingRow> pred, std::span<const GoldLabel> gold) {
  std::unordered_map<std::string_view, std::string_view> community;
  for (const auto& r : pred) community.emplace(r.record_id, r.community_id);
  std::vector<std::string> p;
  std::vector<std::string> g;
  p.reserve(gold.size());
  g.reserve(gold.size());
  EvalReport report;
  for (const auto& label : gold) {
    const auto it = community.find(label.record_id);
    if (it == community.end()) {
      ++report.n_missing_pred;
      // \x1f cannot occur in a TSV field, so this never collides with a real community id.
      p.push_back("\x1fsingleton:" + label.record_id);
    } else {
      p.emplace_back("c:" + std::string(it->second));
    }
    g.push_back(label.entity_id);
  }
  if (gold.size() - report.n_missing_pred < 2)
    throw InputError("fewer than two gold records appear in the prediction; metrics are undefined");
  report.confusion = pairwise_confusion(p, g);
  report.metrics = compute_metrics(report.confusion);
  report.bcubed = harmonizer::bcubed(p, g);
  report.n_records = gold.size();
  report.n_pred_clusters = distinct(p);
  report.n_gold_clusters = distinct(g);
  return report;
}

PortfolioRow compute_portfolio(const std::string& focus_id, std::span<const MappingRow> pred,
                               std::span<const AssigneeRecord> records) {
  PortfolioRow row;
  row.record_id = focus_id;
  const MappingRow* focus = nullptr;
  for (const auto& r : pred) {
    if (r.record_id == focus_id) focus = &r;
  }
  if (!focus) {
    row.missing = true;
    return row;
  }
  row.raw_name = focus->raw_name;
  std::unordered_map<std::string_view, std::uint64_t> counts;
  for (const auto& rec : records) counts.emplace(rec.record_id, rec.patent_count);
  for (const auto& r : pred) {
    if (r.community_id != focus->community_id) continue;
    ++row.variants;
    if (const auto it = counts.find(r.record_id); it != counts.end()) row.portfolio += it->second;
  }
  return row;
}

std::vector<PortfolioRow> portfolio_report(std::span<const MappingRow> pred, std::span<const AssigneeRecord> records,
                                           std::span<const std::string> focus_ids) {
  std::vector<PortfolioRow> out;
  for (const auto& id : focus_ids) out.push_back(compute_portfolio(id, pred, records));
  return out;
}

}  // namespace harmonizer
