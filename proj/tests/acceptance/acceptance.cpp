// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance [criterion numbers...]   (default: all)

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "harmonizer/pipeline.hpp"
#include "harmonizer/util/digest.hpp"
#include "pair_oracle.hpp"
#include "planted.hpp"
#include "random_profiles.hpp"
#include "support.hpp"

using namespace harmonizer;
namespace fs = std::filesystem;

namespace {

// Tolerances and limits.
constexpr double kScoreTol = 1e-12;
constexpr double kBridgenessTol = 1e-9;
constexpr double kIdfTol = 1e-12;
constexpr double kPlantedMinF1 = 0.95;
constexpr double kDeskMinF1 = 0.90;
constexpr double kDeskMinReduction = 0.30;
constexpr double kDeskMaxReduction = 0.60;
constexpr double kTpeMaxMedianError = 0.05;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<Outcome()> run;
};

// ---- 1 -------------------------------------------------------------------

NameProfile axis_profile(std::string id, NameClass cls, std::vector<std::string> tokens, std::set<std::string> domains,
                         std::set<std::string> url_tokens, std::vector<double> vec) {
  NameProfile p;
  p.id = std::move(id);
  p.name_class = cls;
  p.tokens = std::move(tokens);
  p.domains = std::move(domains);
  p.url_tokens = std::move(url_tokens);
  p.url_eligible = !p.url_tokens.empty();
  p.embedding.record_id = p.id;
  p.embedding.vector = std::move(vec);
  return p;
}

Outcome score_bounds() {
  const WeightVector unit;
  Rng rng(1);
  double lo1 = INFINITY, hi1 = -INFINITY, lo2 = INFINITY, hi2 = -INFINITY;
  bool inside = true;
  std::vector<double> cosines{-1.0, 1.0};
  for (int i = 0; i < 200; ++i) cosines.push_back(rng.uniform(-1.0, 1.0));
  for (double c : cosines) {
    for (int bits = 0; bits < 16; ++bits) {
      ConditionVector v{NameClass::Type1, std::uint8_t(bits & 1), std::uint8_t((bits >> 1) & 1),
                        std::uint8_t((bits >> 2) & 1), std::uint8_t((bits >> 3) & 1), c, false};
      const double s = matching_score(v, unit);
      lo1 = std::min(lo1, s);
      hi1 = std::max(hi1, s);
      inside &= s >= -1.0 - kScoreTol && s <= 5.0 + kScoreTol;
    }
    for (int d = 0; d < 2; ++d) {
      ConditionVector v{NameClass::Type2, 0, 0, 0, std::uint8_t(d), c, false};
      const double s = matching_score(v, unit);
      lo2 = std::min(lo2, s);
      hi2 = std::max(hi2, s);
      inside &= s >= -1.0 - kScoreTol && s <= 2.0 + kScoreTol;
    }
  }
  // The extremes through real condition evaluation.
  const auto a = axis_profile("a", NameClass::Type1, {"acme", "labs"}, {"acme.com"}, {"acme"}, {1, 0});
  const auto b = axis_profile("b", NameClass::Type1, {"acme", "labs"}, {"acme.com"}, {"acme"}, {1, 0});
  const auto c = axis_profile("c", NameClass::Type1, {"zeta"}, {"zeta.com"}, {}, {-1, 0});
  const double max1 = matching_score(evaluate_conditions(a, b), unit);
  const double min1 = matching_score(evaluate_conditions(a, c), unit);
  const auto p = axis_profile("p", NameClass::Type2, {"pharma", "group"}, {"pg.com"}, {}, {0, 1});
  const auto q = axis_profile("q", NameClass::Type2, {"pharma", "group"}, {"pg.com"}, {}, {0, 1});
  const auto r = axis_profile("r", NameClass::Type2, {"tech", "group"}, {"tg.com"}, {}, {0, -1});
  const double max2 = matching_score(evaluate_conditions(p, q), unit);
  const double min2 = matching_score(evaluate_conditions(p, r), unit);

  const bool attained = std::abs(lo1 + 1) <= kScoreTol && std::abs(hi1 - 5) <= kScoreTol &&
                        std::abs(lo2 + 1) <= kScoreTol && std::abs(hi2 - 2) <= kScoreTol &&
                        std::abs(max1 - 5) <= kScoreTol && std::abs(min1 + 1) <= kScoreTol &&
                        std::abs(max2 - 2) <= kScoreTol && std::abs(min2 + 1) <= kScoreTol;
  return {inside && attained, fmt::format("type1 [{}, {}], type2 [{}, {}], evaluated pairs {} / {} and {} / {}", lo1,
                                          hi1, lo2, hi2, min1, max1, min2, max2)};
}

// ---- 2 -------------------------------------------------------------------

Outcome blocking_lossless() {
  struct Setting {
    std::size_t n;
    std::uint64_t seed;
    WeightVector w;
    double tau;
  };
  const std::vector<Setting> settings{
      {2000, 101, WeightVector{}, 2.5},
      {2000, 202, WeightVector{}, 1.5},
      {1500, 303, WeightVector{0.4, 0.7, 0.3, 0.9, 0.6}, 0.65},
  };
  bool ok = true;
  std::string detail;
  for (const auto& s : settings) {
    const auto corpus = test_support::random_corpus(s.n, s.seed, 40);
    const auto& ps = corpus.profiles;
    std::set<std::pair<std::uint32_t, std::uint32_t>> brute;
    for (const auto& sp : score_pairs(ps, all_within_class_pairs(ps), s.w)) {
      if (sp.score >= s.tau) brute.insert({sp.a, sp.b});
    }
    std::set<std::pair<std::uint32_t, std::uint32_t>> blocked;
    const auto candidates = generate_candidate_pairs(ps, corpus.common, s.w, s.tau);
    for (const auto& sp : score_pairs(ps, candidates, s.w)) {
      if (sp.score >= s.tau) blocked.insert({sp.a, sp.b});
    }
    const std::size_t all = ps.size() * (ps.size() - 1) / 2;
    ok &= s.tau > s.w.cos && blocked == brute && candidates.size() < all;
    detail += fmt::format("{}n: {} above-threshold pairs, {} candidates; ", s.n, brute.size(), candidates.size());
  }
  return {ok, detail};
}

// ---- 3 -------------------------------------------------------------------

SimilarityGraph from_graph6(const std::string& line) {
  const auto n = static_cast<std::uint32_t>(line[0] - 63);
  SimilarityGraph g;
  for (std::uint32_t i = 0; i < n; ++i) g.add_node(std::to_string(i));
  std::size_t bit = 0;
  for (std::uint32_t j = 1; j < n; ++j) {
    for (std::uint32_t i = 0; i < j; ++i, ++bit) {
      const int chunk = line[1 + bit / 6] - 63;
      if ((chunk >> (5 - bit % 6)) & 1) g.add_edge(i, j, 1.0);
    }
  }
  return g;
}

// sum over admissible {s, t} of sigma(s,v) sigma(v,t) / sigma(s,t), with
// distances and path counts from per-source BFS.
std::vector<double> bridgeness_oracle(const SimilarityGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  std::vector<std::vector<double>> sigma(n, std::vector<double>(n, 0.0));
  for (std::uint32_t s = 0; s < n; ++s) {
    std::vector<std::uint32_t> queue{s};
    dist[s][s] = 0;
    sigma[s][s] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const auto v = queue[h];
      for (const auto& [w, _] : g.neighbors(v)) {
        if (dist[s][w] < 0) {
          dist[s][w] = dist[s][v] + 1;
          queue.push_back(w);
        }
        if (dist[s][w] == dist[s][v] + 1) sigma[s][w] += sigma[s][v];
      }
    }
  }
  std::vector<double> out(n, 0.0);
  for (std::uint32_t v = 0; v < n; ++v) {
    for (std::uint32_t s = 0; s < n; ++s) {
      for (std::uint32_t t = s + 1; t < n; ++t) {
        if (dist[s][v] < 2 || dist[t][v] < 2 || dist[s][t] < 0) continue;
        if (dist[s][v] + dist[v][t] == dist[s][t]) out[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
      }
    }
  }
  return out;
}

Outcome bridgeness_equivalence() {
  std::ifstream in(test_support::fixture("connected_graphs_upto8.g6"));
  std::string line;
  std::size_t graphs = 0;
  double worst = 0;
  auto compare = [&](const SimilarityGraph& g) {
    const auto got = bridgeness_centrality(g);
    const auto want = bridgeness_oracle(g);
    for (std::size_t v = 0; v < got.size(); ++v) worst = std::max(worst, std::abs(got[v] - want[v]));
    ++graphs;
  };
  std::vector<std::size_t> by_order(9, 0);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto g = from_graph6(line);
    ++by_order[g.node_count()];
    compare(g);
  }
  const std::vector<std::size_t> expected{0, 1, 1, 2, 6, 21, 112, 853, 11117};
  Rng rng(12);
  for (int i = 0; i < 100; ++i) {
    SimilarityGraph g;
    for (int v = 0; v < 12; ++v) g.add_node(std::to_string(v));
    const double p = rng.uniform(0.15, 0.6);
    for (std::uint32_t u = 0; u < 12; ++u)
      for (std::uint32_t v = u + 1; v < 12; ++v)
        if (rng.uniform() < p) g.add_edge(u, v, 1.0);
    compare(g);
  }
  SimilarityGraph path;
  for (int v = 0; v < 5; ++v) path.add_node(std::to_string(v));
  for (std::uint32_t v = 0; v < 4; ++v) path.add_edge(v, v + 1, 1.0);
  const double center = bridgeness_centrality(path)[2];
  const bool ok = by_order == expected && worst <= kBridgenessTol && center == 1.0;
  return {ok, fmt::format("{} graphs, max |diff| {:.3g}, 5-path center {}", graphs, worst, center)};
}

// ---- 4 -------------------------------------------------------------------

Outcome planted_recovery() {
  Rng rng(4);
  double total = 0;
  double worst = 1;
  for (int seed = 0; seed < 20; ++seed) {
    // Equal block sizes, at least 6 nodes each, at most 60 nodes in total.
    const std::size_t blocks = 2 + rng.below(5);
    const std::size_t size = 6 + rng.below(60 / blocks - 5);
    const std::vector<std::size_t> sizes(blocks, size);
    const auto planted = test_support::planted_partition(sizes, 0.9, 0.05, 1000 + seed);
    FilterParams params;
    params.seed = static_cast<std::uint64_t>(seed);
    const auto found = refine_communities(planted.graph, params);
    std::vector<std::string> pred, gold;
    for (std::size_t v = 0; v < found.community.size(); ++v) {
      pred.push_back(std::to_string(found.community[v]));
      gold.push_back(std::to_string(planted.block[v]));
    }
    const double f1 = compute_metrics(pairwise_confusion(pred, gold)).f1;
    total += f1;
    worst = std::min(worst, f1);
  }
  const double mean = total / 20;
  return {mean >= kPlantedMinF1, fmt::format("mean F1 {:.4f}, min {:.4f}", mean, worst)};
}

// ---- 5 -------------------------------------------------------------------

PipelineConfig desk_config(const fs::path& out) {
  PipelineConfig cfg = load_config(test_support::fixture("desk/config.json"));
  cfg.output.dir = out;
  return cfg;
}

Outcome desk_corpus() {
  test_support::TempDir dir;
  const auto cfg = desk_config(dir / "out");
  const auto outcome = run_pipeline(cfg);
  const auto report = evaluate(outcome.mapping, load_gold_standard(cfg.input.gold));
  std::set<std::string> raw, communities;
  for (const auto& m : outcome.mapping) {
    raw.insert(m.raw_name);
    communities.insert(m.community_id);
  }
  const double reduction = reduction_rate(raw.size(), communities.size());
  const bool ok = outcome.mapping.size() == 300 && report.metrics.f1 >= kDeskMinF1 &&
                  reduction >= kDeskMinReduction && reduction <= kDeskMaxReduction;
  return {ok, fmt::format("F1 {:.4f} (P {:.4f}, R {:.4f}), reduction {:.4f} ({} names -> {} communities)",
                          report.metrics.f1, report.metrics.precision, report.metrics.recall, reduction, raw.size(),
                          communities.size())};
}

// ---- 6 -------------------------------------------------------------------

Outcome metric_oracle() {
  Rng rng(6);
  int equal = 0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 2 + rng.below(199);
    const auto pred = test_support::random_labels(n, 1 + rng.below(n), rng);
    const auto gold = test_support::random_labels(n, 1 + rng.below(n), rng);
    const auto fast = pairwise_confusion(pred, gold);
    const auto slow = test_support::enumerate_pairs(pred, gold);
    const auto mf = compute_metrics(fast);
    const auto ms = compute_metrics(slow);
    equal += fast == slow && mf.precision == ms.precision && mf.recall == ms.recall && mf.f1 == ms.f1;
  }
  const auto hand = compute_metrics({1, 1, 2});
  const bool ok = equal == 50 && hand.f1 == 0.4 && hand.precision == 0.5;
  return {ok, fmt::format("{}/50 partitions equal, hand case F1 {}", equal, hand.f1)};
}

// ---- 7 -------------------------------------------------------------------

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

Outcome tpe_vs_random() {
  const SearchSpace space{{{"x", 0.0, 1.0}}};
  const Objective f = [](const std::vector<double>& p, std::uint64_t) { return -(p[0] - 0.3) * (p[0] - 0.3); };
  std::vector<double> tpe_best, tpe_err, random_best;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TpeConfig cfg;
    cfg.seed = seed;
    const auto r = optimize(f, space, 50, cfg);
    tpe_best.push_back(r.best_trial().objective);
    tpe_err.push_back(std::abs(r.best_trial().params[0] - 0.3));
    Rng rng(derive_seed(seed, 0x72616e64));
    double best = -INFINITY;
    for (int t = 0; t < 50; ++t) best = std::max(best, f({rng.uniform()}, 0));
    random_best.push_back(best);
  }
  const double mt = median(tpe_best), mr = median(random_best), me = median(tpe_err);
  return {mt >= mr && me < kTpeMaxMedianError,
          fmt::format("median best TPE {:.3g} vs random {:.3g}, median |x-0.3| {:.4f}", mt, mr, me)};
}

// ---- 8 -------------------------------------------------------------------

Outcome tuning_improves() {
  PipelineConfig cfg = load_config(test_support::fixture("desk/config.json"));
  cfg.tune.trials = 30;
  cfg.tune.seed_default_trial = true;
  const auto ctx = make_tuning_context(cfg);
  const double baseline = tuning_objective(ctx, params_from_config(cfg), cfg.graph.seed);
  const auto result = run_tuning(ctx, {});
  const double best = result.best_trial().objective;
  const double first = result.history.empty() ? -1 : result.history[0].objective;
  const bool ok = result.history.size() == 30 && first == baseline && best >= baseline;
  return {ok, fmt::format("default F1 {:.4f}, best F1 {:.4f} at trial {}", baseline, best, result.best)};
}

// ---- 9 -------------------------------------------------------------------

Outcome determinism() {
  test_support::TempDir dir;
  const auto config = test_support::fixture("desk/config.json");
  std::vector<std::string> mappings;
  for (const char* name : {"a", "b"}) {
    const std::string cmd = fmt::format("'{}' --log-level off --seed 7 --config '{}' run --out '{}' >/dev/null 2>&1",
                                        HARMONIZER_CLI, config.string(), (dir / name).string());
    const int status = std::system(cmd.c_str());
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {false, "run exited with status " + std::to_string(status)};
    mappings.push_back(test_support::slurp(dir / name / "mapping.tsv"));
  }
  const bool ok = !mappings[0].empty() && mappings[0] == mappings[1];
  return {ok, fmt::format("mapping.tsv {} bytes, sha256 {}", mappings[0].size(), sha256_hex(mappings[0]).substr(0, 16))};
}

// ---- 10 ------------------------------------------------------------------

Outcome idf_oracle() {
  Rng rng(10);
  double worst = 0;
  for (int c = 0; c < 20; ++c) {
    const std::size_t n = 1 + rng.below(300);
    std::vector<std::vector<std::string>> docs(n);
    for (auto& d : docs) {
      const std::size_t len = 1 + rng.below(5);
      for (std::size_t t = 0; t < len; ++t) d.push_back("t" + std::to_string(rng.below(1 + rng.below(200))));
    }
    std::map<std::string, double> df;
    for (const auto& d : docs) {
      for (const auto& t : std::set<std::string>(d.begin(), d.end())) df[t] += 1;
    }
    double lo = INFINITY, hi = -INFINITY;
    std::map<std::string, double> raw;
    for (const auto& [t, k] : df) {
      raw[t] = std::log(double(n) / k);
      lo = std::min(lo, raw[t]);
      hi = std::max(hi, raw[t]);
    }
    const auto idf = compute_idf(docs);
    for (const auto& [t, r] : raw) {
      const double want = hi > lo ? kIdfFloor + (1 - kIdfFloor) * (r - lo) / (hi - lo) : 1.0;
      worst = std::max(worst, std::abs(idf.weight(t) - want));
    }
  }
  return {worst <= kIdfTol, fmt::format("max |diff| {:.3g} over 20 corpora", worst)};
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::warn);
  const std::vector<Criterion> criteria{
      {1, "score bounds", 1, score_bounds},
      {2, "blocking losslessness", 120, blocking_lossless},
      {3, "bridgeness oracle equivalence", 300, bridgeness_equivalence},
      {4, "planted-partition recovery", 60, planted_recovery},
      {5, "desk corpus end to end", 120, desk_corpus},
      {6, "metric oracle", 10, metric_oracle},
      {7, "TPE beats random search", 30, tpe_vs_random},
      {8, "tuning improves the pipeline", 600, tuning_improves},
      {9, "determinism of run", 300, determinism},
      {10, "idf oracle", 5, idf_oracle},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::cout << fmt::format("{} {:>2} {}: {} [{:.2f}s, limit {}s{}]", pass ? "PASS" : "FAIL", c.id, c.name, o.detail,
                             secs, c.limit_s, in_time ? "" : ", too slow")
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
