#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "json.hpp"

#include "harmonizer/error.hpp"
#include "harmonizer/tune.hpp"

namespace harmonizer {

SearchSpace SearchSpace::pipeline_default() {
  return SearchSpace{{
      {"w_token", 0.1, 1.0},
      {"w_first_token", 0.1, 1.0},
      {"w_url_text", 0.1, 1.0},
      {"w_domain", 0.1, 1.0},
      {"w_cos", 0.1, 1.0},
      {"threshold", 0.5, 5.0},
      {"resolution", 0.001, 2.0},
      {"bridgeness", -2.0, 2.0},
      {"location_boost", 0.0, 2.0},
  }};
}

void SearchSpace::validate() const {
  if (dims.empty()) throw ConfigError("search space has no dimensions");
  std::set<std::string> names;
  for (const auto& d : dims) {
    if (!std::isfinite(d.lower) || !std::isfinite(d.upper) || !(d.lower < d.upper))
      throw ConfigError("search space '" + d.name + "' needs finite lower < upper");
    if (!names.insert(d.name).second) throw ConfigError("search space lists '" + d.name + "' twice");
  }
}

long SearchSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i].name == name) return static_cast<long>(i);
  }
  return -1;
}

bool SearchSpace::contains(std::span<const double> params) const {
  if (params.size() != dims.size()) return false;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (!(params[i] >= dims[i].lower && params[i] <= dims[i].upper)) return false;
  }
  return true;
}

void TpeConfig::validate() const {
  if (!(gamma > 0 && gamma < 1)) throw ConfigError("tune.gamma must lie in (0, 1)");
  if (n_candidates == 0) throw ConfigError("tune.n_candidates must be >= 1");
}

std::pair<std::vector<Trial>, std::vector<Trial>> split_trials(std::span<const Trial> history, double gamma) {
  if (history.empty()) throw ContractError("split_trials: empty history");
  std::vector<Trial> sorted(history.begin(), history.end());
  std::sort(sorted.begin(), sorted.end(), [](const Trial& a, const Trial& b) {
    return a.objective != b.objective ? a.objective > b.objective : a.trial_id < b.trial_id;
  });
  auto n_good = static_cast<std::size_t>(std::ceil(gamma * static_cast<double>(sorted.size())));
  n_good = std::clamp<std::size_t>(n_good, 1, sorted.size());
  std::vector<Trial> good(sorted.begin(), sorted.begin() + static_cast<long>(n_good));
  std::vector<Trial> bad(sorted.begin() + static_cast<long>(n_good), sorted.end());
  return {std::move(good), std::move(bad)};
}

std::vector<double> suggest(std::span<const Trial> history, const SearchSpace& space, const TpeConfig& cfg, Rng& rng) {
  std::vector<double> out(space.size());
  if (history.size() < std::max<std::size_t>(cfg.n_startup, 1)) {
    for (std::size_t d = 0; d < space.size(); ++d) out[d] = rng.uniform(space.dims[d].lower, space.dims[d].upper);
    return out;
  }
  const auto [good, bad] = split_trials(history, cfg.gamma);
  for (std::size_t d = 0; d < space.size(); ++d) {
    const Dimension& dim = space.dims[d];
    std::vector<double> good_x;
    std::vector<double> bad_x;
    for (const auto& t : good) good_x.push_back(t.params.at(d));
    for (const auto& t : bad) bad_x.push_back(t.params.at(d));
    const ParzenEstimator l(std::move(good_x), dim.lower, dim.upper, cfg.bandwidth_rule);
    const ParzenEstimator g(std::move(bad_x), dim.lower, dim.upper, cfg.bandwidth_rule);
    double best_x = 0.0;
    double best_score = -INFINITY;
    for (std::size_t c = 0; c < cfg.n_candidates; ++c) {
      const double x = l.sample(rng);
      const double score = l.log_pdf(x) - g.log_pdf(x);
      if (c == 0 || score > best_score) {
        best_score = score;
        best_x = x;
      }
    }
    out[d] = best_x;
  }
  return out;
}

TuneResult optimize(const Objective& objective, const SearchSpace& space, std::size_t n_trials, const TpeConfig& cfg,
                    std::span<const std::vector<double>> enqueued, const std::function<void(const Trial&)>& on_trial) {
  space.validate();
  cfg.validate();
  TuneResult result;
  for (std::size_t id = 0; id < n_trials; ++id) {
    Trial t;
    t.trial_id = id;
    t.seed = derive_seed(cfg.seed, id);
    if (id < enqueued.size()) {
      t.params = enqueued[id];
      if (!space.contains(t.params))
        throw ConfigError("enqueued trial " + std::to_string(id) + " lies outside the search space");
    } else {
      Rng rng(derive_seed(cfg.seed ^ 0x7470655f73756767ULL, id));
      t.params = suggest(result.history, space, cfg, rng);
    }
    const auto start = std::chrono::steady_clock::now();
    try {
      const double value = objective(t.params, t.seed);
      if (std::isfinite(value)) {
        t.objective = value;
      } else {
        t.error = "objective returned a non-finite value";
      }
    } catch (const std::exception& e) {
      t.error = e.what();
    }
    t.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.history.push_back(t);
    const Trial& best = result.history[result.best];
    if (t.objective > best.objective) result.best = result.history.size() - 1;
    if (on_trial) on_trial(t);
  }
  return result;
}

std::string trial_to_json_line(const Trial& t, const SearchSpace& space) {
  nlohmann::ordered_json j;
  j["trial_id"] = t.trial_id;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (std::size_t d = 0; d < space.size() && d < t.params.size(); ++d) params[space.dims[d].name] = t.params[d];
  j["params"] = params;
  j["objective"] = t.objective;
  j["seed"] = t.seed;
  j["wall_time_s"] = t.wall_time_s;
  j["error"] = t.error ? nlohmann::ordered_json(*t.error) : nlohmann::ordered_json(nullptr);
  return j.dump();
}

}  // namespace harmonizer
