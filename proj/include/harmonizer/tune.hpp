#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "harmonizer/util/rng.hpp"

namespace harmonizer {

struct Dimension {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
};

struct SearchSpace {
  std::vector<Dimension> dims;

  // The nine pipeline hyperparameters: w_token, w_first_token, w_url_text,
  // w_domain, w_cos in [0.1, 1]; threshold [0.5, 5]; resolution [0.001, 2];
  // bridgeness [-2, 2]; location_boost [0, 2].
  static SearchSpace pipeline_default();

  // Throws ConfigError unless every dimension has finite lower < upper and names are unique.
  void validate() const;
  std::size_t size() const noexcept { return dims.size(); }
  long index_of(std::string_view name) const;
  bool contains(std::span<const double> params) const;
};

struct Trial {
  std::uint64_t trial_id = 0;
  std::vector<double> params;
  double objective = 0.0;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
  std::optional<std::string> error;
};

enum class BandwidthRule { Interval, Scott };

struct TpeConfig {
  double gamma = 0.25;
  std::size_t n_startup = 10;
  std::size_t n_candidates = 24;
  BandwidthRule bandwidth_rule = BandwidthRule::Interval;
  std::uint64_t seed = 0;

  void validate() const;
};

// good = the ceil(gamma * n) best trials (higher objective first, then lower
// trial_id); bad = the rest. ContractError on an empty history.
std::pair<std::vector<Trial>, std::vector<Trial>> split_trials(std::span<const Trial> history, double gamma);

// Equal-weight mixture on [lower, upper]: one Gaussian kernel per sample,
// truncated to the interval, plus one uniform prior component.
class ParzenEstimator {
 public:
  ParzenEstimator(std::vector<double> samples, double lower, double upper,
                  BandwidthRule rule = BandwidthRule::Interval);

  double pdf(double x) const;
  double log_pdf(double x) const;
  double sample(Rng& rng) const;
  double bandwidth() const noexcept { return bandwidth_; }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  std::vector<double> samples_;
  std::vector<double> mass_;  // probability mass of each kernel inside the interval
  double lower_;
  double upper_;
  double bandwidth_ = 1.0;
};

// Uniform draw while the history is shorter than n_startup; afterwards, per
// dimension, the candidate (drawn from the good-trial density) that maximizes
// good density / bad density.
std::vector<double> suggest(std::span<const Trial> history, const SearchSpace& space, const TpeConfig& cfg, Rng& rng);

// params, trial seed -> objective (higher is better).
using Objective = std::function<double(const std::vector<double>&, std::uint64_t)>;

struct TuneResult {
  std::vector<Trial> history;
  std::size_t best = 0;  // index into history

  const Trial& best_trial() const { return history.at(best); }
};

// Runs n_trials sequential trials. `enqueued` parameter vectors are evaluated
// first, in order. An objective that throws or returns a non-finite value is
// recorded as 0 with an error note. `on_trial` sees every finished trial.
TuneResult optimize(const Objective& objective, const SearchSpace& space, std::size_t n_trials, const TpeConfig& cfg,
                    std::span<const std::vector<double>> enqueued = {},
                    const std::function<void(const Trial&)>& on_trial = {});

// One JSON object per line: trial_id, params (by name), objective, seed,
// wall_time_s, error.
std::string trial_to_json_line(const Trial& t, const SearchSpace& space);

}  // namespace harmonizer
