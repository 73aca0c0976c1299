#include "harmonizer/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "harmonizer/error.hpp"
#include "harmonizer/util/digest.hpp"

namespace harmonizer {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Field {
  std::string key;
  std::function<void(PipelineConfig&, const json&, const fs::path&)> set;
  std::function<ordered_json(const PipelineConfig&)> get;
};

template <typename T>
using Access = T& (*)(PipelineConfig&);

template <typename T>
T& via(const PipelineConfig& c, Access<T> access) {
  return access(const_cast<PipelineConfig&>(c));
}

[[noreturn]] void type_error(const std::string& key, const char* expected, const json& v) {
  throw ConfigError("config key '" + key + "' expects " + expected + ", got " + v.dump());
}

Field real(std::string key, Access<double> access) {
  return {key,
          [key, access](PipelineConfig& c, const json& v, const fs::path&) {
            if (!v.is_number() || !std::isfinite(v.get<double>())) type_error(key, "a finite number", v);
            access(c) = v.get<double>();
          },
          [access](const PipelineConfig& c) { return ordered_json(via(c, access)); }};
}

template <typename T>
Field integer(std::string key, Access<T> access) {
  return {key,
          [key, access](PipelineConfig& c, const json& v, const fs::path&) {
            if (!v.is_number_integer() || v.get<long long>() < 0) type_error(key, "a non-negative integer", v);
            access(c) = static_cast<T>(v.get<unsigned long long>());
          },
          [access](const PipelineConfig& c) { return ordered_json(via(c, access)); }};
}

Field boolean(std::string key, Access<bool> access) {
  return {key,
          [key, access](PipelineConfig& c, const json& v, const fs::path&) {
            if (!v.is_boolean()) type_error(key, "true or false", v);
            access(c) = v.get<bool>();
          },
          [access](const PipelineConfig& c) { return ordered_json(via(c, access)); }};
}

Field string(std::string key, Access<std::string> access) {
  return {key,
          [key, access](PipelineConfig& c, const json& v, const fs::path&) {
            if (!v.is_string()) type_error(key, "a string", v);
            access(c) = v.get<std::string>();
          },
          [access](const PipelineConfig& c) { return ordered_json(via(c, access)); }};
}

Field path(std::string key, Access<fs::path> access) {
  return {key,
          [key, access](PipelineConfig& c, const json& v, const fs::path& base) {
            if (!v.is_string()) type_error(key, "a path string", v);
            fs::path p = v.get<std::string>();
            if (!p.empty() && p.is_relative() && !base.empty()) p = base / p;
            access(c) = p.lexically_normal();
          },
          [access](const PipelineConfig& c) { return ordered_json(via(c, access).generic_string()); }};
}

template <typename E>
Field choice(std::string key, Access<E> access, std::vector<std::pair<std::string, E>> options) {
  return {key,
          [key, access, options](PipelineConfig& c, const json& v, const fs::path&) {
            if (v.is_string()) {
              for (const auto& [name, value] : options) {
                if (name == v.get<std::string>()) {
                  access(c) = value;
                  return;
                }
              }
            }
            std::string names;
            for (const auto& [name, _] : options) names += (names.empty() ? "" : "|") + name;
            type_error(key, names.c_str(), v);
          },
          [access, options](const PipelineConfig& c) {
            for (const auto& [name, value] : options) {
              if (value == via(c, access)) return ordered_json(name);
            }
            return ordered_json(nullptr);
          }};
}

Field space_dim(const std::string& name) {
  const std::string key = "tune.space." + name;
  auto find = [name](PipelineConfig& c) -> Dimension& {
    const long i = c.tune.space.index_of(name);
    if (i < 0) throw ConfigError("search space has no dimension " + name);
    return c.tune.space.dims[static_cast<std::size_t>(i)];
  };
  return {key,
          [key, find](PipelineConfig& c, const json& v, const fs::path&) {
            if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
              type_error(key, "[lower, upper]", v);
            Dimension& d = find(c);
            d.lower = v[0].get<double>();
            d.upper = v[1].get<double>();
          },
          [find](const PipelineConfig& c) {
            const Dimension& d = find(const_cast<PipelineConfig&>(c));
            return ordered_json::array({d.lower, d.upper});
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> all = [] {
    std::vector<Field> f;
    // clang-format off
    f.push_back(path("input.assignees", [](PipelineConfig& c) -> fs::path& { return c.input.assignees; }));
    f.push_back(path("input.gold", [](PipelineConfig& c) -> fs::path& { return c.input.gold; }));
    f.push_back(path("input.cache", [](PipelineConfig& c) -> fs::path& { return c.input.cache; }));
    f.push_back(path("output.dir", [](PipelineConfig& c) -> fs::path& { return c.output.dir; }));
    f.push_back(path("ingest.institutions", [](PipelineConfig& c) -> fs::path& { return c.ingest.institutions; }));
    f.push_back(boolean("ingest.match_individuals", [](PipelineConfig& c) -> bool& { return c.ingest.match_individuals; }));
    f.push_back(boolean("augment.offline", [](PipelineConfig& c) -> bool& { return c.augment.offline; }));
    f.push_back(integer<std::size_t>("augment.blocklist_k", [](PipelineConfig& c) -> std::size_t& { return c.augment.blocklist_k; }));
    f.push_back(integer<unsigned>("augment.parallelism", [](PipelineConfig& c) -> unsigned& { return c.augment.parallelism; }));
    f.push_back(string("provider.endpoint", [](PipelineConfig& c) -> std::string& { return c.provider.endpoint; }));
    f.push_back(string("provider.query_param", [](PipelineConfig& c) -> std::string& { return c.provider.query_param; }));
    f.push_back(string("provider.suggestion_selector", [](PipelineConfig& c) -> std::string& { return c.provider.suggestion_selector; }));
    f.push_back(string("provider.result_selector", [](PipelineConfig& c) -> std::string& { return c.provider.result_selector; }));
    f.push_back(real("provider.rate_limit_per_s", [](PipelineConfig& c) -> double& { return c.provider.rate_limit_per_s; }));
    f.push_back(integer<int>("provider.max_retries", [](PipelineConfig& c) -> int& { return c.provider.max_retries; }));
    f.push_back(real("provider.backoff_initial_s", [](PipelineConfig& c) -> double& { return c.provider.backoff_initial_s; }));
    f.push_back(real("provider.timeout_s", [](PipelineConfig& c) -> double& { return c.provider.timeout_s; }));
    f.push_back(integer<std::size_t>("provider.max_text_code_points", [](PipelineConfig& c) -> std::size_t& { return c.provider.max_text_code_points; }));
    f.push_back(integer<std::size_t>("parse.common_words", [](PipelineConfig& c) -> std::size_t& { return c.parse.common_words; }));
    f.push_back(path("parse.designators", [](PipelineConfig& c) -> fs::path& { return c.parse.designators; }));
    f.push_back(boolean("parse.strip_interior", [](PipelineConfig& c) -> bool& { return c.parse.strip_interior; }));
    f.push_back(choice<EmbedBackendKind>("embed.backend", [](PipelineConfig& c) -> EmbedBackendKind& { return c.embed.backend; },
                                         {{"hashing", EmbedBackendKind::Hashing}, {"file", EmbedBackendKind::File}}));
    f.push_back(integer<std::size_t>("embed.dim", [](PipelineConfig& c) -> std::size_t& { return c.embed.dim; }));
    f.push_back(integer<std::uint64_t>("embed.seed", [](PipelineConfig& c) -> std::uint64_t& { return c.embed.seed; }));
    f.push_back(path("embed.vectors_path", [](PipelineConfig& c) -> fs::path& { return c.embed.vectors; }));
    f.push_back(real("match.weights.token", [](PipelineConfig& c) -> double& { return c.match.weights.token; }));
    f.push_back(real("match.weights.first_token", [](PipelineConfig& c) -> double& { return c.match.weights.first_token; }));
    f.push_back(real("match.weights.url_text", [](PipelineConfig& c) -> double& { return c.match.weights.url_text; }));
    f.push_back(real("match.weights.domain", [](PipelineConfig& c) -> double& { return c.match.weights.domain; }));
    f.push_back(real("match.weights.cos", [](PipelineConfig& c) -> double& { return c.match.weights.cos; }));
    f.push_back(choice<CosineSource>("match.cos_on", [](PipelineConfig& c) -> CosineSource& { return c.match.cos_on; },
                                     {{"cleaned", CosineSource::Cleaned}, {"raw", CosineSource::Raw}}));
    f.push_back(boolean("match.brute_force", [](PipelineConfig& c) -> bool& { return c.match.brute_force; }));
    f.push_back(real("graph.threshold", [](PipelineConfig& c) -> double& { return c.graph.threshold; }));
    f.push_back(real("graph.resolution", [](PipelineConfig& c) -> double& { return c.graph.resolution; }));
    f.push_back(real("graph.bridgeness_threshold", [](PipelineConfig& c) -> double& { return c.graph.bridgeness_threshold; }));
    f.push_back(real("graph.location_boost", [](PipelineConfig& c) -> double& { return c.graph.location_boost; }));
    f.push_back(integer<std::uint64_t>("graph.seed", [](PipelineConfig& c) -> std::uint64_t& { return c.graph.seed; }));
    f.push_back(choice<NamingStrategy>("graph.naming", [](PipelineConfig& c) -> NamingStrategy& { return c.graph.naming; },
                                       {{"centroid", NamingStrategy::Centroid}, {"volume", NamingStrategy::Volume}}));
    f.push_back(choice<PruneRule>("graph.prune_rule", [](PipelineConfig& c) -> PruneRule& { return c.graph.prune_rule; },
                                  {{"incident", PruneRule::Incident}, {"edge_bridgeness", PruneRule::EdgeBridgeness}}));
    f.push_back(integer<int>("graph.refine_depth", [](PipelineConfig& c) -> int& { return c.graph.refine_depth; }));
    f.push_back(boolean("graph.refine_until_stable", [](PipelineConfig& c) -> bool& { return c.graph.refine_until_stable; }));
    f.push_back(boolean("graph.boost_before_threshold", [](PipelineConfig& c) -> bool& { return c.graph.boost_before_threshold; }));
    f.push_back(real("tune.gamma", [](PipelineConfig& c) -> double& { return c.tune.tpe.gamma; }));
    f.push_back(integer<std::size_t>("tune.n_startup", [](PipelineConfig& c) -> std::size_t& { return c.tune.tpe.n_startup; }));
    f.push_back(integer<std::size_t>("tune.n_candidates", [](PipelineConfig& c) -> std::size_t& { return c.tune.tpe.n_candidates; }));
    f.push_back(choice<BandwidthRule>("tune.bandwidth_rule", [](PipelineConfig& c) -> BandwidthRule& { return c.tune.tpe.bandwidth_rule; },
                                      {{"interval", BandwidthRule::Interval}, {"scott", BandwidthRule::Scott}}));
    f.push_back(integer<std::uint64_t>("tune.seed", [](PipelineConfig& c) -> std::uint64_t& { return c.tune.tpe.seed; }));
    f.push_back(integer<std::size_t>("tune.trials", [](PipelineConfig& c) -> std::size_t& { return c.tune.trials; }));
    f.push_back(integer<std::size_t>("tune.brute_force_max_names", [](PipelineConfig& c) -> std::size_t& { return c.tune.brute_force_max_names; }));
    f.push_back(boolean("tune.seed_default_trial", [](PipelineConfig& c) -> bool& { return c.tune.seed_default_trial; }));
    for (const auto& d : SearchSpace::pipeline_default().dims) f.push_back(space_dim(d.name));
    f.push_back(integer<unsigned>("run.threads", [](PipelineConfig& c) -> unsigned& { return c.run.threads; }));
    // clang-format on
    return f;
  }();
  return all;
}

const Field* find_field(const std::string& key) {
  for (const auto& f : fields()) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

void flatten(const json& node, const std::string& prefix, std::vector<std::pair<std::string, json>>& out) {
  for (const auto& [k, v] : node.items()) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_object()) {
      flatten(v, key, out);
    } else {
      out.emplace_back(key, v);
    }
  }
}

}  // namespace

void PipelineConfig::set(const std::string& key, const std::string& json_value, const fs::path& base_dir) {
  const Field* f = find_field(key);
  if (!f) throw ConfigError("unknown config key '" + key + "'");
  json v;
  try {
    v = json::parse(json_value);
  } catch (const json::parse_error&) {
    throw ConfigError("config key '" + key + "': value is not JSON: " + json_value);
  }
  f->set(*this, v, base_dir);
}

std::vector<std::string> PipelineConfig::keys() const {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.push_back(f.key);
  return out;
}

void PipelineConfig::validate() const {
  match.weights.validate();
  graph.validate();
  tune.tpe.validate();
  tune.space.validate();
  if (embed.backend == EmbedBackendKind::Hashing && embed.dim < 32) throw ConfigError("embed.dim must be >= 32");
  if (embed.backend == EmbedBackendKind::File && embed.vectors.empty())
    throw ConfigError("embed.backend = file needs embed.vectors_path");
  if (!(provider.rate_limit_per_s > 0)) throw ConfigError("provider.rate_limit_per_s must be > 0");
  if (provider.backoff_initial_s < 0) throw ConfigError("provider.backoff_initial_s must be >= 0");
  if (run.threads == 0) throw ConfigError("run.threads must be >= 1");
  if (augment.parallelism == 0) throw ConfigError("augment.parallelism must be >= 1");
  if (tune.space.size() != SearchSpace::pipeline_default().size())
    throw ConfigError("tune.space must keep all nine dimensions");
}

std::string PipelineConfig::to_json() const {
  ordered_json root = ordered_json::object();
  for (const auto& f : fields()) {
    ordered_json* node = &root;
    std::stringstream parts(f.key);
    std::string part;
    std::vector<std::string> segments;
    while (std::getline(parts, part, '.')) segments.push_back(part);
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
      if (!node->contains(segments[i])) (*node)[segments[i]] = ordered_json::object();
      node = &(*node)[segments[i]];
    }
    (*node)[segments.back()] = f.get(*this);
  }
  return root.dump(2) + "\n";
}

std::string PipelineConfig::hash() const { return sha256_hex(to_json()); }

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  if (!root.is_object()) throw ConfigError("config file " + path.string() + " must hold a JSON object");
  std::vector<std::pair<std::string, json>> flat;
  flatten(root, "", flat);
  PipelineConfig cfg;
  const fs::path base = fs::absolute(path).parent_path();
  for (const auto& [key, value] : flat) {
    const Field* f = find_field(key);
    if (!f) throw ConfigError("unknown config key '" + key + "' in " + path.string());
    f->set(cfg, value, base);
  }
  return cfg;
}

std::string env_var_for_key(const std::string& key) {
  std::string out = "TERR_";
  for (char c : key) out.push_back(c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return out;
}

void apply_env_overrides(PipelineConfig& cfg, const std::function<const char*(const char*)>& getenv_fn) {
  for (const auto& f : fields()) {
    const std::string var = env_var_for_key(f.key);
    const char* raw = getenv_fn ? getenv_fn(var.c_str()) : std::getenv(var.c_str());
    if (!raw) continue;
    json v;
    try {
      v = json::parse(raw);
    } catch (const json::parse_error&) {
      v = std::string(raw);
    }
    try {
      f.set(cfg, v, fs::current_path());
    } catch (const ConfigError& e) {
      throw ConfigError(var + ": " + e.what());
    }
  }
}

}  // namespace harmonizer
