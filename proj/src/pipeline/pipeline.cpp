#include "harmonizer/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <unistd.h>
#include <unordered_set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "json.hpp"

#include "harmonizer/error.hpp"
#include "harmonizer/util/digest.hpp"
#include "harmonizer/util/text.hpp"
#include "harmonizer/util/tsv.hpp"

namespace harmonizer {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

// Unexpected failures become StageError(stage, cause); input and config
// errors keep their type and gain the stage name.
template <typename Fn>
auto stage(const char* name, ordered_json& timings, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  auto finish = [&] {
    timings[name] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };
  spdlog::info("stage {}: start", name);
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      finish();
    } else {
      auto result = fn();
      finish();
      return result;
    }
  } catch (const StageError&) {
    throw;
  } catch (const InputError& e) {
    throw InputError(std::string(name) + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(name) + ": " + e.what());
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

std::string cleaned_tsv(const PreparedCorpus& c) {
  std::string out = "record_id\tkind\tcorrected_name\tcleaned\tname_class\tdegenerate\tunit_id\n";
  for (std::size_t i = 0; i < c.records.size(); ++i) {
    const CleanName& n = c.cleaned[i];
    out += c.records[i].record_id;
    out += '\t';
    out += to_string(c.kinds[i]);
    out += '\t';
    out += c.corrections[i].value_or("");
    out += '\t';
    out += n.cleaned;
    out += '\t';
    out += n.name_class ? std::string(to_string(*n.name_class)) : "-";
    out += '\t';
    out += n.degenerate ? "1" : "0";
    out += '\t';
    out += c.record_unit[i] >= 0 ? c.profiles[static_cast<std::size_t>(c.record_unit[i])].id : "-";
    out += '\n';
  }
  return out;
}

std::string embeddings_digest(const PreparedCorpus& c) {
  std::string buf;
  for (const auto& p : c.profiles) {
    buf += p.id;
    for (double x : p.embedding.vector) buf += fmt::format(" {}", x);
    buf += '\n';
  }
  return sha256_hex(buf);
}

fs::path staging_dir_for(const fs::path& out) {
  const fs::path parent = out.has_parent_path() ? out.parent_path() : fs::path(".");
  return parent / ("." + out.filename().string() + ".staging-" + std::to_string(::getpid()));
}

}  // namespace

std::unique_ptr<EmbeddingBackend> make_embedding_backend(const PipelineConfig& cfg) {
  if (cfg.embed.backend == EmbedBackendKind::File)
    return std::make_unique<FileBackend>(FileBackend::load(cfg.embed.vectors, cfg.embed.seed));
  return std::make_unique<HashingBackend>(cfg.embed.dim, cfg.embed.seed);
}

PreparedCorpus prepare_corpus(std::vector<AssigneeRecord> records, const AugmentationCache* cache,
                              const PipelineConfig& cfg) {
  PreparedCorpus c;
  c.records = std::move(records);
  const std::size_t n = c.records.size();

  const KeywordList institutions =
      cfg.ingest.institutions.empty() ? KeywordList::default_institutions() : KeywordList::load(cfg.ingest.institutions);
  const LegalDesignatorDictionary loaded_designators =
      cfg.parse.designators.empty() ? LegalDesignatorDictionary() : LegalDesignatorDictionary::load(cfg.parse.designators);
  const LegalDesignatorDictionary& designators =
      cfg.parse.designators.empty() ? LegalDesignatorDictionary::builtin() : loaded_designators;
  CleanOptions clean_options;
  clean_options.strip_interior = cfg.parse.strip_interior;

  std::vector<std::optional<AugmentationResult>> augmentation(n);
  c.kinds.resize(n);
  c.corrections.resize(n);
  c.cleaned.resize(n);
  c.record_unit.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const AssigneeRecord& r = c.records[i];
    c.kinds[i] = classify_name_kind(r.raw_name, institutions, KeywordList::default_organization_markers());
    if (cache) augmentation[i] = cache->get(r.raw_name);
    if (augmentation[i]) {
      ++c.n_augmented;
      c.corrections[i] = augmentation[i]->corrected_name;
    }
    c.cleaned[i] = clean_name(r.record_id, r.raw_name, c.corrections[i], designators, clean_options);
  }

  // Matchable, non-degenerate records grouped by cleaned name.
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) {
    const bool matchable = c.kinds[i] != NameKind::Individual || cfg.ingest.match_individuals;
    if (!matchable || c.cleaned[i].degenerate || c.cleaned[i].tokens.empty()) continue;
    groups[c.cleaned[i].cleaned].push_back(i);
  }
  for (auto& [_, members] : groups) {
    std::sort(members.begin(), members.end(),
              [&](std::size_t a, std::size_t b) { return c.records[a].record_id < c.records[b].record_id; });
    c.unit_members.push_back(members);
  }
  std::sort(c.unit_members.begin(), c.unit_members.end(),
            [&](const auto& a, const auto& b) { return c.records[a.front()].record_id < c.records[b.front()].record_id; });
  const std::size_t n_units = c.unit_members.size();

  std::vector<CleanName> unit_names;
  unit_names.reserve(n_units);
  for (const auto& m : c.unit_members) unit_names.push_back(c.cleaned[m.front()]);
  c.common = build_common_word_list(unit_names, cfg.parse.common_words);

  for (auto& name : c.cleaned) {
    if (!name.tokens.empty()) name.name_class = classify_name_type(name.tokens, c.common);
  }

  std::vector<AugmentationResult> distinct_results;
  {
    std::unordered_set<std::string> seen;
    for (const auto& a : augmentation) {
      if (a && seen.insert(a->query_name).second) distinct_results.push_back(*a);
    }
  }
  c.domain_blocklist = build_frequent_domain_blocklist(distinct_results, cfg.augment.blocklist_k);

  if (n_units == 0) return c;
  const IdfTable idf = compute_idf(std::span<const CleanName>(unit_names));
  const auto backend = make_embedding_backend(cfg);

  c.profiles.resize(n_units);
  c.unit_locations.resize(n_units);
  for (std::size_t u = 0; u < n_units; ++u) {
    const auto& members = c.unit_members[u];
    const std::size_t rep = members.front();
    NameProfile& p = c.profiles[u];
    p.id = c.records[rep].record_id;
    p.tokens = c.cleaned[rep].tokens;
    p.name_class = *c.cleaned[rep].name_class;
    for (std::size_t i : members) {
      c.record_unit[i] = static_cast<long>(u);
      const AugmentationResult* result = augmentation[i] ? &*augmentation[i] : nullptr;
      const DomainInfo info = build_domain_info(c.records[i].record_id, result, p.tokens, c.domain_blocklist, c.common);
      if (info.domain) p.domains.insert(*info.domain);
      p.url_tokens.insert(info.url_tokens.begin(), info.url_tokens.end());
      p.url_eligible = p.url_eligible || info.url_eligible;
      c.unit_locations[u].insert(c.records[i].locations.begin(), c.records[i].locations.end());
    }
    const std::vector<std::string> cos_tokens = cfg.match.cos_on == CosineSource::Raw
                                                    ? text::split_tokens(text::normalize(c.records[rep].raw_name))
                                                    : p.tokens;
    p.embedding = embed_name(p.id, cos_tokens, *backend, idf);
    ++(p.name_class == NameClass::Type1 ? c.n_type1 : c.n_type2);
  }
  return c;
}

std::vector<ScoredPair> match_corpus(const PreparedCorpus& corpus, const PipelineConfig& cfg) {
  std::vector<CandidatePair> candidates;
  if (cfg.match.brute_force) {
    candidates = all_within_class_pairs(corpus.profiles);
  } else {
    // With the boost counted before the threshold, a pair can reach it from
    // score >= threshold - boost.
    const double slack = cfg.graph.boost_before_threshold ? std::max(0.0, cfg.graph.location_boost) : 0.0;
    candidates = generate_candidate_pairs(corpus.profiles, corpus.common, cfg.match.weights,
                                          cfg.graph.threshold - slack);
  }
  return score_pairs(corpus.profiles, candidates, cfg.match.weights, cfg.run.threads);
}

Harmonization harmonize(const PreparedCorpus& corpus, std::span<const ScoredPair> pairs, const FilterParams& params,
                        unsigned threads, bool name_communities) {
  Harmonization h;
  const std::size_t n = corpus.records.size();
  std::vector<std::string> labels;
  labels.reserve(corpus.profiles.size());
  for (const auto& p : corpus.profiles) labels.push_back(p.id);
  const SimilarityGraph g = build_graph(std::move(labels), pairs, corpus.unit_locations, params);
  h.n_edges = g.edge_count();
  const Partition units = refine_communities(g, params, threads);

  std::vector<std::uint32_t> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long u = corpus.record_unit[i];
    raw[i] = u >= 0 ? units.community[static_cast<std::size_t>(u)] : static_cast<std::uint32_t>(units.count + i);
  }
  const Partition records = Partition::from_labels(raw);
  h.n_communities = records.count;

  h.mapping.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    h.mapping[i].record_id = corpus.records[i].record_id;
    h.mapping[i].raw_name = corpus.records[i].raw_name;
    h.mapping[i].community_id = std::to_string(records.community[i]);
  }
  if (!name_communities) return h;

  for (const auto& members : records.members()) {
    std::vector<NamingMember> naming;
    naming.reserve(members.size());
    for (std::uint32_t i : members) {
      const long u = corpus.record_unit[i];
      naming.push_back({corpus.records[i].record_id, corpus.records[i].raw_name, corpus.cleaned[i].cleaned,
                        corpus.records[i].patent_count,
                        u >= 0 ? &corpus.profiles[static_cast<std::size_t>(u)].embedding : nullptr});
    }
    const std::size_t pick = params.naming == NamingStrategy::Volume ? name_community_volume(naming)
                                                                     : name_community_centroid(naming);
    const std::string& canonical = naming[pick].raw_name;
    for (std::uint32_t i : members) h.mapping[i].canonical_name = canonical;
  }
  return h;
}

std::string summarize_json(std::span<const MappingRow> mapping, std::span<const AssigneeRecord> records,
                           std::size_t top_k) {
  std::set<std::string> raw_names;
  for (const auto& r : records) raw_names.insert(r.raw_name);
  if (records.empty()) {
    for (const auto& m : mapping) raw_names.insert(m.raw_name);
  }
  std::map<std::string, std::size_t> sizes;
  std::map<std::string, std::string> canonical;
  std::map<std::string, std::set<std::string>> variants;
  for (const auto& m : mapping) {
    ++sizes[m.community_id];
    canonical[m.community_id] = m.canonical_name;
    variants[m.community_id].insert(m.raw_name);
  }

  ordered_json j;
  j["unique_raw_names"] = raw_names.size();
  j["communities"] = sizes.size();
  try {
    j["reduction_rate"] = reduction_rate(raw_names.size(), sizes.size());
  } catch (const InputError& e) {
    j["reduction_rate"] = nullptr;
    j["message"] = e.what();
  }

  std::vector<std::pair<std::string, std::size_t>> ranked(sizes.begin(), sizes.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  ordered_json top = ordered_json::array();
  for (std::size_t k = 0; k < ranked.size() && k < top_k; ++k) {
    ordered_json e;
    e["community_id"] = ranked[k].first;
    e["canonical_name"] = canonical[ranked[k].first];
    e["records"] = ranked[k].second;
    e["variants"] = variants[ranked[k].first].size();
    top.push_back(e);
  }
  j["largest_communities"] = top;
  return j.dump(2) + "\n";
}

RunOutcome run_pipeline(const PipelineConfig& cfg) {
  ordered_json timings = ordered_json::object();
  ordered_json counts = ordered_json::object();
  stage("config", timings, [&] { cfg.validate(); });
  spdlog::info("resolved config: {}", cfg.to_json());

  auto records = stage("ingest", timings, [&] {
    if (cfg.input.assignees.empty()) throw InputError("input.assignees is not set");
    return load_assignee_table(cfg.input.assignees);
  });
  counts["records"] = records.size();

  AugmentationCache cache_store;
  std::unique_ptr<AugmentationCache> file_cache;
  stage("augment", timings, [&] {
    if (!cfg.input.cache.empty()) {
      if (cfg.augment.offline && !fs::exists(cfg.input.cache))
        throw InputError("offline run needs an existing cache: " + cfg.input.cache.string());
      file_cache = std::make_unique<AugmentationCache>(cfg.input.cache);
    } else if (cfg.augment.offline) {
      spdlog::warn("offline run without a cache: no name is augmented");
    }
    if (cfg.augment.offline) return;
    std::vector<std::string> names;
    std::set<std::string> seen;
    for (const auto& r : records) {
      if (seen.insert(r.raw_name).second) names.push_back(r.raw_name);
    }
    HttpSearchProvider provider(cfg.provider);
    RateLimiter limiter(cfg.provider.rate_limit_per_s);
    FetchContext ctx;
    ctx.limiter = &limiter;
    const AugmentReport report =
        augment_all(names, provider, file_cache ? *file_cache : cache_store, cfg.augment.parallelism, ctx);
    spdlog::info("augment: {} cached, {} fetched, {} failed", report.cached, report.fetched, report.failed.size());
  });
  const AugmentationCache* cache = file_cache ? file_cache.get() : (cfg.augment.offline ? nullptr : &cache_store);

  PreparedCorpus corpus = stage("parse", timings, [&] { return prepare_corpus(std::move(records), cache, cfg); });
  counts["augmented"] = corpus.n_augmented;
  counts["units"] = corpus.profiles.size();
  counts["type1_units"] = corpus.n_type1;
  counts["type2_units"] = corpus.n_type2;

  auto pairs = stage("match", timings, [&] { return match_corpus(corpus, cfg); });
  counts["candidate_pairs"] = pairs.size();

  Harmonization h = stage("filter", timings, [&] { return harmonize(corpus, pairs, cfg.graph, cfg.run.threads); });
  counts["edges"] = h.n_edges;
  counts["communities"] = h.n_communities;

  RunOutcome out;
  out.mapping = std::move(h.mapping);
  out.summary_json = summarize_json(out.mapping, corpus.records);

  stage("emit", timings, [&] {
    const std::map<std::string, std::string> files = {
        {"mapping.tsv", format_mapping_tsv(out.mapping)},
        {"cleaned.tsv", cleaned_tsv(corpus)},
        {"common_words.txt", corpus.common.export_text()},
        {"pairs.tsv", format_pairs_tsv(pairs)},
        {"summary.json", out.summary_json},
    };

    ordered_json manifest;
    manifest["config_hash"] = cfg.hash();
    manifest["config"] = ordered_json::parse(cfg.to_json());
    manifest["seed"] = cfg.graph.seed;
    ordered_json inputs = ordered_json::object();
    inputs["assignees"] = sha256_file(cfg.input.assignees);
    if (!cfg.input.cache.empty() && fs::exists(cfg.input.cache)) inputs["cache"] = sha256_file(cfg.input.cache);
    manifest["inputs"] = inputs;
    manifest["counts"] = counts;
    manifest["embeddings_digest"] = embeddings_digest(corpus);
    manifest["timings_ms"] = timings;
    ordered_json outputs = ordered_json::object();
    for (const auto& [name, content] : files) outputs[name] = sha256_hex(content);
    manifest["outputs"] = outputs;
    out.manifest_json = manifest.dump(2) + "\n";

    const fs::path dest = cfg.output.dir;
    const fs::path staging = staging_dir_for(dest);
    fs::remove_all(staging);
    fs::create_directories(staging);
    std::vector<fs::path> moved;
    try {
      for (const auto& [name, content] : files) tsv::write_file_atomic(staging / name, content);
      tsv::write_file_atomic(staging / "manifest.json", out.manifest_json);
      fs::create_directories(dest);
      for (const auto& entry : fs::directory_iterator(staging)) {
        const fs::path target = dest / entry.path().filename();
        fs::rename(entry.path(), target);
        moved.push_back(target);
      }
      fs::remove_all(staging);
    } catch (...) {
      std::error_code ec;
      for (const auto& m : moved) fs::remove(m, ec);
      fs::remove_all(staging, ec);
      throw;
    }
  });
  spdlog::info("run: {} records, {} communities", corpus.records.size(), h.n_communities);
  return out;
}

AugmentReport run_augment(const PipelineConfig& cfg) {
  if (cfg.input.assignees.empty()) throw InputError("input.assignees is not set");
  if (cfg.input.cache.empty()) throw InputError("input.cache is not set");
  const auto records = load_assignee_table(cfg.input.assignees);
  std::vector<std::string> names;
  std::set<std::string> seen;
  for (const auto& r : records) {
    if (seen.insert(r.raw_name).second) names.push_back(r.raw_name);
  }
  AugmentationCache cache(cfg.input.cache);
  RateLimiter limiter(cfg.provider.rate_limit_per_s);
  FetchContext ctx;
  ctx.limiter = &limiter;
  if (cfg.augment.offline) {
    OfflineProvider provider;
    return augment_all(names, provider, cache, cfg.augment.parallelism, ctx);
  }
  HttpSearchProvider provider(cfg.provider);
  return augment_all(names, provider, cache, cfg.augment.parallelism, ctx);
}

}  // namespace harmonizer
