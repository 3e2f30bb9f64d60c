#include "taskgraph/pipeline.hpp"

#include <algorithm>
#include <exception>
#include <optional>
#include <set>
#include <thread>

#include "taskgraph/errors.hpp"
#include "taskgraph/fixtures.hpp"
#include "taskgraph/label.hpp"

namespace taskgraph {

using nlohmann::json;

namespace {

/// Runs fn(0..n-1) on up to max_parallel threads. Results must be written
/// by index; the first failing index's exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, int max_parallel, Fn&& fn) {
  if (n == 0) return;
  const int workers = std::max(1, std::min<int>(max_parallel,
                                                static_cast<int>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> failures(n);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        try {
          fn(i);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
}

void expect_keys(const json& j, const std::vector<std::string>& allowed,
                 const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InvalidInputError("unknown config key '" + key + "' in " + where);
    }
  }
}

}  // namespace

PipelineConfig pipeline_config_from_json(const json& j) {
  PipelineConfig config;
  if (!j.is_object()) {
    throw InvalidInputError("config must hold a JSON object");
  }
  expect_keys(j,
              {"provider", "summarize", "cluster", "rank", "graph", "seed",
               "label_source"},
              "config");

  if (j.contains("provider")) {
    const json& p = j.at("provider");
    expect_keys(p,
                {"kind", "endpoint", "api_key_env", "cache_dir", "max_parallel",
                 "retry_limit", "model", "max_tokens", "fixture_completions",
                 "lm_corpus"},
                "provider");
    if (p.contains("kind")) {
      const auto kind = p.at("kind").get<std::string>();
      if (kind == "remote") {
        config.provider.kind = ProviderKind::remote;
      } else if (kind == "fixture") {
        config.provider.kind = ProviderKind::fixture;
      } else {
        throw InvalidInputError("provider kind must be remote or fixture");
      }
    }
    config.provider.endpoint = p.value("endpoint", config.provider.endpoint);
    config.provider.api_key_env =
        p.value("api_key_env", config.provider.api_key_env);
    config.provider.cache_dir =
        std::filesystem::path(p.value("cache_dir", std::string{}));
    config.provider.max_parallel =
        p.value("max_parallel", config.provider.max_parallel);
    config.provider.retry_limit =
        p.value("retry_limit", config.provider.retry_limit);
    config.provider.model = p.value("model", config.provider.model);
    config.provider.max_tokens =
        p.value("max_tokens", config.provider.max_tokens);
    config.provider.fixture_completions =
        std::filesystem::path(p.value("fixture_completions", std::string{}));
    config.provider.lm_corpus =
        std::filesystem::path(p.value("lm_corpus", std::string{}));
  }

  if (j.contains("summarize")) {
    const json& s = j.at("summarize");
    expect_keys(s, {"prompt_template", "transcript_char_budget"}, "summarize");
    config.summarize.prompt_template =
        s.value("prompt_template", config.summarize.prompt_template);
    config.summarize.transcript_char_budget = s.value(
        "transcript_char_budget", config.summarize.transcript_char_budget);
  }

  if (j.contains("cluster")) {
    const json& c = j.at("cluster");
    expect_keys(c,
                {"sim_threshold", "min_clique_size", "merge_sim_threshold",
                 "merge_overlap_threshold"},
                "cluster");
    config.cluster.sim_threshold =
        c.value("sim_threshold", config.cluster.sim_threshold);
    config.cluster.min_clique_size =
        c.value("min_clique_size", config.cluster.min_clique_size);
    config.cluster.merge_sim_threshold =
        c.value("merge_sim_threshold", config.cluster.merge_sim_threshold);
    config.cluster.merge_overlap_threshold = c.value(
        "merge_overlap_threshold", config.cluster.merge_overlap_threshold);
  }

  if (j.contains("rank")) {
    const json& r = j.at("rank");
    expect_keys(r, {"keep_fraction", "prompt_template"}, "rank");
    config.rank.keep_fraction =
        r.value("keep_fraction", config.rank.keep_fraction);
    config.rank.prompt_template =
        r.value("prompt_template", config.rank.prompt_template);
  }

  if (j.contains("graph")) {
    const json& g = j.at("graph");
    expect_keys(g, {"negative_weight", "accuracy_mode"}, "graph");
    config.infer.negative_weight =
        g.value("negative_weight", config.infer.negative_weight);
    if (g.contains("accuracy_mode")) {
      const auto mode = g.at("accuracy_mode").get<std::string>();
      if (mode == "auto") {
        config.accuracy_mode = AccuracyMode::automatic;
      } else if (mode == "exact") {
        config.accuracy_mode = AccuracyMode::exact;
      } else if (mode == "sampled") {
        config.accuracy_mode = AccuracyMode::sampled;
      } else {
        throw InvalidInputError("accuracy_mode must be auto, exact or sampled");
      }
    }
  }

  config.seed = j.value("seed", config.seed);
  if (j.contains("label_source")) {
    const auto source = j.at("label_source").get<std::string>();
    if (source == "summary") {
      config.label_source = LabelSource::summary;
    } else if (source == "asr") {
      config.label_source = LabelSource::asr;
    } else {
      throw InvalidInputError("label_source must be summary or asr");
    }
  }
  return config;
}

ProviderSet make_providers(const ProviderConfig& config,
                           std::shared_ptr<HttpTransport> transport) {
  config.validate();
  ProviderSet set;
  if (config.kind == ProviderKind::fixture) {
    if (!config.fixture_completions.empty()) {
      set.completion =
          std::make_unique<FixtureCompletionProvider>(config.fixture_completions);
    }
    set.embedding = std::make_unique<TrigramEmbeddingProvider>();
    if (!config.lm_corpus.empty()) {
      set.likelihood = std::make_unique<BigramLikelihoodProvider>(
          BigramLikelihoodProvider::from_file(config.lm_corpus));
    }
  } else {
    if (!transport) transport = make_httplib_transport();
    set.completion = std::make_unique<RemoteCompletionProvider>(config, transport);
    set.embedding = std::make_unique<RemoteEmbeddingProvider>(config, transport);
    set.likelihood =
        std::make_unique<RemoteLikelihoodProvider>(config, transport);
  }
  return set;
}

std::vector<SummaryRecord> summarize_all(
    const std::vector<Transcript>& transcripts, CompletionProvider& provider,
    const SummarizeConfig& config, int max_parallel,
    std::vector<std::string>& warnings) {
  std::vector<std::optional<SummaryRecord>> slots(transcripts.size());
  std::vector<std::string> empty_reasons(transcripts.size());
  parallel_for(transcripts.size(), max_parallel, [&](std::size_t i) {
    try {
      slots[i] = summarize_transcript(transcripts[i], provider, config);
    } catch (const EmptySummaryError& e) {
      empty_reasons[i] = e.what();
    }
  });

  std::vector<SummaryRecord> out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) {
      out.push_back(std::move(*slots[i]));
    } else {
      warnings.push_back("skipping transcript " + transcripts[i].video_id +
                         ": " + empty_reasons[i]);
    }
  }
  return out;
}

std::vector<SummaryStepSequence> asr_sequences(
    const std::vector<Transcript>& transcripts) {
  std::vector<SummaryStepSequence> out;
  for (const auto& t : transcripts) {
    SummaryStepSequence g;
    g.video_id = t.video_id;
    std::string current;
    auto flush = [&] {
      const auto begin = current.find_first_not_of(" \t\r\n");
      if (begin != std::string::npos) {
        const auto end = current.find_last_not_of(" \t\r\n");
        g.steps.push_back(current.substr(begin, end - begin + 1));
      }
      current.clear();
    };
    for (char ch : t.text) {
      if (ch == '.' || ch == '!' || ch == '?' || ch == '\n') {
        flush();
      } else {
        current.push_back(ch);
      }
    }
    flush();
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<KeyStepSequence> label_all(
    const std::vector<SummaryStepSequence>& sequences,
    const std::vector<KeyStep>& key_steps, EmbeddingProvider& embedder,
    std::vector<std::string>& warnings) {
  std::vector<KeyStepSequence> out;
  for (const auto& g : sequences) {
    KeyStepSequence h = label_sequence(g, embedder, key_steps);
    if (h.items.empty()) {
      warnings.push_back("sequence " + g.video_id +
                         " matched no key step; dropped");
      continue;
    }
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<RankEntry> rank_all(const std::vector<KeyStepSequence>& sequences,
                                const std::vector<KeyStep>& key_steps,
                                const std::string& task_name,
                                LikelihoodProvider& scorer,
                                const RankConfig& config, int max_parallel) {
  std::vector<RankedSequence> ranked(sequences.size());
  parallel_for(sequences.size(), max_parallel, [&](std::size_t i) {
    ranked[i] = {sequences[i],
                 score_sequence(sequences[i], task_name, key_steps, scorer,
                                config)};
  });

  const auto kept = topk_filter(ranked, config.keep_fraction);
  std::set<std::string> kept_ids;
  for (const auto& r : kept) kept_ids.insert(r.sequence.video_id);

  std::vector<RankEntry> out;
  out.reserve(sequences.size());
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    out.push_back({sequences[i].video_id, ranked[i].score,
                   kept_ids.count(sequences[i].video_id) > 0});
  }
  return out;
}

PipelineOutputs run_pipeline(const std::vector<Transcript>& transcripts,
                             const PipelineConfig& config,
                             ProviderSet& providers) {
  if (transcripts.empty()) {
    throw InvalidInputError("no transcripts to process");
  }
  const std::string task_name = transcripts.front().task_name;

  PipelineOutputs out;

  std::vector<SummaryStepSequence> source;
  if (config.label_source == LabelSource::summary) {
    if (!providers.completion) {
      throw InvalidInputError(
          "no completion provider configured (set fixture_completions or use "
          "a remote provider)");
    }
    out.summaries = summarize_all(transcripts, *providers.completion,
                                  config.summarize,
                                  config.provider.max_parallel, out.warnings);
    for (const auto& record : out.summaries) source.push_back(record.sequence);
  } else {
    source = asr_sequences(transcripts);
    for (const auto& g : source) {
      out.summaries.push_back({g, "", false});
    }
  }
  if (source.empty()) {
    throw EmptySummaryError("every transcript summarized to zero steps");
  }

  if (!providers.embedding) {
    throw InvalidInputError("no embedding provider configured");
  }
  out.key_steps = identify_key_steps(source, *providers.embedding,
                                     config.cluster);

  out.sequences =
      label_all(source, out.key_steps, *providers.embedding, out.warnings);
  if (out.sequences.empty()) {
    throw NoKeyStepsError("no sequence matched any key step");
  }

  if (!providers.likelihood) {
    throw InvalidInputError(
        "no likelihood provider configured (set lm_corpus or use a remote "
        "provider)");
  }
  out.ranking = rank_all(out.sequences, out.key_steps, task_name,
                         *providers.likelihood, config.rank,
                         config.provider.max_parallel);

  std::vector<KeyStepSequence> kept;
  for (std::size_t i = 0; i < out.sequences.size(); ++i) {
    if (out.ranking[i].kept) kept.push_back(out.sequences[i]);
  }

  std::vector<std::string> labels;
  for (const auto& k : out.key_steps) labels.push_back(k.label);
  out.graph = infer_graph(kept, static_cast<int>(out.key_steps.size()),
                          config.infer, labels);
  return out;
}

}  // namespace taskgraph
