// Command-line front end for the task graph generation pipeline.
//
// Exit codes: 0 success, 2 usage or input error, 3 provider transport error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "taskgraph/errors.hpp"
#include "taskgraph/graphinfer.hpp"
#include "taskgraph/label.hpp"
#include "taskgraph/pipeline.hpp"
#include "taskgraph/simulate.hpp"

namespace {

using namespace taskgraph;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitTransport = 3;

struct Options {
  std::string config_path;
  std::string transcripts;
  std::string out_dir;
  std::string summaries;
  std::string sequences;
  std::string clusters;
  std::string rank_file;
  std::string graph_file;
  std::string pred_file;
  std::string truth_file;
  std::string out_file;
  std::string task;
  std::string provider;
  std::string cache_dir;
  std::string label_source;
  std::string mode = "auto";
  double sim_threshold = 0.0;
  int min_clique = 0;
  double merge_sim = 0.0;
  double merge_overlap = 0.0;
  double keep_fraction = 0.0;
  double negative_weight = 0.0;
  double drop_prob = 0.0;
  std::uint64_t seed = 0;
  int count = 60;
};

/// Registers the flags shared by the pipeline-stage subcommands.
void add_config_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config_path, "JSON configuration file");
  cmd->add_option("--provider", opt.provider, "Provider kind")
      ->check(CLI::IsMember({"remote", "fixture"}));
  cmd->add_option("--cache-dir", opt.cache_dir, "Response cache directory");
  cmd->add_option("--sim-threshold", opt.sim_threshold,
                  "Cosine threshold for the similarity graph");
  cmd->add_option("--min-clique", opt.min_clique, "Minimum clique size kept");
  cmd->add_option("--merge-sim", opt.merge_sim,
                  "Minimum inter-cluster similarity for merging");
  cmd->add_option("--merge-overlap", opt.merge_overlap,
                  "Maximum sequence overlap for merging");
  cmd->add_option("--keep-fraction", opt.keep_fraction,
                  "Fraction of ranked sequences kept");
  cmd->add_option("--negative-weight", opt.negative_weight,
                  "Weight of assumed-ineligible examples");
  cmd->add_option("--seed", opt.seed, "Random seed");
  cmd->add_option("--label-source", opt.label_source,
                  "Label summary steps or raw transcript sentences")
      ->check(CLI::IsMember({"summary", "asr"}));
}

PipelineConfig effective_config(const CLI::App* cmd, const Options& opt) {
  PipelineConfig config;
  if (!opt.config_path.empty()) {
    config = pipeline_config_from_json(load_json_file(opt.config_path));
  }
  if (cmd->count("--provider")) {
    config.provider.kind = opt.provider == "remote" ? ProviderKind::remote
                                                    : ProviderKind::fixture;
  }
  if (cmd->count("--cache-dir")) config.provider.cache_dir = opt.cache_dir;
  if (cmd->count("--sim-threshold")) {
    config.cluster.sim_threshold = opt.sim_threshold;
  }
  if (cmd->count("--min-clique")) {
    config.cluster.min_clique_size = opt.min_clique;
  }
  if (cmd->count("--merge-sim")) {
    config.cluster.merge_sim_threshold = opt.merge_sim;
  }
  if (cmd->count("--merge-overlap")) {
    config.cluster.merge_overlap_threshold = opt.merge_overlap;
  }
  if (cmd->count("--keep-fraction")) {
    config.rank.keep_fraction = opt.keep_fraction;
  }
  if (cmd->count("--negative-weight")) {
    config.infer.negative_weight = opt.negative_weight;
  }
  if (cmd->count("--seed")) config.seed = opt.seed;
  if (cmd->count("--label-source")) {
    config.label_source = opt.label_source == "asr" ? LabelSource::asr
                                                    : LabelSource::summary;
  }
  return config;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const TransportError*>(&e) ||
      dynamic_cast<const MissingFixtureError*>(&e)) {
    return kExitTransport;
  }
  return kExitInput;
}

/// Runs one stage, mapping failures to exit codes and naming the stage.
template <typename Fn>
int guarded(const std::string& stage, Fn&& fn) {
  try {
    fn();
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "taskgraph: stage " << stage << ": " << e.what() << "\n";
    return exit_code_for(e);
  }
}

std::vector<Transcript> load_transcripts(const std::string& path) {
  if (!fs::exists(path)) {
    throw InvalidInputError("transcripts file does not exist: " + path);
  }
  return transcripts_from_json(load_json_file(path));
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "taskgraph: warning: " << w << "\n";
}

AccuracyMode parse_mode(const std::string& mode) {
  if (mode == "exact") return AccuracyMode::exact;
  if (mode == "sampled") return AccuracyMode::sampled;
  return AccuracyMode::automatic;
}

int cmd_run(const CLI::App* cmd, const Options& opt) {
  PipelineConfig config;
  std::vector<Transcript> transcripts;
  ProviderSet providers;
  int rc = guarded("load", [&] {
    config = effective_config(cmd, opt);
    transcripts = load_transcripts(opt.transcripts);
    providers = make_providers(config.provider);
  });
  if (rc != kExitOk) return rc;

  const fs::path out_dir(opt.out_dir);
  PipelineOutputs outputs;
  std::vector<SummaryStepSequence> source;

  rc = guarded("summarize", [&] {
    if (config.label_source == LabelSource::summary) {
      if (!providers.completion) {
        throw InvalidInputError("no completion provider configured");
      }
      outputs.summaries =
          summarize_all(transcripts, *providers.completion, config.summarize,
                        config.provider.max_parallel, outputs.warnings);
      for (const auto& r : outputs.summaries) source.push_back(r.sequence);
    } else {
      source = asr_sequences(transcripts);
      for (const auto& g : source) outputs.summaries.push_back({g, "", false});
    }
    if (source.empty()) {
      throw EmptySummaryError("every transcript summarized to zero steps");
    }
    write_text_file(out_dir / "summaries.json",
                    canonical_dump(summaries_to_json(outputs.summaries)));
  });
  if (rc != kExitOk) return rc;

  rc = guarded("cluster", [&] {
    outputs.key_steps =
        identify_key_steps(source, *providers.embedding, config.cluster);
    write_text_file(out_dir / "clusters.json",
                    canonical_dump(clusters_to_json(outputs.key_steps)));
  });
  if (rc != kExitOk) return rc;

  rc = guarded("label", [&] {
    outputs.sequences = label_all(source, outputs.key_steps,
                                  *providers.embedding, outputs.warnings);
    if (outputs.sequences.empty()) {
      throw NoKeyStepsError("no sequence matched any key step");
    }
    write_text_file(out_dir / "sequences.json",
                    canonical_dump(sequences_to_json(outputs.sequences)));
  });
  if (rc != kExitOk) return rc;

  rc = guarded("rank", [&] {
    if (!providers.likelihood) {
      throw InvalidInputError("no likelihood provider configured");
    }
    outputs.ranking = rank_all(outputs.sequences, outputs.key_steps,
                               transcripts.front().task_name,
                               *providers.likelihood, config.rank,
                               config.provider.max_parallel);
    write_text_file(out_dir / "rank.json",
                    canonical_dump(rank_to_json(outputs.ranking)));
  });
  if (rc != kExitOk) return rc;

  rc = guarded("graph", [&] {
    std::vector<KeyStepSequence> kept;
    for (std::size_t i = 0; i < outputs.sequences.size(); ++i) {
      if (outputs.ranking[i].kept) kept.push_back(outputs.sequences[i]);
    }
    std::vector<std::string> labels;
    for (const auto& k : outputs.key_steps) labels.push_back(k.label);
    outputs.graph = infer_graph(kept, static_cast<int>(outputs.key_steps.size()),
                                config.infer, labels);
    write_text_file(out_dir / "graph.json",
                    canonical_dump(graph_to_json(outputs.graph)));
    write_text_file(out_dir / "graph.dot", export_dot(outputs.graph));
  });
  if (rc != kExitOk) return rc;

  print_warnings(outputs.warnings);
  return kExitOk;
}

int cmd_summarize(const CLI::App* cmd, const Options& opt) {
  return guarded("summarize", [&] {
    const PipelineConfig config = effective_config(cmd, opt);
    const auto transcripts = load_transcripts(opt.transcripts);
    ProviderSet providers = make_providers(config.provider);
    if (!providers.completion) {
      throw InvalidInputError("no completion provider configured");
    }
    std::vector<std::string> warnings;
    const auto summaries =
        summarize_all(transcripts, *providers.completion, config.summarize,
                      config.provider.max_parallel, warnings);
    write_text_file(fs::path(opt.out_dir) / "summaries.json",
                    canonical_dump(summaries_to_json(summaries)));
    print_warnings(warnings);
  });
}

std::vector<SummaryStepSequence> load_source_sequences(const Options& opt,
                                                       const PipelineConfig& config) {
  if (config.label_source == LabelSource::asr) {
    if (opt.transcripts.empty()) {
      throw InvalidInputError("--label-source asr requires --transcripts");
    }
    return asr_sequences(load_transcripts(opt.transcripts));
  }
  if (opt.summaries.empty()) {
    throw InvalidInputError("--summaries is required");
  }
  std::vector<SummaryStepSequence> out;
  for (const auto& record : summaries_from_json(load_json_file(opt.summaries))) {
    out.push_back(record.sequence);
  }
  return out;
}

int cmd_cluster(const CLI::App* cmd, const Options& opt) {
  return guarded("cluster", [&] {
    const PipelineConfig config = effective_config(cmd, opt);
    const auto source = load_source_sequences(opt, config);
    ProviderSet providers = make_providers(config.provider);
    const auto key_steps =
        identify_key_steps(source, *providers.embedding, config.cluster);
    write_text_file(fs::path(opt.out_dir) / "clusters.json",
                    canonical_dump(clusters_to_json(key_steps)));
  });
}

int cmd_label(const CLI::App* cmd, const Options& opt) {
  return guarded("label", [&] {
    const PipelineConfig config = effective_config(cmd, opt);
    const auto source = load_source_sequences(opt, config);
    ProviderSet providers = make_providers(config.provider);
    const auto key_steps = clusters_from_json(load_json_file(opt.clusters),
                                              *providers.embedding);
    std::vector<std::string> warnings;
    const auto sequences =
        label_all(source, key_steps, *providers.embedding, warnings);
    write_text_file(fs::path(opt.out_dir) / "sequences.json",
                    canonical_dump(sequences_to_json(sequences)));
    print_warnings(warnings);
  });
}

int cmd_rank(const CLI::App* cmd, const Options& opt) {
  return guarded("rank", [&] {
    const PipelineConfig config = effective_config(cmd, opt);
    const auto sequences =
        sequences_from_json(load_json_file(opt.sequences));
    const auto key_steps =
        cluster_labels_from_json(load_json_file(opt.clusters));
    ProviderSet providers = make_providers(config.provider);
    if (!providers.likelihood) {
      throw InvalidInputError("no likelihood provider configured");
    }
    const auto ranking =
        rank_all(sequences, key_steps, opt.task, *providers.likelihood,
                 config.rank, config.provider.max_parallel);
    write_text_file(fs::path(opt.out_dir) / "rank.json",
                    canonical_dump(rank_to_json(ranking)));
  });
}

int cmd_graph(const CLI::App* cmd, const Options& opt) {
  return guarded("graph", [&] {
    const PipelineConfig config = effective_config(cmd, opt);
    auto sequences = sequences_from_json(load_json_file(opt.sequences));
    const auto key_steps =
        cluster_labels_from_json(load_json_file(opt.clusters));
    if (!opt.rank_file.empty()) {
      const auto entries = rank_from_json(load_json_file(opt.rank_file));
      std::set<std::string> kept_ids;
      for (const auto& e : entries) {
        if (e.kept) kept_ids.insert(e.video_id);
      }
      std::erase_if(sequences, [&](const KeyStepSequence& h) {
        return kept_ids.count(h.video_id) == 0;
      });
    }
    std::vector<std::string> labels;
    for (const auto& k : key_steps) labels.push_back(k.label);
    const TaskGraph graph =
        infer_graph(sequences, static_cast<int>(key_steps.size()),
                    config.infer, labels);
    write_text_file(fs::path(opt.out_dir) / "graph.json",
                    canonical_dump(graph_to_json(graph)));
    write_text_file(fs::path(opt.out_dir) / "graph.dot", export_dot(graph));
  });
}

int cmd_eval(const Options& opt) {
  return guarded("eval", [&] {
    const TaskGraph pred = graph_from_json(load_json_file(opt.pred_file));
    const TaskGraph truth = graph_from_json(load_json_file(opt.truth_file));
    const double accuracy =
        eval_accuracy(pred, truth, parse_mode(opt.mode), opt.seed);
    std::printf("%.4f\n", accuracy);
  });
}

int cmd_simulate(const Options& opt) {
  return guarded("simulate", [&] {
    const TaskGraph graph = graph_from_json(load_json_file(opt.graph_file));
    RolloutConfig config;
    config.count = opt.count;
    config.seed = opt.seed;
    config.drop_prob = opt.drop_prob;
    const auto dataset = generate_dataset(graph, config);
    write_text_file(opt.out_file, canonical_dump(sequences_to_json(dataset)));
  });
}

int cmd_export_dot(const Options& opt) {
  return guarded("export-dot", [&] {
    const TaskGraph graph = graph_from_json(load_json_file(opt.graph_file));
    const std::string dot = export_dot(graph);
    if (opt.out_file.empty()) {
      std::cout << dot;
    } else {
      write_text_file(opt.out_file, dot);
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Task graph generation from instructional transcripts"};
  app.require_subcommand(1);
  Options opt;

  auto* run = app.add_subcommand("run", "Run the full pipeline");
  add_config_flags(run, opt);
  run->add_option("--transcripts", opt.transcripts, "Transcripts JSON file")
      ->required();
  run->add_option("--out-dir", opt.out_dir, "Output directory")->required();

  auto* summarize = app.add_subcommand("summarize", "Extract summary steps");
  add_config_flags(summarize, opt);
  summarize->add_option("--transcripts", opt.transcripts, "Transcripts JSON")
      ->required();
  summarize->add_option("--out-dir", opt.out_dir, "Output directory")
      ->required();

  auto* cluster = app.add_subcommand("cluster", "Identify key steps");
  add_config_flags(cluster, opt);
  cluster->add_option("--summaries", opt.summaries, "Summaries JSON");
  cluster->add_option("--transcripts", opt.transcripts,
                      "Transcripts JSON (asr label source)");
  cluster->add_option("--out-dir", opt.out_dir, "Output directory")->required();

  auto* label = app.add_subcommand("label", "Re-label sequences with key steps");
  add_config_flags(label, opt);
  label->add_option("--summaries", opt.summaries, "Summaries JSON");
  label->add_option("--transcripts", opt.transcripts,
                    "Transcripts JSON (asr label source)");
  label->add_option("--clusters", opt.clusters, "Clusters JSON")->required();
  label->add_option("--out-dir", opt.out_dir, "Output directory")->required();

  auto* rank = app.add_subcommand("rank", "Rank key step sequences");
  add_config_flags(rank, opt);
  rank->add_option("--sequences", opt.sequences, "Sequences JSON")->required();
  rank->add_option("--clusters", opt.clusters, "Clusters JSON")->required();
  rank->add_option("--task", opt.task, "Task name for the ranking prompt")
      ->required();
  rank->add_option("--out-dir", opt.out_dir, "Output directory")->required();

  auto* graph = app.add_subcommand("graph", "Infer the task graph");
  add_config_flags(graph, opt);
  graph->add_option("--sequences", opt.sequences, "Sequences JSON")->required();
  graph->add_option("--clusters", opt.clusters, "Clusters JSON")->required();
  graph->add_option("--rank", opt.rank_file,
                    "Rank JSON; only kept sequences are used");
  graph->add_option("--out-dir", opt.out_dir, "Output directory")->required();

  auto* eval = app.add_subcommand("eval", "Graph prediction accuracy");
  eval->add_option("--pred", opt.pred_file, "Predicted graph JSON")->required();
  eval->add_option("--truth", opt.truth_file, "Ground truth graph JSON")
      ->required();
  eval->add_option("--mode", opt.mode, "auto, exact or sampled")
      ->check(CLI::IsMember({"auto", "exact", "sampled"}));
  eval->add_option("--seed", opt.seed, "Seed for sampled mode");

  auto* simulate = app.add_subcommand("simulate", "Sample rollouts of a graph");
  simulate->add_option("--graph", opt.graph_file, "Graph JSON")->required();
  simulate->add_option("--count", opt.count, "Number of rollouts");
  simulate->add_option("--seed", opt.seed, "Base seed");
  simulate->add_option("--drop-prob", opt.drop_prob, "Step omission noise");
  simulate->add_option("--out", opt.out_file, "Output sequences JSON")
      ->required();

  auto* export_dot_cmd = app.add_subcommand("export-dot", "Render DOT");
  export_dot_cmd->add_option("--graph", opt.graph_file, "Graph JSON")
      ->required();
  export_dot_cmd->add_option("--out", opt.out_file,
                             "Output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  if (run->parsed()) return cmd_run(run, opt);
  if (summarize->parsed()) return cmd_summarize(summarize, opt);
  if (cluster->parsed()) return cmd_cluster(cluster, opt);
  if (label->parsed()) return cmd_label(label, opt);
  if (rank->parsed()) return cmd_rank(rank, opt);
  if (graph->parsed()) return cmd_graph(graph, opt);
  if (eval->parsed()) return cmd_eval(opt);
  if (simulate->parsed()) return cmd_simulate(opt);
  if (export_dot_cmd->parsed()) return cmd_export_dot(opt);
  return kExitInput;
}
