#include <cstdio>
#include <deque>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "transkb/engine.hpp"

namespace {

using transkb::RunConfig;

struct Binding {
  std::string key;      // RunConfig key
  std::string value;    // storage for the parsed flag
  CLI::Option* option = nullptr;
};

// Shared options for every subcommand; flag values override the config file.
struct CommonOpts {
  std::string config_file;
  std::deque<Binding> values;
  std::deque<Binding> flags;  // boolean settings; `value` holds true/false

  RunConfig build() const {
    RunConfig config;
    if (!config_file.empty()) config = transkb::parse_run_config_file(config_file);
    for (const Binding& b : values) {
      if (b.option->count() > 0) {
        transkb::apply_config_entry(config, b.key, b.value, "command line");
      }
    }
    for (const Binding& b : flags) {
      if (b.option->count() > 0) {
        transkb::apply_config_entry(config, b.key, b.value, "command line");
      }
    }
    return config;
  }
};

CommonOpts* install_common(CLI::App* cmd, std::deque<CommonOpts>& storage) {
  CommonOpts& opts = storage.emplace_back();
  cmd->add_option("--config", opts.config_file, "key = value config file");

  auto value_option = [&](const std::string& flag, const std::string& key,
                          const std::string& help) {
    Binding& b = opts.values.emplace_back();
    b.key = key;
    b.option = cmd->add_option(flag, b.value, help);
  };
  auto flag_option = [&](const std::string& flag, const std::string& key,
                         const std::string& set_to, const std::string& help) {
    Binding& b = opts.flags.emplace_back();
    b.key = key;
    b.value = set_to;
    b.option = cmd->add_flag(flag, help);
  };

  value_option("--mode", "mode", "baseline | joint_mlp | joint_cnn");
  value_option("--data-dir", "data_dir", "directory that relative data paths resolve against");
  value_option("--train", "train_file", "training triples (head<TAB>relation<TAB>tail)");
  value_option("--valid", "valid_file", "validation triples");
  value_option("--test", "test_file", "test triples");
  value_option("--descriptions", "descriptions_file", "entity descriptions (entity<TAB>text)");
  value_option("--word-vectors", "word_vectors_file", "pretrained word vectors");
  value_option("--model", "model_file", "model checkpoint path");
  value_option("--metrics", "metrics_file", "per-epoch metrics log (default: <model>.metrics.tsv)");
  value_option("--gamma", "gamma", "hinge margin");
  value_option("--lr", "lr", "learning rate");
  value_option("--momentum", "momentum", "momentum coefficient (0 = plain SGD)");
  value_option("--batch", "batch_size", "mini-batch size (0 = mode default)");
  value_option("--epochs", "epochs", "training epochs");
  value_option("--dim", "dim", "embedding width");
  value_option("--distance", "distance", "l1 | l2");
  value_option("--seed", "seed", "master random seed");
  value_option("--threads", "threads", "evaluation threads");
  value_option("--sample-size", "sample_size", "evaluate a sample of this many triples (0 = all)");
  value_option("--val-sample", "val_sample", "per-epoch validation sample (0 = all)");
  value_option("--hits-cutoff", "hits_cutoff", "rank cutoff for the hits metric");
  value_option("--eval-every", "eval_every", "epochs between validation runs / checkpoint writes");
  value_option("--patience", "patience", "early-stopping patience in validation runs");
  value_option("--hidden-dim", "hidden_dim", "bag-of-3-grams encoder hidden width");
  value_option("--dense-dim", "dense_dim", "convolutional encoder dense width");
  value_option("--seq-len", "seq_len", "fixed token length for the convolutional encoder");
  value_option("--word-dim", "word_dim", "pretrained word vector width");
  value_option("--split", "eval_split", "test | valid");

  flag_option("--early-stopping", "early_stopping", "true", "stop when validation stalls");
  flag_option("--filtered-negatives", "filtered_negatives", "true",
              "resample corruptions that collide with training facts");
  flag_option("--renormalize-relations", "renormalize_relations", "true",
              "also rescale relation rows every iteration");
  flag_option("--pessimistic", "pessimistic", "true", "rank ties against the model");
  flag_option("--strict-descriptions", "strict_descriptions", "true",
              "error on description lines naming unknown entities");
  flag_option("--no-normalize-output", "normalize_output", "false",
              "drop the encoder's unit-norm output layer (ablation)");
  return &opts;
}

std::string format_values(const std::vector<transkb::real>& values) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", static_cast<double>(values[i]));
    if (i) out += ' ';
    out += buf;
  }
  return out;
}

void print_progress(const transkb::TrainProgress& progress) {
  char buf[256];
  if (progress.validation) {
    std::snprintf(buf, sizeof(buf), "epoch %lld  loss %.4f  val_mean_rank %.2f  val_hits%lld %.2f",
                  static_cast<long long>(progress.info.epoch),
                  static_cast<double>(progress.info.loss),
                  static_cast<double>(progress.validation->mean_rank),
                  static_cast<long long>(progress.validation->hits_cutoff),
                  static_cast<double>(progress.validation->hits));
  } else {
    std::snprintf(buf, sizeof(buf), "epoch %lld  loss %.4f",
                  static_cast<long long>(progress.info.epoch),
                  static_cast<double>(progress.info.loss));
  }
  std::cout << buf << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"translation-based knowledge-base embeddings with description encoders"};
  app.require_subcommand(1);
  std::deque<CommonOpts> storage;

  CLI::App* ingest = app.add_subcommand("ingest", "load and cross-check the data files");
  CommonOpts* ingest_opts = install_common(ingest, storage);

  CLI::App* train = app.add_subcommand("train", "train a model and save a checkpoint");
  CommonOpts* train_opts = install_common(train, storage);

  CLI::App* eval = app.add_subcommand("eval", "link prediction metrics for a saved model");
  CommonOpts* eval_opts = install_common(eval, storage);
  bool eval_tsv = false;
  eval->add_flag("--tsv", eval_tsv, "machine-readable output");

  CLI::App* embed = app.add_subcommand("embed", "print entity embeddings");
  CommonOpts* embed_opts = install_common(embed, storage);
  std::vector<std::string> embed_names;
  std::string embed_text_arg;
  embed->add_option("names", embed_names, "entity names (default: all)");
  embed->add_option("--text", embed_text_arg, "embed a free-form description instead");

  CLI::App* query = app.add_subcommand("query", "complete a triple with one missing entity");
  CommonOpts* query_opts = install_common(query, storage);
  std::string query_head, query_relation, query_tail;
  std::int64_t query_k = 10;
  query->add_option("--head", query_head, "head entity (ranks tails)");
  query->add_option("--relation", query_relation, "relation name")->required();
  query->add_option("--tail", query_tail, "tail entity (ranks heads)");
  query->add_option("--k", query_k, "number of candidates to print");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      std::cout << transkb::run_ingest(ingest_opts->build()).to_text();
    } else if (*train) {
      RunConfig config = train_opts->build();
      transkb::run_train(config, print_progress);
      if (!config.model_file.empty()) {
        std::cout << "model saved to " << config.model_file << "\n";
      }
    } else if (*eval) {
      transkb::EvalRunResult result = transkb::run_eval(eval_opts->build());
      if (eval_tsv) {
        std::cout << result.link.to_tsv();
        if (result.has_unseen) std::cout << result.unseen.to_tsv();
      } else {
        std::cout << result.to_text();
      }
    } else if (*embed) {
      RunConfig config = embed_opts->build();
      if (!embed_text_arg.empty()) {
        if (!embed_names.empty()) {
          throw transkb::ConfigError("embed takes entity names or --text, not both");
        }
        std::cout << format_values(transkb::embed_text(config, embed_text_arg)) << "\n";
      } else {
        for (const transkb::EmbedRow& row : transkb::run_embed(config, embed_names)) {
          std::cout << row.name << '\t' << format_values(row.values) << "\n";
        }
      }
    } else if (*query) {
      RunConfig config = query_opts->build();
      std::vector<transkb::QueryMatch> matches =
          transkb::run_query(config, query_head, query_relation, query_tail, query_k);
      char buf[64];
      for (std::size_t i = 0; i < matches.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", static_cast<double>(matches[i].distance));
        std::cout << (i + 1) << '\t' << matches[i].name << '\t' << buf << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
