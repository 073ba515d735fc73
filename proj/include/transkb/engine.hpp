#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "transkb/checkpoint.hpp"
#include "transkb/dataset.hpp"
#include "transkb/evaluate.hpp"
#include "transkb/trainer.hpp"

namespace transkb {

// Everything a run needs, collected from a config file and/or CLI flags.
// Relative data paths resolve against `data_dir`, which itself falls back to
// the TRANSKB_DATA_DIR environment variable; the model path is used as-is.
struct RunConfig {
  std::string mode = "baseline";  // baseline | joint_mlp | joint_cnn

  std::string data_dir;
  std::string train_file;
  std::string valid_file;
  std::string test_file;
  std::string descriptions_file;
  std::string word_vectors_file;
  std::string model_file = "model.tkb";
  // Per-epoch `epoch loss val_mean_rank val_hits` lines appended here during
  // training; empty = derive "<model_file>.metrics.tsv" (no log when the
  // model file is empty too).
  std::string metrics_file;
  bool strict_descriptions = false;  // error on description lines naming unknown entities

  real gamma = 1.0;
  real lr = 0.01;
  real momentum = 0.9;
  std::int64_t batch_size = 0;  // 0 = per-mode default (512 baseline, 64 joint)
  std::int64_t epochs = 100;
  std::int64_t dim = 50;
  std::string distance = "l1";
  std::uint64_t seed = 42;
  bool filtered_negatives = false;
  bool renormalize_relations = false;
  std::int64_t eval_every = 1;  // epochs between validation evals + checkpoint writes
  bool early_stopping = false;
  std::int64_t patience = 5;

  std::int64_t hidden_dim = 500;   // bag-of-3-grams encoder hidden width
  std::int64_t dense_dim = 500;    // convolutional encoder dense width
  std::int64_t seq_len = 0;        // 0 = longest description, floored at 16
  std::int64_t word_dim = 50;      // pretrained word vector width
  bool normalize_output = true;    // encoder output-normalization ablation

  std::string eval_split = "test";  // test | valid
  std::int64_t sample_size = 0;     // 0 = evaluate every triple
  std::int64_t val_sample = 1000;   // per-epoch validation sample (0 = all)
  int threads = 1;
  bool pessimistic = false;
  std::int64_t hits_cutoff = 10;

  TrainConfig train_config() const;
  void validate() const;
};

// `key = value` lines; blank lines and lines starting with # are ignored.
// Unknown keys are an error.
RunConfig parse_run_config_file(const std::string& path);
// Applies one key=value pair (same keys as the file). Used by file parsing;
// throws ConfigError for unknown keys or unparseable values.
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value,
                        const std::string& where);

struct IngestReport {
  std::int64_t entities = 0;
  std::int64_t relations = 0;
  std::int64_t train = 0;
  std::int64_t valid = 0;
  std::int64_t test = 0;
  bool have_descriptions = false;
  std::int64_t descriptions = 0;
  std::int64_t skipped_descriptions = 0;
  std::int64_t overwritten_descriptions = 0;
  std::int64_t missing_descriptions = 0;
  std::int64_t description_words = 0;       // distinct lowercased tokens
  std::int64_t max_description_tokens = 0;  // longest description, in tokens
  bool have_word_vectors = false;
  std::int64_t words = 0;
  std::int64_t word_dim = 0;
  std::int64_t duplicate_words = 0;
  SplitReport split;

  std::string to_text() const;
};

// Loads and cross-checks the configured data files.
IngestReport run_ingest(const RunConfig& config);

struct TrainProgress {
  EpochInfo info;
  // Validation-split link prediction for this epoch; null when there is no
  // validation split.
  const EvalReport* validation = nullptr;
};

// Full training pipeline: load data, featurize (joint modes), train, and
// save the model to config.model_file (unless it is empty).
Model run_train(const RunConfig& config,
                const std::function<void(const TrainProgress&)>& on_progress = {});

struct EvalRunResult {
  EvalReport link;
  bool has_unseen = false;  // the split contains triples with one unseen entity
  UnseenEvalReport unseen;

  std::string to_text() const;
};

// Loads the model and dataset, then runs link prediction on the configured
// split (candidates = entities seen in training). When the split contains
// triples with exactly one unseen entity, also runs the unseen-entity
// protocol.
EvalRunResult run_eval(const RunConfig& config);

struct EmbedRow {
  std::string name;
  std::vector<real> values;
};

// Embeddings for the named entities (all entities when `names` is empty).
std::vector<EmbedRow> run_embed(const RunConfig& config, std::span<const std::string> names);

// Embeds a free-form description through a joint model's encoder.
std::vector<real> embed_text(const RunConfig& config, const std::string& text);

struct QueryMatch {
  std::string name;
  real distance;
};

// Completes a triple with one entity slot missing: exactly one of head/tail
// must be non-empty. Returns the k best candidates for the empty slot among
// entities seen in training. Unknown names get an edit-distance suggestion.
std::vector<QueryMatch> run_query(const RunConfig& config, const std::string& head,
                                  const std::string& relation, const std::string& tail,
                                  std::int64_t k);

// Smallest edit distance candidate for an unknown name, if any is close.
std::string suggest_name(const std::string& name, std::span<const std::string> candidates);

}  // namespace transkb
