#include "transkb/engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "transkb/featurize.hpp"

namespace transkb {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  std::size_t end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::int64_t parse_int(const std::string& text, const std::string& where) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(where + ": bad integer '" + text + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& where) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(where + ": bad unsigned integer '" + text + "'");
  }
  return v;
}

real parse_real_value(const std::string& text, const std::string& where) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(where + ": bad number '" + text + "'");
  }
  return static_cast<real>(v);
}

bool parse_bool(const std::string& text, const std::string& where) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError(where + ": expected true or false, got '" + text + "'");
}

}  // namespace

TrainConfig RunConfig::train_config() const {
  TrainConfig tc;
  tc.gamma = gamma;
  tc.lr = lr;
  tc.momentum = momentum;
  tc.batch_size = batch_size != 0 ? batch_size : (mode == "baseline" ? 512 : 64);
  tc.epochs = epochs;
  tc.dim = dim;
  tc.distance = distance_from_name(distance);
  tc.seed = seed;
  tc.filtered_negatives = filtered_negatives;
  tc.renormalize_relations = renormalize_relations;
  tc.eval_every = eval_every;
  tc.early_stopping = early_stopping;
  tc.patience = patience;
  return tc;
}

void RunConfig::validate() const {
  if (mode != "baseline" && mode != "joint_mlp" && mode != "joint_cnn") {
    throw ConfigError("mode must be baseline, joint_mlp, or joint_cnn; got '" + mode + "'");
  }
  if (eval_split != "test" && eval_split != "valid") {
    throw ConfigError("eval_split must be test or valid; got '" + eval_split + "'");
  }
  if (batch_size < 0) throw ConfigError("batch_size must be >= 0 (0 = mode default)");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (sample_size < 0) throw ConfigError("sample_size must be >= 0");
  if (val_sample < 0) throw ConfigError("val_sample must be >= 0");
  if (hits_cutoff < 1) throw ConfigError("hits_cutoff must be >= 1");
  if (hidden_dim < 1) throw ConfigError("hidden_dim must be >= 1");
  if (dense_dim < 1) throw ConfigError("dense_dim must be >= 1");
  if (word_dim < 1) throw ConfigError("word_dim must be >= 1");
  if (seq_len != 0 && seq_len < 16) {
    throw ConfigError("seq_len must be 0 (auto) or >= 16; got " + std::to_string(seq_len));
  }
  train_config().validate();
}

void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value,
                        const std::string& where) {
  if (key == "mode") config.mode = value;
  else if (key == "data_dir") config.data_dir = value;
  else if (key == "train_file") config.train_file = value;
  else if (key == "valid_file") config.valid_file = value;
  else if (key == "test_file") config.test_file = value;
  else if (key == "descriptions_file") config.descriptions_file = value;
  else if (key == "word_vectors_file") config.word_vectors_file = value;
  else if (key == "model_file") config.model_file = value;
  else if (key == "metrics_file") config.metrics_file = value;
  else if (key == "strict_descriptions") config.strict_descriptions = parse_bool(value, where);
  else if (key == "gamma") config.gamma = parse_real_value(value, where);
  else if (key == "lr") config.lr = parse_real_value(value, where);
  else if (key == "momentum") config.momentum = parse_real_value(value, where);
  else if (key == "batch_size") config.batch_size = parse_int(value, where);
  else if (key == "epochs") config.epochs = parse_int(value, where);
  else if (key == "dim") config.dim = parse_int(value, where);
  else if (key == "distance") config.distance = value;
  else if (key == "seed") config.seed = parse_u64(value, where);
  else if (key == "filtered_negatives") config.filtered_negatives = parse_bool(value, where);
  else if (key == "renormalize_relations")
    config.renormalize_relations = parse_bool(value, where);
  else if (key == "eval_every") config.eval_every = parse_int(value, where);
  else if (key == "early_stopping") config.early_stopping = parse_bool(value, where);
  else if (key == "patience") config.patience = parse_int(value, where);
  else if (key == "hidden_dim") config.hidden_dim = parse_int(value, where);
  else if (key == "dense_dim") config.dense_dim = parse_int(value, where);
  else if (key == "seq_len") config.seq_len = parse_int(value, where);
  else if (key == "word_dim") config.word_dim = parse_int(value, where);
  else if (key == "normalize_output") config.normalize_output = parse_bool(value, where);
  else if (key == "eval_split") config.eval_split = value;
  else if (key == "sample_size") config.sample_size = parse_int(value, where);
  else if (key == "val_sample") config.val_sample = parse_int(value, where);
  else if (key == "threads") config.threads = static_cast<int>(parse_int(value, where));
  else if (key == "pessimistic") config.pessimistic = parse_bool(value, where);
  else if (key == "hits_cutoff") config.hits_cutoff = parse_int(value, where);
  else throw ConfigError(where + ": unknown config key '" + key + "'");
}

RunConfig parse_run_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  RunConfig config;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    std::string where = path + ":" + std::to_string(line_no);
    std::size_t eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected key = value, got '" + text + "'");
    }
    apply_config_entry(config, trim(text.substr(0, eq)), trim(text.substr(eq + 1)), where);
  }
  return config;
}

namespace {

std::string resolve_path(const RunConfig& config, const std::string& path) {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  std::string dir = config.data_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv("TRANSKB_DATA_DIR")) dir = env;
  }
  if (dir.empty()) return path;
  return (std::filesystem::path(dir) / p).string();
}

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

struct LoadedData {
  Dataset dataset;
  bool have_descriptions = false;
  std::int64_t descriptions_skipped = 0;
  std::int64_t descriptions_overwritten = 0;
  bool have_word_vectors = false;
  WordVectorTable word_vectors;
};

// Whether a command consumes the word-vector file. Commands that restore a
// trained model never re-read it (the checkpoint carries the word table), so
// a config written for training stays valid for eval/embed/query.
enum class WordVectorNeed { skip, if_present, required };

LoadedData load_data(const RunConfig& config, bool require_descriptions,
                     WordVectorNeed word_vector_need) {
  if (config.train_file.empty()) throw ConfigError("train_file is required");
  LoadedData data;
  {
    std::string path = resolve_path(config, config.train_file);
    std::ifstream in = open_file(path);
    data.dataset.train = parse_triples(in, data.dataset.vocab, path);
  }
  if (!config.valid_file.empty()) {
    std::string path = resolve_path(config, config.valid_file);
    std::ifstream in = open_file(path);
    data.dataset.valid = parse_triples(in, data.dataset.vocab, path);
  }
  if (!config.test_file.empty()) {
    std::string path = resolve_path(config, config.test_file);
    std::ifstream in = open_file(path);
    data.dataset.test = parse_triples(in, data.dataset.vocab, path);
  }
  if (require_descriptions && config.descriptions_file.empty()) {
    throw ConfigError("mode " + config.mode + " requires descriptions_file");
  }
  if (!config.descriptions_file.empty()) {
    std::string path = resolve_path(config, config.descriptions_file);
    std::ifstream in = open_file(path);
    DescriptionParse parsed = parse_descriptions(
        in, data.dataset.vocab,
        config.strict_descriptions ? DescriptionMode::strict : DescriptionMode::lenient, path);
    data.dataset.descriptions = std::move(parsed.text);
    data.descriptions_skipped = parsed.skipped;
    data.descriptions_overwritten = parsed.overwritten;
    data.have_descriptions = true;
  }
  if (require_word_vectors && config.word_vectors_file.empty()) {
    throw ConfigError("mode " + config.mode + " requires word_vectors_file");
  }
  if (!config.word_vectors_file.empty()) {
    std::string path = resolve_path(config, config.word_vectors_file);
    std::ifstream in = open_file(path);
    data.word_vectors = parse_word_vectors(in, config.word_dim, path);
    data.have_word_vectors = true;
  }
  return data;
}

void require_description_coverage(const Dataset& dataset) {
  std::vector<EntityId> missing = dataset.entities_missing_descriptions();
  if (!missing.empty()) {
    throw ConfigError(std::to_string(missing.size()) +
                      " entities lack descriptions (first: '" +
                      dataset.vocab.entity_name(missing.front()) +
                      "'); joint modes need one per entity");
  }
}

struct EntityInputs {
  std::vector<EncoderInput> inputs;
  std::vector<char> present;
};

NgramVocabulary build_ngram_vocabulary(const Dataset& dataset) {
  NgramVocabulary ngrams;
  for (EntityId id : dataset.train_entities_sorted()) {
    auto it = dataset.descriptions.find(id);
    if (it == dataset.descriptions.end()) continue;
    featurize_bong(it->second, ngrams, FeaturizeMode::train);
  }
  return ngrams;
}

EntityInputs build_mlp_inputs(const Dataset& dataset, NgramVocabulary& ngrams) {
  EntityInputs out;
  out.inputs.resize(static_cast<std::size_t>(dataset.vocab.entity_count()));
  out.present.assign(out.inputs.size(), 0);
  for (const auto& [id, text] : dataset.descriptions) {
    BongResult featurized = featurize_bong(text, ngrams, FeaturizeMode::infer);
    out.inputs[static_cast<std::size_t>(id)].features = std::move(featurized.features);
    out.present[static_cast<std::size_t>(id)] = 1;
  }
  return out;
}

EntityInputs build_cnn_inputs(const Dataset& dataset,
                              const std::unordered_map<std::string, std::int64_t>& word_index) {
  EntityInputs out;
  out.inputs.resize(static_cast<std::size_t>(dataset.vocab.entity_count()));
  out.present.assign(out.inputs.size(), 0);
  for (const auto& [id, text] : dataset.descriptions) {
    std::vector<std::int64_t> tokens;
    for (const std::string& token : tokenize(text)) {
      auto it = word_index.find(token);
      tokens.push_back(it == word_index.end() ? -1 : it->second);
    }
    out.inputs[static_cast<std::size_t>(id)].tokens = std::move(tokens);
    out.present[static_cast<std::size_t>(id)] = 1;
  }
  return out;
}

std::int64_t longest_description(const Dataset& dataset) {
  std::int64_t longest = 0;
  for (const auto& [id, text] : dataset.descriptions) {
    longest = std::max(longest, static_cast<std::int64_t>(tokenize(text).size()));
  }
  return longest;
}

std::unordered_map<std::string, std::int64_t> index_words(const std::vector<std::string>& words) {
  std::unordered_map<std::string, std::int64_t> index;
  index.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    index.emplace(words[i], static_cast<std::int64_t>(i));
  }
  return index;
}

// Encodes every entity that has an input; rows for the rest stay zero (they
// are never referenced once description coverage is validated).
EmbeddingStore build_joint_store(const Model& model, const EntityInputs& entity_inputs) {
  const Encoder& encoder = model.encoder();
  std::int64_t entity_count = model.vocab.entity_count();
  EmbeddingStore store;
  store.entities = Tensor({entity_count, encoder.output_dim()});
  store.relations = model.relations.value;
  store.distance = model.config.distance;
  for (std::int64_t id = 0; id < entity_count; ++id) {
    if (!entity_inputs.present[static_cast<std::size_t>(id)]) continue;
    Tensor embedding = encoder.encode(entity_inputs.inputs[static_cast<std::size_t>(id)]);
    std::copy(embedding.values().begin(), embedding.values().end(),
              store.entities.row(id).begin());
  }
  return store;
}

EntityInputs build_inputs_for_model(const Model& model, const Dataset& dataset) {
  if (model.mode == "joint_mlp") {
    NgramVocabulary ngrams = model.ngrams;  // infer mode leaves it unchanged
    return build_mlp_inputs(dataset, ngrams);
  }
  return build_cnn_inputs(dataset, index_words(model.words));
}

std::string describe_unknown(const std::string& kind, const std::string& name,
                             std::span<const std::string> candidates) {
  std::string message = "unknown " + kind + " '" + name + "'";
  std::string suggestion = suggest_name(name, candidates);
  if (!suggestion.empty()) message += "; did you mean '" + suggestion + "'?";
  return message;
}

EntityId required_entity(const Vocabulary& vocab, const std::string& name) {
  if (auto id = vocab.entity_id(name)) return *id;
  throw ConfigError(describe_unknown("entity", name, vocab.entity_names()));
}

RelationId required_relation(const Vocabulary& vocab, const std::string& name) {
  if (auto id = vocab.relation_id(name)) return *id;
  throw ConfigError(describe_unknown("relation", name, vocab.relation_names()));
}

}  // namespace

std::string IngestReport::to_text() const {
  std::ostringstream out;
  out << "entities " << entities << ", relations " << relations << "\n";
  out << "triples: train " << train << ", valid " << valid << ", test " << test << "\n";
  if (have_descriptions) {
    out << "descriptions: " << descriptions << " loaded (" << skipped_descriptions
        << " skipped, " << overwritten_descriptions << " replaced); " << missing_descriptions
        << " split entities missing one\n";
    out << "description text: " << description_words << " distinct words, longest "
        << max_description_tokens << " tokens\n";
  } else {
    out << "descriptions: none\n";
  }
  if (have_word_vectors) {
    out << "word vectors: " << words << " words of width " << word_dim << " ("
        << duplicate_words << " duplicates)\n";
  }
  auto split_line = [&](const char* name, const SplitCounts& counts) {
    out << name << " split: " << counts.both_seen << " both-seen, " << counts.one_unseen
        << " one-unseen, " << counts.both_unseen << " both-unseen\n";
  };
  split_line("valid", split.valid);
  split_line("test", split.test);
  out << "unseen-entity evaluation ready: " << (split.concept_learning_valid ? "yes" : "no")
      << "\n";
  return out.str();
}

IngestReport run_ingest(const RunConfig& config) {
  config.validate();
  bool joint = config.mode != "baseline";
  LoadedData data = load_data(config, joint, config.mode == "joint_cnn");
  IngestReport report;
  report.entities = data.dataset.vocab.entity_count();
  report.relations = data.dataset.vocab.relation_count();
  report.train = static_cast<std::int64_t>(data.dataset.train.size());
  report.valid = static_cast<std::int64_t>(data.dataset.valid.size());
  report.test = static_cast<std::int64_t>(data.dataset.test.size());
  report.have_descriptions = data.have_descriptions;
  report.descriptions = static_cast<std::int64_t>(data.dataset.descriptions.size());
  report.skipped_descriptions = data.descriptions_skipped;
  report.overwritten_descriptions = data.descriptions_overwritten;
  report.missing_descriptions =
      static_cast<std::int64_t>(data.dataset.entities_missing_descriptions().size());
  if (data.have_descriptions) {
    std::unordered_set<std::string> distinct_words;
    for (const auto& [id, text] : data.dataset.descriptions) {
      std::vector<std::string> tokens = tokenize(text);
      report.max_description_tokens =
          std::max(report.max_description_tokens, static_cast<std::int64_t>(tokens.size()));
      distinct_words.insert(tokens.begin(), tokens.end());
    }
    report.description_words = static_cast<std::int64_t>(distinct_words.size());
  }
  report.have_word_vectors = data.have_word_vectors;
  report.words = data.word_vectors.size();
  report.word_dim = data.word_vectors.dim;
  report.duplicate_words = data.word_vectors.duplicates;
  report.split = validate_unseen_split(data.dataset);
  return report;
}

Model run_train(const RunConfig& config,
                const std::function<void(const TrainProgress&)>& on_progress) {
  config.validate();
  TrainConfig tc = config.train_config();
  bool joint = config.mode != "baseline";
  LoadedData data = load_data(config, joint, config.mode == "joint_cnn");
  const Dataset& dataset = data.dataset;
  if (joint) require_description_coverage(dataset);

  Model model;
  model.mode = config.mode;
  model.config = tc;
  model.vocab = dataset.vocab;

  Rng init_rng(substream_seed(tc.seed, "init"));
  std::vector<EntityId> candidates = dataset.train_entities_sorted();
  bool have_valid = !dataset.valid.empty();
  EvalReport last_validation;
  EvalOptions val_options;
  val_options.pessimistic = config.pessimistic;
  val_options.sample_size = config.val_sample;
  val_options.seed = tc.seed;
  val_options.threads = config.threads;
  val_options.hits_cutoff = config.hits_cutoff;

  // Metrics log: one `epoch loss val_mean_rank val_hits` line per epoch
  // (validation columns are nan on epochs the metric did not run). The model
  // file is refreshed at the eval_every cadence via atomic replace, so an
  // interrupted run keeps its last complete checkpoint.
  std::string metrics_path = config.metrics_file;
  if (metrics_path.empty() && !config.model_file.empty()) {
    metrics_path = config.model_file + ".metrics.tsv";
  }
  std::ofstream metrics;
  if (!metrics_path.empty()) {
    metrics.open(metrics_path, std::ios::app);
    if (!metrics) throw IoError("cannot open metrics log " + metrics_path);
  }

  TrainHooks hooks;
  hooks.on_epoch = [&](const EpochInfo& info) {
    bool evaluated = have_valid && !std::isnan(static_cast<double>(info.validation));
    if (metrics.is_open()) {
      double nan = std::numeric_limits<double>::quiet_NaN();
      char line[160];
      std::snprintf(line, sizeof line, "%lld\t%.17g\t%.17g\t%.17g\n",
                    static_cast<long long>(info.epoch), static_cast<double>(info.loss),
                    evaluated ? static_cast<double>(last_validation.mean_rank) : nan,
                    evaluated ? static_cast<double>(last_validation.hits) : nan);
      metrics << line << std::flush;
    }
    if (!config.model_file.empty() && info.epoch % tc.eval_every == 0 &&
        info.epoch < tc.epochs) {
      save_model(config.model_file, model);
    }
    if (on_progress) {
      TrainProgress progress;
      progress.info = info;
      progress.validation = evaluated ? &last_validation : nullptr;
      on_progress(progress);
    }
  };

  if (!joint) {
    model.store = make_store(dataset.vocab.entity_count(), dataset.vocab.relation_count(),
                             tc.dim, tc.distance);
    init_store(model.store, init_rng);
    model.rng_state = init_rng.state_text();
    if (have_valid) {
      hooks.validation_metric = [&] {
        last_validation =
            link_prediction_eval(model.store, dataset.valid, candidates, val_options);
        return last_validation.mean_rank;
      };
    }
    train_baseline(model.store, dataset, tc, hooks);
  } else {
    EntityInputs entity_inputs;
    if (config.mode == "joint_mlp") {
      model.ngrams = build_ngram_vocabulary(dataset);
      entity_inputs = build_mlp_inputs(dataset, model.ngrams);
      MlpConfig mc;
      mc.input_dim = model.ngrams.size();
      mc.hidden_dim = config.hidden_dim;
      mc.output_dim = tc.dim;
      mc.normalize_output = config.normalize_output;
      model.mlp = std::make_unique<MlpEncoder>(mc);
    } else {
      model.words = data.word_vectors.words;
      entity_inputs = build_cnn_inputs(dataset, data.word_vectors.index);
      CnnConfig cc;
      cc.word_dim = data.word_vectors.dim;
      cc.word_count = data.word_vectors.size();
      cc.seq_len = config.seq_len != 0 ? config.seq_len
                                       : std::max<std::int64_t>(16, longest_description(dataset));
      cc.dense_dim = config.dense_dim;
      cc.output_dim = tc.dim;
      cc.normalize_output = config.normalize_output;
      cc.stack = CnnConfig::default_stack(cc.word_dim);
      model.cnn = std::make_unique<CnnEncoder>(cc);
    }
    Encoder& encoder = model.encoder();
    encoder.init(init_rng);
    if (model.cnn) model.cnn->load_word_vectors(data.word_vectors.vectors);
    model.relations =
        Parameter(Tensor({dataset.vocab.relation_count(), tc.dim}), "relations");
    init_embedding_table(model.relations.value, init_rng);
    model.rng_state = init_rng.state_text();

    if (have_valid) {
      hooks.validation_metric = [&] {
        EmbeddingStore eval_store = build_joint_store(model, entity_inputs);
        last_validation =
            link_prediction_eval(eval_store, dataset.valid, candidates, val_options);
        return last_validation.mean_rank;
      };
    }
    train_joint(encoder, model.relations, dataset, entity_inputs.inputs, tc, hooks);
  }

  if (!config.model_file.empty()) save_model(config.model_file, model);
  return model;
}

std::string EvalRunResult::to_text() const {
  std::string out = link.to_text();
  if (has_unseen) {
    out += "unseen-entity protocol:\n";
    out += unseen.to_text();
  }
  return out;
}

EvalRunResult run_eval(const RunConfig& config) {
  config.validate();
  Model model = load_model(config.model_file);
  LoadedData data = load_data(config, model.is_joint(), false);
  const Dataset& dataset = data.dataset;
  if (!(model.vocab == dataset.vocab)) {
    throw ConfigError("model vocabulary does not match the dataset files");
  }
  std::span<const Triple> split =
      config.eval_split == "test" ? std::span<const Triple>(dataset.test)
                                  : std::span<const Triple>(dataset.valid);
  if (split.empty()) throw ConfigError("eval split '" + config.eval_split + "' is empty");

  EmbeddingStore joint_store;
  const EmbeddingStore* store = &model.store;
  if (model.is_joint()) {
    require_description_coverage(dataset);
    EntityInputs inputs = build_inputs_for_model(model, dataset);
    joint_store = build_joint_store(model, inputs);
    store = &joint_store;
  }

  std::vector<EntityId> candidates = dataset.train_entities_sorted();
  EvalOptions options;
  options.pessimistic = config.pessimistic;
  options.sample_size = config.sample_size;
  options.seed = config.seed;
  options.threads = config.threads;
  options.hits_cutoff = config.hits_cutoff;

  EvalRunResult result;
  result.link = link_prediction_eval(*store, split, candidates, options);

  SplitReport split_report = validate_unseen_split(dataset);
  const SplitCounts& counts =
      config.eval_split == "test" ? split_report.test : split_report.valid;
  if (counts.one_unseen > 0) {
    result.has_unseen = true;
    UnseenEvalOptions unseen_options;
    unseen_options.pessimistic = config.pessimistic;
    unseen_options.hits_cutoff = config.hits_cutoff;
    result.unseen =
        unseen_entity_eval(*store, split, dataset.train_entities(), candidates, unseen_options);
  }
  return result;
}

std::vector<EmbedRow> run_embed(const RunConfig& config, std::span<const std::string> names) {
  config.validate();
  Model model = load_model(config.model_file);

  auto row_from_span = [](const std::string& name, std::span<const real> values) {
    return EmbedRow{name, std::vector<real>(values.begin(), values.end())};
  };

  std::vector<EmbedRow> rows;
  if (!model.is_joint()) {
    if (names.empty()) {
      for (EntityId id = 0; id < model.vocab.entity_count(); ++id) {
        rows.push_back(row_from_span(model.vocab.entity_name(id), model.store.entity(id)));
      }
    } else {
      for (const std::string& name : names) {
        rows.push_back(row_from_span(name, model.store.entity(required_entity(model.vocab, name))));
      }
    }
    return rows;
  }

  LoadedData data = load_data(config, true, false);
  if (!(model.vocab == data.dataset.vocab)) {
    throw ConfigError("model vocabulary does not match the dataset files");
  }
  EntityInputs inputs = build_inputs_for_model(model, data.dataset);
  const Encoder& encoder = model.encoder();
  auto encode_id = [&](EntityId id, const std::string& name) {
    if (!inputs.present[static_cast<std::size_t>(id)]) {
      throw ConfigError("entity '" + name + "' has no description to encode");
    }
    Tensor e = encoder.encode(inputs.inputs[static_cast<std::size_t>(id)]);
    return row_from_span(name, e.values());
  };
  if (names.empty()) {
    for (EntityId id = 0; id < model.vocab.entity_count(); ++id) {
      if (inputs.present[static_cast<std::size_t>(id)]) {
        rows.push_back(encode_id(id, model.vocab.entity_name(id)));
      }
    }
  } else {
    for (const std::string& name : names) {
      rows.push_back(encode_id(required_entity(model.vocab, name), name));
    }
  }
  return rows;
}

std::vector<real> embed_text(const RunConfig& config, const std::string& text) {
  config.validate();
  Model model = load_model(config.model_file);
  if (!model.is_joint()) {
    throw StateError("baseline models cannot embed raw text; train a joint model");
  }
  EncoderInput input;
  if (model.mode == "joint_mlp") {
    BongResult featurized = featurize_bong(text, model.ngrams, FeaturizeMode::infer);
    input.features = std::move(featurized.features);
  } else {
    std::unordered_map<std::string, std::int64_t> word_index = index_words(model.words);
    for (const std::string& token : tokenize(text)) {
      auto it = word_index.find(token);
      input.tokens.push_back(it == word_index.end() ? -1 : it->second);
    }
  }
  Tensor e = model.encoder().encode(input);
  return std::vector<real>(e.values().begin(), e.values().end());
}

std::vector<QueryMatch> run_query(const RunConfig& config, const std::string& head,
                                  const std::string& relation, const std::string& tail,
                                  std::int64_t k) {
  config.validate();
  if (head.empty() == tail.empty()) {
    throw ConfigError("query needs exactly one of head or tail");
  }
  Model model = load_model(config.model_file);
  LoadedData data = load_data(config, model.is_joint(), false);
  const Dataset& dataset = data.dataset;
  if (!(model.vocab == dataset.vocab)) {
    throw ConfigError("model vocabulary does not match the dataset files");
  }

  EmbeddingStore joint_store;
  const EmbeddingStore* store = &model.store;
  if (model.is_joint()) {
    require_description_coverage(dataset);
    EntityInputs inputs = build_inputs_for_model(model, dataset);
    joint_store = build_joint_store(model, inputs);
    store = &joint_store;
  }

  RelationId rel = required_relation(model.vocab, relation);
  std::span<const real> r = store->relation(rel);
  std::int64_t dim = store->dim();
  Tensor query({dim});
  if (!head.empty()) {
    // Fill the tail slot: candidates closest to head + relation.
    std::span<const real> h = store->entity(required_entity(model.vocab, head));
    for (std::int64_t i = 0; i < dim; ++i) query[i] = h[i] + r[i];
  } else {
    // Fill the head slot: d(c + r, tail) = d(c, tail - r).
    std::span<const real> t = store->entity(required_entity(model.vocab, tail));
    for (std::int64_t i = 0; i < dim; ++i) query[i] = t[i] - r[i];
  }

  std::vector<EntityId> candidates = dataset.train_entities_sorted();
  std::vector<Neighbor> neighbors = nearest_neighbors(*store, query.values(), k, candidates);
  std::vector<QueryMatch> matches;
  matches.reserve(neighbors.size());
  for (const Neighbor& n : neighbors) {
    matches.push_back({model.vocab.entity_name(n.entity), n.distance});
  }
  return matches;
}

std::string suggest_name(const std::string& name, std::span<const std::string> candidates) {
  // Levenshtein distance, two-row dynamic program.
  auto edit_distance = [](const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
      cur[0] = i;
      for (std::size_t j = 1; j <= b.size(); ++j) {
        std::size_t substitute = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
        cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, substitute});
      }
      std::swap(prev, cur);
    }
    return prev[b.size()];
  };

  std::size_t limit = std::max<std::size_t>(2, name.size() / 3);
  std::size_t best = limit + 1;
  std::string best_name;
  for (const std::string& candidate : candidates) {
    // Cheap lower bound: the length difference.
    std::size_t diff = candidate.size() > name.size() ? candidate.size() - name.size()
                                                      : name.size() - candidate.size();
    if (diff >= best) continue;
    std::size_t d = edit_distance(name, candidate);
    if (d < best) {
      best = d;
      best_name = candidate;
    }
  }
  return best <= limit ? best_name : "";
}

}  // namespace transkb
