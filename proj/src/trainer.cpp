#include "transkb/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace transkb {

void TrainConfig::validate() const {
  if (!(gamma >= 0) || !std::isfinite(gamma)) {
    throw ConfigError("gamma must be finite and >= 0, got " + std::to_string(gamma));
  }
  if (!(lr > 0) || !std::isfinite(lr)) {
    throw ConfigError("lr must be finite and > 0, got " + std::to_string(lr));
  }
  if (!(momentum >= 0 && momentum < 1)) {
    throw ConfigError("momentum must lie in [0, 1), got " + std::to_string(momentum));
  }
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (dim < 1) throw ConfigError("dim must be >= 1");
  if (eval_every < 1) throw ConfigError("eval_every must be >= 1");
  if (patience < 1) throw ConfigError("patience must be >= 1");
}

void nesterov_update(Tensor& value, const Tensor& grad, Tensor& velocity, real lr, real momentum,
                     const std::string& name) {
  if (!value.same_shape(grad) || !value.same_shape(velocity)) {
    throw DimensionError("nesterov_update shape mismatch for " +
                         (name.empty() ? std::string("parameter") : name));
  }
  if (!grad.all_finite()) {
    throw NumericError("non-finite gradient for " + (name.empty() ? std::string("parameter") : name));
  }
  real* v = velocity.data();
  real* p = value.data();
  const real* g = grad.data();
  for (std::int64_t i = 0; i < value.size(); ++i) {
    v[i] = momentum * v[i] - lr * g[i];
    p[i] += momentum * v[i] - lr * g[i];
  }
}

void nesterov_step(std::span<Parameter* const> params, std::vector<Tensor>& velocities, real lr,
                   real momentum) {
  if (velocities.empty()) {
    velocities.reserve(params.size());
    for (Parameter* p : params) velocities.emplace_back(p->value.shape());
  }
  if (velocities.size() != params.size()) {
    throw DimensionError("nesterov_step velocity count does not match parameter count");
  }
  // Validate every gradient first so a bad one cannot leave the model half
  // stepped.
  for (Parameter* p : params) {
    if (!p->grad.all_finite()) {
      throw NumericError("non-finite gradient for " +
                         (p->name.empty() ? std::string("parameter") : p->name));
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    nesterov_update(params[i]->value, params[i]->grad, velocities[i], lr, momentum,
                    params[i]->name);
  }
  for (Parameter* p : params) p->zero_grad();
}

void init_embedding_table(Tensor& table, Rng& rng) {
  real bound = real(6) / std::sqrt(static_cast<real>(table.dim(1)));
  for (real& v : table.values()) v = rng.uniform(-bound, bound);
  renormalize_rows(table, "embedding");
}

EmbeddingStore make_store(std::int64_t entity_count, std::int64_t relation_count, std::int64_t dim,
                          Distance distance) {
  if (entity_count < 1 || relation_count < 1 || dim < 1) {
    throw ConfigError("embedding store needs entity_count, relation_count, dim all >= 1");
  }
  EmbeddingStore store;
  store.entities = Tensor({entity_count, dim});
  store.relations = Tensor({relation_count, dim});
  store.distance = distance;
  return store;
}

void init_store(EmbeddingStore& store, Rng& rng) {
  init_embedding_table(store.entities, rng);
  init_embedding_table(store.relations, rng);
}

namespace {

struct TripleHash {
  std::size_t operator()(const Triple& t) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    auto mix = [&h](std::uint64_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
    mix(static_cast<std::uint64_t>(t.head));
    mix(static_cast<std::uint64_t>(t.relation));
    mix(static_cast<std::uint64_t>(t.tail));
    return static_cast<std::size_t>(h);
  }
};

// Draws one corruption per positive; with filtering on, resamples (bounded)
// while the draw collides with a known training fact.
class NegativeSampler {
 public:
  NegativeSampler(const Dataset& data, bool filtered) {
    if (filtered) {
      known_.reserve(data.train.size() * 2);
      known_.insert(data.train.begin(), data.train.end());
    }
  }

  template <typename Source>
  Triple draw(const Triple& positive, Rng& rng, const Source& source) const {
    Triple negative = corrupt(positive, rng, source, CorruptSide::uniform_random);
    if (!known_.empty()) {
      for (int tries = 0; tries < kMaxResamples && known_.count(negative) != 0; ++tries) {
        negative = corrupt(positive, rng, source, CorruptSide::uniform_random);
      }
    }
    return negative;
  }

 private:
  static constexpr int kMaxResamples = 100;
  std::unordered_set<Triple, TripleHash> known_;
};

// Shared per-epoch bookkeeping: validation metric, early stopping with
// patience, and best-state restore.
class EpochController {
 public:
  EpochController(const TrainConfig& config, const TrainHooks& hooks,
                  std::function<std::vector<Tensor>()> snapshot,
                  std::function<void(std::vector<Tensor>)> restore)
      : config_(config), hooks_(hooks), snapshot_(std::move(snapshot)),
        restore_(std::move(restore)) {
    if (config_.early_stopping && !hooks_.validation_metric) {
      throw ConfigError("early stopping requires a validation metric");
    }
  }

  // Returns true when training should stop.
  bool finish_epoch(EpochInfo info) {
    result_.epochs_run = info.epoch;
    result_.iterations_run += info.iterations;
    result_.final_loss = info.loss;
    bool stop = false;
    if (hooks_.validation_metric && info.epoch % config_.eval_every == 0) {
      info.validation = hooks_.validation_metric();
      if (std::isnan(result_.best_validation) || info.validation < result_.best_validation) {
        result_.best_validation = info.validation;
        result_.best_epoch = info.epoch;
        epochs_since_best_ = 0;
        if (config_.early_stopping) best_state_ = snapshot_();
      } else if (config_.early_stopping && ++epochs_since_best_ >= config_.patience) {
        result_.stopped_early = true;
        stop = true;
      }
    }
    if (hooks_.on_epoch) hooks_.on_epoch(info);
    return stop;
  }

  TrainResult finalize() {
    if (!best_state_.empty()) restore_(std::move(best_state_));
    return std::move(result_);
  }

 private:
  const TrainConfig& config_;
  const TrainHooks& hooks_;
  std::function<std::vector<Tensor>()> snapshot_;
  std::function<void(std::vector<Tensor>)> restore_;
  std::vector<Tensor> best_state_;
  std::int64_t epochs_since_best_ = 0;
  TrainResult result_;
};

}  // namespace

TrainResult train_baseline(EmbeddingStore& store, const Dataset& data, const TrainConfig& config,
                           const TrainHooks& hooks) {
  config.validate();
  std::int64_t entity_count = data.vocab.entity_count();
  std::int64_t relation_count = data.vocab.relation_count();
  if (store.entity_count() != entity_count || store.relation_count() != relation_count) {
    throw ConfigError("embedding store shape (" + std::to_string(store.entity_count()) + ", " +
                      std::to_string(store.relation_count()) +
                      ") does not match vocabulary (" + std::to_string(entity_count) + ", " +
                      std::to_string(relation_count) + ")");
  }
  if (data.train.empty()) throw ConfigError("no training triples");
  if (entity_count < 2) throw ConfigError("training requires at least 2 entities");

  Rng shuffle_rng(substream_seed(config.seed, "shuffle"));
  Rng corrupt_rng(substream_seed(config.seed, "corrupt"));
  NegativeSampler sampler(data, config.filtered_negatives);

  Tensor entity_grad(store.entities.shape());
  Tensor relation_grad(store.relations.shape());
  Tensor entity_vel(store.entities.shape());
  Tensor relation_vel(store.relations.shape());

  EpochController controller(
      config, hooks,
      [&] { return std::vector<Tensor>{store.entities, store.relations}; },
      [&](std::vector<Tensor> state) {
        store.entities = std::move(state[0]);
        store.relations = std::move(state[1]);
      });

  std::vector<std::size_t> order(data.train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<Triple> positives, negatives;
  positives.reserve(static_cast<std::size_t>(config.batch_size));
  negatives.reserve(static_cast<std::size_t>(config.batch_size));

  for (std::int64_t epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    EpochInfo info;
    info.epoch = epoch;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      positives.clear();
      negatives.clear();
      for (std::size_t i = start; i < stop; ++i) {
        const Triple& t = data.train[order[i]];
        positives.push_back(t);
        negatives.push_back(sampler.draw(t, corrupt_rng, entity_count));
      }
      entity_grad.zero();
      relation_grad.zero();
      MarginBatchResult batch = margin_loss(store.entities, store.relations, positives, negatives,
                                            store.distance, config.gamma, entity_grad,
                                            relation_grad);
      info.loss += batch.loss;
      info.active += batch.active;
      nesterov_update(store.entities, entity_grad, entity_vel, config.lr, config.momentum,
                      "entities");
      nesterov_update(store.relations, relation_grad, relation_vel, config.lr, config.momentum,
                      "relations");
      renormalize(store, RenormalizeTarget::entities);
      if (config.renormalize_relations) renormalize(store, RenormalizeTarget::relations);
      ++info.iterations;
      if (hooks.on_iteration) hooks.on_iteration(epoch, info.iterations);
    }
    if (controller.finish_epoch(info)) break;
  }
  return controller.finalize();
}

TrainResult train_joint(Encoder& encoder, Parameter& relations, const Dataset& data,
                        std::span<const EncoderInput> entity_inputs, const TrainConfig& config,
                        const TrainHooks& hooks) {
  config.validate();
  std::int64_t entity_count = data.vocab.entity_count();
  std::int64_t relation_count = data.vocab.relation_count();
  std::int64_t dim = encoder.output_dim();
  if (relations.value.rank() != 2 || relations.value.dim(0) != relation_count ||
      relations.value.dim(1) != dim) {
    throw ConfigError("relation table shape " + relations.value.shape_string() +
                      " does not match " + std::to_string(relation_count) + " relations of dim " +
                      std::to_string(dim));
  }
  if (static_cast<std::int64_t>(entity_inputs.size()) != entity_count) {
    throw ConfigError("entity input count " + std::to_string(entity_inputs.size()) +
                      " does not match vocabulary size " + std::to_string(entity_count));
  }
  if (data.train.empty()) throw ConfigError("no training triples");
  std::vector<EntityId> candidates = data.train_entities_sorted();
  if (candidates.size() < 2) throw ConfigError("training requires at least 2 seen entities");

  Rng shuffle_rng(substream_seed(config.seed, "shuffle"));
  Rng corrupt_rng(substream_seed(config.seed, "corrupt"));
  NegativeSampler sampler(data, config.filtered_negatives);

  std::vector<Parameter*> params = encoder.parameters();
  params.push_back(&relations);
  for (Parameter* p : params) p->zero_grad();
  std::vector<Tensor> velocities;

  EpochController controller(
      config, hooks,
      [&] {
        std::vector<Tensor> state;
        state.reserve(params.size());
        for (Parameter* p : params) state.push_back(p->value);
        return state;
      },
      [&](std::vector<Tensor> state) {
        for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = std::move(state[i]);
      });

  std::vector<std::size_t> order(data.train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<Triple> positives, negatives, local_pos, local_neg;

  for (std::int64_t epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    EpochInfo info;
    info.epoch = epoch;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      positives.clear();
      negatives.clear();
      for (std::size_t i = start; i < stop; ++i) {
        const Triple& t = data.train[order[i]];
        positives.push_back(t);
        negatives.push_back(sampler.draw(t, corrupt_rng, candidates));
      }

      // Encode each distinct entity in the batch once, in ascending id order
      // so the traversal (and therefore the arithmetic) is deterministic.
      std::vector<EntityId> distinct;
      distinct.reserve(positives.size() * 2);
      for (std::size_t i = 0; i < positives.size(); ++i) {
        distinct.push_back(positives[i].head);
        distinct.push_back(positives[i].tail);
        distinct.push_back(negatives[i].head);
        distinct.push_back(negatives[i].tail);
      }
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

      std::unordered_map<EntityId, std::int64_t> local;
      local.reserve(distinct.size());
      Tensor batch_entities({static_cast<std::int64_t>(distinct.size()), dim});
      std::vector<std::unique_ptr<EncodeTrace>> traces;
      traces.reserve(distinct.size());
      for (std::size_t i = 0; i < distinct.size(); ++i) {
        EntityId id = distinct[i];
        local.emplace(id, static_cast<std::int64_t>(i));
        EncodeResult encoded = encoder.encode_traced(entity_inputs[static_cast<std::size_t>(id)]);
        std::copy(encoded.embedding.values().begin(), encoded.embedding.values().end(),
                  batch_entities.row(static_cast<std::int64_t>(i)).begin());
        traces.push_back(std::move(encoded.trace));
      }

      local_pos.clear();
      local_neg.clear();
      for (std::size_t i = 0; i < positives.size(); ++i) {
        local_pos.push_back(
            {local.at(positives[i].head), positives[i].relation, local.at(positives[i].tail)});
        local_neg.push_back(
            {local.at(negatives[i].head), negatives[i].relation, local.at(negatives[i].tail)});
      }

      Tensor batch_entity_grad(batch_entities.shape());
      MarginBatchResult batch = margin_loss(batch_entities, relations.value, local_pos, local_neg,
                                            config.distance, config.gamma, batch_entity_grad,
                                            relations.grad);
      info.loss += batch.loss;
      info.active += batch.active;

      for (std::size_t i = 0; i < distinct.size(); ++i) {
        std::span<const real> g = batch_entity_grad.row(static_cast<std::int64_t>(i));
        Tensor grad_row = Tensor::from_data({dim}, std::vector<real>(g.begin(), g.end()));
        encoder.encode_backward(entity_inputs[static_cast<std::size_t>(distinct[i])], *traces[i],
                                grad_row);
      }

      nesterov_step(params, velocities, config.lr, config.momentum);
      renormalize_rows(relations.value, "relation");
      ++info.iterations;
      if (hooks.on_iteration) hooks.on_iteration(epoch, info.iterations);
    }
    if (controller.finish_epoch(info)) break;
  }
  return controller.finalize();
}

}  // namespace transkb
