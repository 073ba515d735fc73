#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "transkb/dataset.hpp"
#include "transkb/encoders.hpp"
#include "transkb/rng.hpp"
#include "transkb/transe.hpp"

namespace transkb {

struct TrainConfig {
  real gamma = 1.0;        // hinge margin
  real lr = 0.01;          // learning rate
  real momentum = 0.9;     // Nesterov momentum coefficient; 0 = plain SGD
  std::int64_t batch_size = 512;
  std::int64_t epochs = 100;
  std::int64_t dim = 50;
  Distance distance = Distance::l1;
  std::uint64_t seed = 42;
  // Resample a corruption (up to a fixed retry budget) when it collides with
  // a known training fact. Off by default: a sampled negative may be true.
  bool filtered_negatives = false;
  // Baseline: also rescale relation rows to unit norm every iteration (the
  // joint trainer always does).
  bool renormalize_relations = false;
  std::int64_t eval_every = 1;  // epochs between validation-metric evaluations
  bool early_stopping = false;
  std::int64_t patience = 5;  // evaluations without validation improvement

  void validate() const;
};

struct EpochInfo {
  std::int64_t epoch = 0;  // 1-based
  real loss = 0;           // summed hinge over the epoch
  std::int64_t active = 0;         // pairs that violated the margin
  std::int64_t iterations = 0;     // mini-batches this epoch
  real validation = std::numeric_limits<real>::quiet_NaN();
};

struct TrainHooks {
  std::function<void(const EpochInfo&)> on_epoch;
  // Runs after each mini-batch update and renormalization.
  std::function<void(std::int64_t epoch, std::int64_t iteration)> on_iteration;
  // Lower is better. Evaluated every TrainConfig::eval_every epochs; drives
  // early stopping and the best-model restore when early_stopping is set.
  std::function<real()> validation_metric;
};

struct TrainResult {
  std::int64_t epochs_run = 0;
  std::int64_t iterations_run = 0;
  real final_loss = 0;
  bool stopped_early = false;
  std::int64_t best_epoch = 0;
  real best_validation = std::numeric_limits<real>::quiet_NaN();
};

// One momentum step: v <- mu*v - lr*grad, value <- value + mu*v - lr*grad.
// Throws NumericError on any non-finite gradient entry before mutating
// anything. `name` labels the error message.
void nesterov_update(Tensor& value, const Tensor& grad, Tensor& velocity, real lr, real momentum,
                     const std::string& name = "");

// Applies nesterov_update to every parameter, then clears all grad buffers.
// Checks every gradient for finiteness up front so a failure never leaves the
// parameters partially stepped. Velocities are created on first use.
void nesterov_step(std::span<Parameter* const> params, std::vector<Tensor>& velocities, real lr,
                   real momentum);

// Fills the table with uniform(-6/sqrt(dim), 6/sqrt(dim)) draws, then scales
// every row to unit norm.
void init_embedding_table(Tensor& table, Rng& rng);

EmbeddingStore make_store(std::int64_t entity_count, std::int64_t relation_count, std::int64_t dim,
                          Distance distance);
// Draws both tables from the "init" substream of config-seeded randomness.
void init_store(EmbeddingStore& store, Rng& rng);

// Margin-based training of the embedding tables. Per epoch: shuffle the
// training triples, and for each mini-batch pair every positive with one
// corruption (one entity side replaced uniformly from the whole vocabulary),
// take a momentum step, and rescale entity rows (and relation rows when
// configured) to unit norm.
TrainResult train_baseline(EmbeddingStore& store, const Dataset& data, const TrainConfig& config,
                           const TrainHooks& hooks = {});

// Joint training: entity embeddings come from the encoder applied to
// `entity_inputs[id]`, relation embeddings from the `relations` table. Each
// mini-batch encodes its distinct entities once (in ascending id order),
// backpropagates the margin loss through the encoder, steps encoder
// parameters and relations together, then rescales relation rows to unit
// norm. Corruptions draw from the entities seen in training triples.
TrainResult train_joint(Encoder& encoder, Parameter& relations, const Dataset& data,
                        std::span<const EncoderInput> entity_inputs, const TrainConfig& config,
                        const TrainHooks& hooks = {});

}  // namespace transkb
