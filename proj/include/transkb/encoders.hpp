#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "transkb/kernels.hpp"
#include "transkb/rng.hpp"
#include "transkb/tensor.hpp"
#include "transkb/types.hpp"

namespace transkb {

// Input to an encoder. The bag-of-3-grams path consumes `features`; the
// convolutional path consumes `tokens` (word-table row indices, -1 for an
// unknown word). Producers fill only the field their encoder reads.
struct EncoderInput {
  Tensor features;
  std::vector<std::int64_t> tokens;
};

// Cached forward activations needed to run the matching backward pass.
class EncodeTrace {
 public:
  virtual ~EncodeTrace() = default;
};

struct EncodeResult {
  Tensor embedding;
  std::unique_ptr<EncodeTrace> trace;
};

// Maps an entity description to an embedding. Unless the output-normalization
// ablation is switched off, the result always has unit L2 norm.
class Encoder {
 public:
  virtual ~Encoder() = default;

  virtual std::string kind() const = 0;
  virtual std::int64_t output_dim() const = 0;
  virtual bool normalizes_output() const = 0;

  // Glorot-uniform weights, zero biases.
  virtual void init(Rng& rng) = 0;

  virtual EncodeResult encode_traced(const EncoderInput& input) const = 0;
  // Accumulates parameter gradients; the trace must come from encode_traced on
  // the same input.
  virtual void encode_backward(const EncoderInput& input, const EncodeTrace& trace,
                               const Tensor& grad_output) = 0;

  virtual std::vector<Parameter*> parameters() = 0;

  Tensor encode(const EncoderInput& input) const { return encode_traced(input).embedding; }
  void zero_grads();
};

void glorot_uniform(Tensor& weights, std::int64_t fan_in, std::int64_t fan_out, Rng& rng);

struct MlpConfig {
  std::int64_t input_dim = 0;
  std::int64_t hidden_dim = 500;
  std::int64_t output_dim = 50;
  bool normalize_output = true;

  void validate() const;
};

// Dense hidden layer with relu over bag-of-3-grams features, then a
// unit-norm output layer.
class MlpEncoder final : public Encoder {
 public:
  explicit MlpEncoder(MlpConfig config);

  std::string kind() const override { return "mlp"; }
  std::int64_t output_dim() const override { return config_.output_dim; }
  bool normalizes_output() const override { return config_.normalize_output; }
  const MlpConfig& config() const { return config_; }

  void init(Rng& rng) override;
  EncodeResult encode_traced(const EncoderInput& input) const override;
  void encode_backward(const EncoderInput& input, const EncodeTrace& trace,
                       const Tensor& grad_output) override;
  std::vector<Parameter*> parameters() override;

 private:
  MlpConfig config_;
  Parameter hidden_w_, hidden_b_;
  Parameter out_w_, out_b_;
};

struct CnnLayerSpec {
  enum class Kind { conv, pool };

  Kind kind = Kind::conv;
  std::int64_t channels = 0;  // conv output channels
  std::int64_t kh = 0;        // conv kernel height
  std::int64_t kw = 0;        // conv kernel width / pool window width
  std::int64_t stride = 1;

  static CnnLayerSpec conv(std::int64_t channels, std::int64_t kh, std::int64_t kw,
                           std::int64_t stride = 1) {
    return {Kind::conv, channels, kh, kw, stride};
  }
  static CnnLayerSpec pool(std::int64_t width, std::int64_t stride) {
    return {Kind::pool, 0, 0, width, stride};
  }
};

struct CnnConfig {
  std::int64_t word_dim = 50;
  std::int64_t word_count = 0;  // trainable rows before the trailing unknown-word row
  std::int64_t seq_len = 16;    // fixed input length; shorter token lists are padded
  std::int64_t dense_dim = 500;
  std::int64_t output_dim = 50;
  bool normalize_output = true;
  std::vector<CnnLayerSpec> stack;

  // The description-modeling stack: a word-dim-collapsing convolution, then
  // width-3 convolutions with channel widths 64/128/128/256/512 interleaved
  // with width-2 stride-2 max pools, every convolution biased and relu'd.
  static std::vector<CnnLayerSpec> default_stack(std::int64_t word_dim);

  void validate() const;
};

// Convolutional encoder over a trainable word-vector table. Token index -1
// (and padding past the end of the token list) selects the trailing
// unknown-word row, which starts at zero and trains with the rest.
class CnnEncoder final : public Encoder {
 public:
  explicit CnnEncoder(CnnConfig config);

  std::string kind() const override { return "cnn"; }
  std::int64_t output_dim() const override { return config_.output_dim; }
  bool normalizes_output() const override { return config_.normalize_output; }
  const CnnConfig& config() const { return config_; }
  std::int64_t flatten_dim() const { return flatten_dim_; }

  void init(Rng& rng) override;
  // Copies pretrained vectors (word_count x word_dim) into the table and
  // zeroes the unknown-word row.
  void load_word_vectors(const Tensor& vectors);

  EncodeResult encode_traced(const EncoderInput& input) const override;
  void encode_backward(const EncoderInput& input, const EncodeTrace& trace,
                       const Tensor& grad_output) override;
  std::vector<Parameter*> parameters() override;

  Parameter& word_table() { return words_; }

 private:
  // Word-table row for each of the seq_len input columns.
  std::vector<std::int64_t> resolve_rows(std::span<const std::int64_t> tokens) const;

  CnnConfig config_;
  std::int64_t flatten_dim_ = 0;
  Parameter words_;
  std::vector<Parameter> conv_w_, conv_b_;  // one per conv layer, in stack order
  Parameter dense_w_, dense_b_;
  Parameter out_w_, out_b_;
};

}  // namespace transkb
