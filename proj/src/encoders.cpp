#include "transkb/encoders.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace transkb {

void Encoder::zero_grads() {
  for (Parameter* p : parameters()) p->zero_grad();
}

void glorot_uniform(Tensor& weights, std::int64_t fan_in, std::int64_t fan_out, Rng& rng) {
  real bound = std::sqrt(real(6) / static_cast<real>(fan_in + fan_out));
  for (real& v : weights.values()) v = rng.uniform(-bound, bound);
}

namespace {

struct MlpTrace final : EncodeTrace {
  Tensor hidden_pre;  // before relu
  Tensor hidden;      // after relu
};

struct CnnTrace final : EncodeTrace {
  Tensor input;                    // (1, word_dim, seq_len) word-vector columns
  std::vector<std::int64_t> rows;  // word-table row backing each column
  std::vector<Tensor> activations;
  std::vector<Tensor> pre_relu;        // conv layers only; empty for pools
  std::vector<MaxPoolResult> pools;    // pool layers only; empty for convs
  Tensor flat;
  Tensor dense_pre;
  Tensor dense_act;
};

void require_config(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

void MlpConfig::validate() const {
  require_config(input_dim >= 1, "mlp input_dim must be >= 1, got " + std::to_string(input_dim));
  require_config(hidden_dim >= 1, "mlp hidden_dim must be >= 1, got " + std::to_string(hidden_dim));
  require_config(output_dim >= 1, "mlp output_dim must be >= 1, got " + std::to_string(output_dim));
}

MlpEncoder::MlpEncoder(MlpConfig config) : config_(config) {
  config_.validate();
  hidden_w_ = Parameter(Tensor({config_.hidden_dim, config_.input_dim}), "mlp.hidden.weight");
  hidden_b_ = Parameter(Tensor({config_.hidden_dim}), "mlp.hidden.bias");
  out_w_ = Parameter(Tensor({config_.output_dim, config_.hidden_dim}), "mlp.output.weight");
  out_b_ = Parameter(Tensor({config_.output_dim}), "mlp.output.bias");
}

void MlpEncoder::init(Rng& rng) {
  glorot_uniform(hidden_w_.value, config_.input_dim, config_.hidden_dim, rng);
  hidden_b_.value.zero();
  glorot_uniform(out_w_.value, config_.hidden_dim, config_.output_dim, rng);
  out_b_.value.zero();
  zero_grads();
}

EncodeResult MlpEncoder::encode_traced(const EncoderInput& input) const {
  if (input.features.rank() != 1 || input.features.dim(0) != config_.input_dim) {
    throw DimensionError("mlp expects a feature vector of length " +
                         std::to_string(config_.input_dim) + ", got shape " +
                         input.features.shape_string());
  }
  auto trace = std::make_unique<MlpTrace>();
  trace->hidden_pre = dense_forward(input.features, hidden_w_, hidden_b_);
  trace->hidden = relu(trace->hidden_pre);
  Tensor embedding = config_.normalize_output
                         ? l2norm_layer_forward(trace->hidden, out_w_, out_b_)
                         : dense_forward(trace->hidden, out_w_, out_b_);
  return {std::move(embedding), std::move(trace)};
}

void MlpEncoder::encode_backward(const EncoderInput& input, const EncodeTrace& trace,
                                 const Tensor& grad_output) {
  const auto& t = dynamic_cast<const MlpTrace&>(trace);
  Tensor grad_hidden = config_.normalize_output
                           ? l2norm_layer_backward(grad_output, t.hidden, out_w_, out_b_)
                           : dense_backward(grad_output, t.hidden, out_w_, out_b_);
  Tensor grad_pre = relu_backward(grad_hidden, t.hidden_pre);
  dense_backward(grad_pre, input.features, hidden_w_, hidden_b_);
}

std::vector<Parameter*> MlpEncoder::parameters() {
  return {&hidden_w_, &hidden_b_, &out_w_, &out_b_};
}

std::vector<CnnLayerSpec> CnnConfig::default_stack(std::int64_t word_dim) {
  return {
      CnnLayerSpec::conv(64, word_dim, 1),
      CnnLayerSpec::conv(64, 1, 3),
      CnnLayerSpec::pool(2, 2),
      CnnLayerSpec::conv(128, 1, 3),
      CnnLayerSpec::conv(128, 1, 3),
      CnnLayerSpec::pool(2, 2),
      CnnLayerSpec::conv(256, 1, 3),
      CnnLayerSpec::pool(2, 2),
      CnnLayerSpec::conv(512, 1, 3),
      CnnLayerSpec::pool(2, 2),
  };
}

void CnnConfig::validate() const {
  require_config(word_dim >= 1, "cnn word_dim must be >= 1, got " + std::to_string(word_dim));
  require_config(word_count >= 0, "cnn word_count must be >= 0, got " + std::to_string(word_count));
  require_config(seq_len >= 1, "cnn seq_len must be >= 1, got " + std::to_string(seq_len));
  require_config(dense_dim >= 1, "cnn dense_dim must be >= 1, got " + std::to_string(dense_dim));
  require_config(output_dim >= 1, "cnn output_dim must be >= 1, got " + std::to_string(output_dim));
  require_config(!stack.empty(), "cnn stack must contain at least one layer");
  for (std::size_t i = 0; i < stack.size(); ++i) {
    const CnnLayerSpec& layer = stack[i];
    std::string at = "cnn stack layer " + std::to_string(i + 1);
    if (layer.kind == CnnLayerSpec::Kind::conv) {
      require_config(layer.channels >= 1, at + ": conv channels must be >= 1");
      require_config(layer.kh >= 1 && layer.kw >= 1, at + ": conv kernel dims must be >= 1");
      require_config(layer.stride >= 1, at + ": conv stride must be >= 1");
    } else {
      require_config(layer.kw >= 1, at + ": pool width must be >= 1");
      require_config(layer.stride >= 1, at + ": pool stride must be >= 1");
    }
  }
}

CnnEncoder::CnnEncoder(CnnConfig config) : config_(std::move(config)) {
  config_.validate();
  words_ = Parameter(Tensor({config_.word_count + 1, config_.word_dim}), "cnn.words");

  // Walk the stack symbolically to size every kernel and the dense layer.
  std::int64_t c = 1, h = config_.word_dim, len = config_.seq_len;
  std::int64_t conv_index = 0;
  for (std::size_t i = 0; i < config_.stack.size(); ++i) {
    const CnnLayerSpec& layer = config_.stack[i];
    if (layer.kind == CnnLayerSpec::Kind::conv) {
      if (layer.kh > h) {
        throw ConfigError("cnn stack layer " + std::to_string(i + 1) + ": kernel height " +
                          std::to_string(layer.kh) + " exceeds feature map height " +
                          std::to_string(h));
      }
      ++conv_index;
      std::string base = "cnn.conv" + std::to_string(conv_index);
      conv_w_.emplace_back(Tensor({layer.channels, c, layer.kh, layer.kw}), base + ".weight");
      conv_b_.emplace_back(Tensor({layer.channels}), base + ".bias");
      h = h - layer.kh + 1;
      len = (len + layer.stride - 1) / layer.stride;  // same padding
      c = layer.channels;
    } else {
      len = len < layer.kw ? 1 : (len - layer.kw) / layer.stride + 1;
    }
  }
  flatten_dim_ = c * h * len;
  dense_w_ = Parameter(Tensor({config_.dense_dim, flatten_dim_}), "cnn.dense.weight");
  dense_b_ = Parameter(Tensor({config_.dense_dim}), "cnn.dense.bias");
  out_w_ = Parameter(Tensor({config_.output_dim, config_.dense_dim}), "cnn.output.weight");
  out_b_ = Parameter(Tensor({config_.output_dim}), "cnn.output.bias");
}

void CnnEncoder::init(Rng& rng) {
  words_.value.zero();
  for (std::size_t i = 0; i < conv_w_.size(); ++i) {
    const auto& shape = conv_w_[i].value.shape();
    std::int64_t window = shape[2] * shape[3];
    glorot_uniform(conv_w_[i].value, shape[1] * window, shape[0] * window, rng);
    conv_b_[i].value.zero();
  }
  glorot_uniform(dense_w_.value, flatten_dim_, config_.dense_dim, rng);
  dense_b_.value.zero();
  glorot_uniform(out_w_.value, config_.dense_dim, config_.output_dim, rng);
  out_b_.value.zero();
  zero_grads();
}

void CnnEncoder::load_word_vectors(const Tensor& vectors) {
  if (vectors.rank() != 2 || vectors.dim(0) != config_.word_count ||
      vectors.dim(1) != config_.word_dim) {
    throw DimensionError("word vector table shape " + vectors.shape_string() +
                         " does not match configured (" + std::to_string(config_.word_count) +
                         ", " + std::to_string(config_.word_dim) + ")");
  }
  std::copy(vectors.values().begin(), vectors.values().end(), words_.value.values().begin());
  std::span<real> unknown = words_.value.row(config_.word_count);
  std::fill(unknown.begin(), unknown.end(), real(0));
}

std::vector<std::int64_t> CnnEncoder::resolve_rows(std::span<const std::int64_t> tokens) const {
  std::int64_t unknown_row = config_.word_count;
  std::vector<std::int64_t> rows(static_cast<std::size_t>(config_.seq_len), unknown_row);
  std::size_t used = std::min(tokens.size(), static_cast<std::size_t>(config_.seq_len));
  for (std::size_t j = 0; j < used; ++j) {
    std::int64_t t = tokens[j];
    if (t == -1) continue;  // unknown word
    if (t < 0 || t >= config_.word_count) {
      throw IndexError("token index " + std::to_string(t) + " out of range [0, " +
                       std::to_string(config_.word_count) + ")");
    }
    rows[j] = t;
  }
  return rows;
}

EncodeResult CnnEncoder::encode_traced(const EncoderInput& input) const {
  auto trace = std::make_unique<CnnTrace>();
  trace->rows = resolve_rows(input.tokens);
  trace->input = Tensor({1, config_.word_dim, config_.seq_len});
  for (std::int64_t j = 0; j < config_.seq_len; ++j) {
    std::span<const real> word = words_.value.row(trace->rows[static_cast<std::size_t>(j)]);
    for (std::int64_t d = 0; d < config_.word_dim; ++d) {
      trace->input.at(0, d, j) = word[static_cast<std::size_t>(d)];
    }
  }

  std::size_t n_layers = config_.stack.size();
  trace->activations.resize(n_layers);
  trace->pre_relu.resize(n_layers);
  trace->pools.resize(n_layers);
  const Tensor* cur = &trace->input;
  std::size_t conv_index = 0;
  for (std::size_t i = 0; i < n_layers; ++i) {
    const CnnLayerSpec& layer = config_.stack[i];
    if (layer.kind == CnnLayerSpec::Kind::conv) {
      Tensor z = conv_seq_forward(*cur, conv_w_[conv_index], layer.stride, PadMode::same);
      trace->pre_relu[i] = channel_bias_forward(z, conv_b_[conv_index]);
      trace->activations[i] = relu(trace->pre_relu[i]);
      ++conv_index;
    } else {
      trace->pools[i] = maxpool_seq(*cur, layer.kw, layer.stride);
      trace->activations[i] = trace->pools[i].output;
    }
    cur = &trace->activations[i];
  }

  trace->flat = Tensor::from_data({cur->size()},
                                  std::vector<real>(cur->values().begin(), cur->values().end()));
  trace->dense_pre = dense_forward(trace->flat, dense_w_, dense_b_);
  trace->dense_act = relu(trace->dense_pre);
  Tensor embedding = config_.normalize_output
                         ? l2norm_layer_forward(trace->dense_act, out_w_, out_b_)
                         : dense_forward(trace->dense_act, out_w_, out_b_);
  return {std::move(embedding), std::move(trace)};
}

void CnnEncoder::encode_backward(const EncoderInput& /*input*/, const EncodeTrace& trace,
                                 const Tensor& grad_output) {
  const auto& t = dynamic_cast<const CnnTrace&>(trace);
  Tensor grad_dense_act = config_.normalize_output
                              ? l2norm_layer_backward(grad_output, t.dense_act, out_w_, out_b_)
                              : dense_backward(grad_output, t.dense_act, out_w_, out_b_);
  Tensor grad_dense_pre = relu_backward(grad_dense_act, t.dense_pre);
  Tensor grad_flat = dense_backward(grad_dense_pre, t.flat, dense_w_, dense_b_);

  const Tensor& last = t.activations.back();
  Tensor grad_cur = Tensor::from_data(
      last.shape(), std::vector<real>(grad_flat.values().begin(), grad_flat.values().end()));

  std::size_t conv_index = conv_w_.size();
  for (std::size_t i = config_.stack.size(); i-- > 0;) {
    const CnnLayerSpec& layer = config_.stack[i];
    const Tensor& layer_input = i == 0 ? t.input : t.activations[i - 1];
    if (layer.kind == CnnLayerSpec::Kind::conv) {
      --conv_index;
      Tensor grad_pre = relu_backward(grad_cur, t.pre_relu[i]);
      channel_bias_backward(grad_pre, conv_b_[conv_index]);
      grad_cur = conv_seq_backward(grad_pre, layer_input, conv_w_[conv_index], layer.stride,
                                   PadMode::same);
    } else {
      grad_cur = maxpool_backward(grad_cur, t.pools[i], layer_input.shape());
    }
  }

  // grad_cur now matches the (1, word_dim, seq_len) input; scatter it back
  // into the word-table rows that produced each column.
  for (std::int64_t j = 0; j < config_.seq_len; ++j) {
    std::span<real> grad_word = words_.grad.row(t.rows[static_cast<std::size_t>(j)]);
    for (std::int64_t d = 0; d < config_.word_dim; ++d) {
      grad_word[static_cast<std::size_t>(d)] += grad_cur.at(0, d, j);
    }
  }
}

std::vector<Parameter*> CnnEncoder::parameters() {
  std::vector<Parameter*> params;
  params.push_back(&words_);
  for (std::size_t i = 0; i < conv_w_.size(); ++i) {
    params.push_back(&conv_w_[i]);
    params.push_back(&conv_b_[i]);
  }
  params.push_back(&dense_w_);
  params.push_back(&dense_b_);
  params.push_back(&out_w_);
  params.push_back(&out_b_);
  return params;
}

}  // namespace transkb
