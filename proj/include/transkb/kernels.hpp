#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "transkb/tensor.hpp"

namespace transkb {

// Affine layer y = Wx + b with W of shape (out, in), x of shape (in).
Tensor dense_forward(const Tensor& x, const Parameter& w, const Parameter& b);
// Accumulates into w.grad and b.grad, returns grad_x.
Tensor dense_backward(const Tensor& grad_out, const Tensor& x, Parameter& w, Parameter& b);

Tensor relu(const Tensor& x);
// Subgradient at 0 is 0.
Tensor relu_backward(const Tensor& grad_out, const Tensor& x);

enum class PadMode {
  valid,  // no padding; kernel must fit inside the input
  same,   // zero-pad the x axis so the output length is ceil(L / stride)
};

// Sequence convolution (cross-correlation, no kernel flip) for feature maps of
// shape (channels, h, L) and kernels of shape (c_out, c_in, kh, kw). The
// stride applies to the x axis only; the y axis is always valid, so kh must be
// either h (first layer, collapsing the word-vector axis) or 1.
Tensor conv_seq_forward(const Tensor& input, const Parameter& kernel, std::int64_t stride,
                        PadMode pad);
// Accumulates into kernel.grad, returns grad_input.
Tensor conv_seq_backward(const Tensor& grad_out, const Tensor& input, Parameter& kernel,
                         std::int64_t stride, PadMode pad);

// Adds a per-channel bias to a (c, h, L) feature map.
Tensor channel_bias_forward(const Tensor& input, const Parameter& b);
Tensor channel_bias_backward(const Tensor& grad_out, Parameter& b);

struct MaxPoolResult {
  Tensor output;
  // Flat input index of the window maximum, or -1 when a zero pad won the
  // window (possible only for inputs shorter than the pool width).
  std::vector<std::int64_t> argmax;
};

// Max pooling along the x axis of a (c, h, L) map. Inputs shorter than
// `width` are right-padded with zeros so at least one window exists; otherwise
// the output length is floor((L - width) / stride) + 1.
MaxPoolResult maxpool_seq(const Tensor& input, std::int64_t width, std::int64_t stride);
Tensor maxpool_backward(const Tensor& grad_out, const MaxPoolResult& cached,
                        const std::vector<std::int64_t>& input_shape);

inline constexpr real kNormEpsilon = 1e-12;

// Output layer e = (Wx + b) / ||Wx + b||_2, guaranteeing a unit-norm result.
Tensor l2norm_layer_forward(const Tensor& x, const Parameter& w, const Parameter& b);
Tensor l2norm_layer_backward(const Tensor& grad_out, const Tensor& x, Parameter& w,
                             Parameter& b);

struct GradCheckOptions {
  double step = 1e-5;
  // Coordinates where both gradients are this small in magnitude compare as
  // exact; keeps central-difference noise out of the relative error.
  double denominator_floor = 1.0;
  // Optional per-coordinate exclusion (parameter index in the list, flat
  // coordinate). Used to skip non-differentiable loci such as relu at 0.
  std::function<bool(std::size_t, std::int64_t)> exclude;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::int64_t coords_checked = 0;
  std::int64_t coords_skipped = 0;
  std::string worst_parameter;
  std::int64_t worst_coord = -1;
};

// Compares the analytic gradients already accumulated in each parameter's
// grad buffer against central finite differences of `f`, which must evaluate
// the same scalar the gradients were taken of. Relative error per coordinate
// is |a - n| / max(|a| + |n|, denominator_floor).
GradCheckReport gradient_check(const std::function<double()>& f,
                               std::span<Parameter* const> params,
                               const GradCheckOptions& options = {});

}  // namespace transkb
