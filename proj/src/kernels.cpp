#include "transkb/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace transkb {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw DimensionError(message);
}

}  // namespace

Tensor dense_forward(const Tensor& x, const Parameter& w, const Parameter& b) {
  require(x.rank() == 1 && w.value.rank() == 2 && b.value.rank() == 1,
          "dense_forward expects x rank 1, W rank 2, b rank 1");
  std::int64_t out = w.value.dim(0);
  std::int64_t in = w.value.dim(1);
  require(x.dim(0) == in && b.value.dim(0) == out,
          "dense_forward shape mismatch: W " + w.value.shape_string() + " vs x " +
              x.shape_string() + ", b " + b.value.shape_string());
  Tensor y({out});
  const real* wp = w.value.data();
  const real* xp = x.data();
  for (std::int64_t i = 0; i < out; ++i) {
    real acc = b.value[i];
    const real* row = wp + i * in;
    for (std::int64_t j = 0; j < in; ++j) acc += row[j] * xp[j];
    y[i] = acc;
  }
  return y;
}

Tensor dense_backward(const Tensor& grad_out, const Tensor& x, Parameter& w, Parameter& b) {
  std::int64_t out = w.value.dim(0);
  std::int64_t in = w.value.dim(1);
  require(grad_out.rank() == 1 && grad_out.dim(0) == out && x.dim(0) == in,
          "dense_backward shape mismatch: grad " + grad_out.shape_string() + " vs W " +
              w.value.shape_string());
  Tensor grad_x({in});
  const real* gp = grad_out.data();
  const real* xp = x.data();
  real* wg = w.grad.data();
  for (std::int64_t i = 0; i < out; ++i) {
    real g = gp[i];
    b.grad[i] += g;
    real* wrow = wg + i * in;
    const real* vrow = w.value.data() + i * in;
    for (std::int64_t j = 0; j < in; ++j) {
      wrow[j] += g * xp[j];
      grad_x[j] += g * vrow[j];
    }
  }
  return grad_x;
}

Tensor relu(const Tensor& x) {
  Tensor y = x;
  for (real& v : y.values()) v = v > 0 ? v : 0;
  return y;
}

Tensor relu_backward(const Tensor& grad_out, const Tensor& x) {
  require(grad_out.same_shape(x), "relu_backward shape mismatch: " + grad_out.shape_string() +
                                      " vs " + x.shape_string());
  Tensor grad_x(x.shape());
  for (std::int64_t i = 0; i < x.size(); ++i) {
    grad_x[i] = x[i] > 0 ? grad_out[i] : 0;
  }
  return grad_x;
}

namespace {

struct ConvGeometry {
  std::int64_t c_out, c_in, kh, kw;
  std::int64_t h, len;
  std::int64_t out_h, out_len;
  std::int64_t pad_left;
};

ConvGeometry conv_geometry(const Tensor& input, const Tensor& kernel, std::int64_t stride,
                           PadMode pad) {
  require(input.rank() == 3, "conv_seq expects input of shape (channels, h, L), got " +
                                 input.shape_string());
  require(kernel.rank() == 4,
          "conv_seq expects kernel of shape (c_out, c_in, kh, kw), got " + kernel.shape_string());
  require(stride >= 1, "conv_seq stride must be >= 1");
  ConvGeometry g;
  g.c_out = kernel.dim(0);
  g.c_in = kernel.dim(1);
  g.kh = kernel.dim(2);
  g.kw = kernel.dim(3);
  g.h = input.dim(1);
  g.len = input.dim(2);
  require(input.dim(0) == g.c_in, "conv_seq channel mismatch: input " + input.shape_string() +
                                      " vs kernel " + kernel.shape_string());
  if (g.kh > g.h) {
    throw DimensionError("conv_seq kernel height " + std::to_string(g.kh) +
                         " larger than input height " + std::to_string(g.h));
  }
  g.out_h = g.h - g.kh + 1;
  if (pad == PadMode::valid) {
    if (g.kw > g.len) {
      throw DimensionError("conv_seq kernel width " + std::to_string(g.kw) +
                           " larger than unpadded input length " + std::to_string(g.len));
    }
    g.out_len = (g.len - g.kw) / stride + 1;
    g.pad_left = 0;
  } else {
    g.out_len = (g.len + stride - 1) / stride;
    std::int64_t pad_total = std::max<std::int64_t>((g.out_len - 1) * stride + g.kw - g.len, 0);
    g.pad_left = pad_total / 2;
  }
  return g;
}

}  // namespace

Tensor conv_seq_forward(const Tensor& input, const Parameter& kernel, std::int64_t stride,
                        PadMode pad) {
  ConvGeometry g = conv_geometry(input, kernel.value, stride, pad);
  Tensor out({g.c_out, g.out_h, g.out_len});
  const real* kp = kernel.value.data();
  for (std::int64_t oc = 0; oc < g.c_out; ++oc) {
    for (std::int64_t oy = 0; oy < g.out_h; ++oy) {
      for (std::int64_t ox = 0; ox < g.out_len; ++ox) {
        real acc = 0;
        std::int64_t base = ox * stride - g.pad_left;
        for (std::int64_t ic = 0; ic < g.c_in; ++ic) {
          const real* krow = kp + ((oc * g.c_in + ic) * g.kh) * g.kw;
          for (std::int64_t ky = 0; ky < g.kh; ++ky) {
            for (std::int64_t kx = 0; kx < g.kw; ++kx) {
              std::int64_t ix = base + kx;
              if (ix < 0 || ix >= g.len) continue;
              acc += input.at(ic, oy + ky, ix) * krow[ky * g.kw + kx];
            }
          }
        }
        out.at(oc, oy, ox) = acc;
      }
    }
  }
  return out;
}

Tensor conv_seq_backward(const Tensor& grad_out, const Tensor& input, Parameter& kernel,
                         std::int64_t stride, PadMode pad) {
  ConvGeometry g = conv_geometry(input, kernel.value, stride, pad);
  require(grad_out.rank() == 3 && grad_out.dim(0) == g.c_out && grad_out.dim(1) == g.out_h &&
              grad_out.dim(2) == g.out_len,
          "conv_seq_backward grad shape " + grad_out.shape_string() + " does not match output");
  Tensor grad_input(input.shape());
  const real* kp = kernel.value.data();
  real* kg = kernel.grad.data();
  for (std::int64_t oc = 0; oc < g.c_out; ++oc) {
    for (std::int64_t oy = 0; oy < g.out_h; ++oy) {
      for (std::int64_t ox = 0; ox < g.out_len; ++ox) {
        real go = grad_out.at(oc, oy, ox);
        if (go == 0) continue;
        std::int64_t base = ox * stride - g.pad_left;
        for (std::int64_t ic = 0; ic < g.c_in; ++ic) {
          std::int64_t koff = ((oc * g.c_in + ic) * g.kh) * g.kw;
          for (std::int64_t ky = 0; ky < g.kh; ++ky) {
            for (std::int64_t kx = 0; kx < g.kw; ++kx) {
              std::int64_t ix = base + kx;
              if (ix < 0 || ix >= g.len) continue;
              kg[koff + ky * g.kw + kx] += go * input.at(ic, oy + ky, ix);
              grad_input.at(ic, oy + ky, ix) += go * kp[koff + ky * g.kw + kx];
            }
          }
        }
      }
    }
  }
  return grad_input;
}

Tensor channel_bias_forward(const Tensor& input, const Parameter& b) {
  require(input.rank() == 3 && b.value.rank() == 1 && b.value.dim(0) == input.dim(0),
          "channel_bias shape mismatch: input " + input.shape_string() + " vs bias " +
              b.value.shape_string());
  Tensor out = input;
  std::int64_t plane = input.dim(1) * input.dim(2);
  for (std::int64_t c = 0; c < input.dim(0); ++c) {
    real bias = b.value[c];
    real* p = out.data() + c * plane;
    for (std::int64_t i = 0; i < plane; ++i) p[i] += bias;
  }
  return out;
}

Tensor channel_bias_backward(const Tensor& grad_out, Parameter& b) {
  require(grad_out.rank() == 3 && b.value.dim(0) == grad_out.dim(0),
          "channel_bias_backward shape mismatch");
  std::int64_t plane = grad_out.dim(1) * grad_out.dim(2);
  for (std::int64_t c = 0; c < grad_out.dim(0); ++c) {
    const real* p = grad_out.data() + c * plane;
    real acc = 0;
    for (std::int64_t i = 0; i < plane; ++i) acc += p[i];
    b.grad[c] += acc;
  }
  return grad_out;
}

MaxPoolResult maxpool_seq(const Tensor& input, std::int64_t width, std::int64_t stride) {
  require(input.rank() == 3, "maxpool_seq expects input of shape (c, h, L), got " +
                                 input.shape_string());
  require(width >= 1 && stride >= 1, "maxpool_seq width and stride must be >= 1");
  std::int64_t c = input.dim(0), h = input.dim(1), len = input.dim(2);
  // Right zero-padding guarantees at least one window for very short inputs.
  std::int64_t out_len = len < width ? 1 : (len - width) / stride + 1;
  MaxPoolResult result;
  result.output = Tensor({c, h, out_len});
  result.argmax.assign(static_cast<std::size_t>(c * h * out_len), -1);
  std::int64_t flat = 0;
  for (std::int64_t ic = 0; ic < c; ++ic) {
    for (std::int64_t iy = 0; iy < h; ++iy) {
      for (std::int64_t ox = 0; ox < out_len; ++ox, ++flat) {
        std::int64_t start = ox * stride;
        real best = -std::numeric_limits<real>::infinity();
        std::int64_t best_pos = -1;
        for (std::int64_t k = 0; k < width; ++k) {
          std::int64_t pos = start + k;
          real v = pos < len ? input.at(ic, iy, pos) : 0;
          if (v > best) {
            best = v;
            best_pos = pos < len ? (ic * h + iy) * len + pos : -1;
          }
        }
        result.output.at(ic, iy, ox) = best;
        result.argmax[static_cast<std::size_t>(flat)] = best_pos;
      }
    }
  }
  return result;
}

Tensor maxpool_backward(const Tensor& grad_out, const MaxPoolResult& cached,
                        const std::vector<std::int64_t>& input_shape) {
  require(grad_out.same_shape(cached.output),
          "maxpool_backward grad shape " + grad_out.shape_string() + " does not match output");
  Tensor grad_input(input_shape);
  for (std::int64_t i = 0; i < grad_out.size(); ++i) {
    std::int64_t pos = cached.argmax[static_cast<std::size_t>(i)];
    if (pos >= 0) grad_input[pos] += grad_out[i];
  }
  return grad_input;
}

Tensor l2norm_layer_forward(const Tensor& x, const Parameter& w, const Parameter& b) {
  Tensor u = dense_forward(x, w, b);
  real nrm = l2_norm(u.values());
  if (!(nrm > kNormEpsilon)) {
    throw NumericError("degenerate normalization input: ||Wx+b|| = " + std::to_string(nrm));
  }
  for (real& v : u.values()) v /= nrm;
  return u;
}

Tensor l2norm_layer_backward(const Tensor& grad_out, const Tensor& x, Parameter& w,
                             Parameter& b) {
  Tensor u = dense_forward(x, w, b);
  real nrm = l2_norm(u.values());
  if (!(nrm > kNormEpsilon)) {
    throw NumericError("degenerate normalization input: ||Wx+b|| = " + std::to_string(nrm));
  }
  std::int64_t n = u.dim(0);
  Tensor e = u;
  for (real& v : e.values()) v /= nrm;
  real dot = 0;
  for (std::int64_t i = 0; i < n; ++i) dot += e[i] * grad_out[i];
  Tensor grad_u({n});
  for (std::int64_t i = 0; i < n; ++i) grad_u[i] = (grad_out[i] - e[i] * dot) / nrm;
  return dense_backward(grad_u, x, w, b);
}

GradCheckReport gradient_check(const std::function<double()>& f,
                               std::span<Parameter* const> params,
                               const GradCheckOptions& options) {
  GradCheckReport report;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Parameter& p = *params[pi];
    for (std::int64_t i = 0; i < p.value.size(); ++i) {
      if (options.exclude && options.exclude(pi, i)) {
        ++report.coords_skipped;
        continue;
      }
      real saved = p.value[i];
      p.value[i] = saved + static_cast<real>(options.step);
      double f_plus = f();
      p.value[i] = saved - static_cast<real>(options.step);
      double f_minus = f();
      p.value[i] = saved;
      double numeric = (f_plus - f_minus) / (2.0 * options.step);
      double analytic = static_cast<double>(p.grad[i]);
      double denom = std::max(std::abs(analytic) + std::abs(numeric),
                              options.denominator_floor);
      double rel = std::abs(analytic - numeric) / denom;
      ++report.coords_checked;
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_parameter = p.name;
        report.worst_coord = i;
      }
    }
  }
  return report;
}

}  // namespace transkb
