#pragma once

// Discrete attention / convolution building blocks on Eigen dense types.
// Tokens and feature positions are columns: a sequence is d x N, a feature
// map is C x (H*W) with row-major spatial indexing.

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "topolip/error.hpp"

namespace topolip::layers {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

namespace detail {

inline void expectShape(bool ok, const char* what) {
  if (!ok) throw UsageError(std::string("shape mismatch: ") + what);
}

}  // namespace detail

/// Softmax of every row, computed with the row maximum subtracted.
template <typename Derived>
Matrix<typename Derived::Scalar> softmaxRows(const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> out = (logits.colwise() - logits.rowwise().maxCoeff()).array().exp().matrix();
  out.array().colwise() /= out.rowwise().sum().array();
  return out;
}

template <typename Scalar>
struct AttentionHead {
  Matrix<Scalar> query, key, value;  // each d x d
};

template <typename Scalar>
struct AttnWeights {
  std::vector<AttentionHead<Scalar>> heads;
  Matrix<Scalar> output;  // W^O, d x (M d)

  Eigen::Index headCount() const { return static_cast<Eigen::Index>(heads.size()); }
};

/// Row-stochastic attention matrix P of one head: P(i, j) is the weight token
/// i puts on token j, softmax_j(x_i^T Q^T K x_j / sqrt(d/M)).
template <typename Derived>
Matrix<typename Derived::Scalar> attentionWeights(const Eigen::MatrixBase<Derived>& x,
                                                  const AttentionHead<typename Derived::Scalar>& head,
                                                  Eigen::Index headCount = 1) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index d = x.rows();
  detail::expectShape(head.query.rows() == d && head.query.cols() == d && head.key.rows() == d && head.key.cols() == d,
                      "attention Q and K must be d x d");
  detail::expectShape(headCount >= 1, "head count must be positive");
  const Scalar temperature = std::sqrt(static_cast<Scalar>(d) / static_cast<Scalar>(headCount));
  const Matrix<Scalar> logits = (head.query * x).transpose() * (head.key * x) / temperature;
  return softmaxRows(logits);
}

/// Output column i = sum_j P(i, j) V x_j.
template <typename Derived>
Matrix<typename Derived::Scalar> singleHeadAttention(const Eigen::MatrixBase<Derived>& x,
                                                     const AttentionHead<typename Derived::Scalar>& head,
                                                     Eigen::Index headCount = 1) {
  detail::expectShape(head.value.cols() == x.rows(), "attention V must have d columns");
  const auto weights = attentionWeights(x, head, headCount);
  return head.value * x * weights.transpose();
}

/// W^O applied to the per-token concatenation of all head outputs.
template <typename Derived>
Matrix<typename Derived::Scalar> multiHeadAttention(const Eigen::MatrixBase<Derived>& x,
                                                    const AttnWeights<typename Derived::Scalar>& weights) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index m = weights.headCount();
  detail::expectShape(m >= 1, "multi-head attention needs at least one head");
  std::vector<Matrix<Scalar>> outputs;
  Eigen::Index rows = 0;
  for (const auto& head : weights.heads) {
    outputs.push_back(singleHeadAttention(x, head, m));
    rows += outputs.back().rows();
  }
  Matrix<Scalar> stacked(rows, x.cols());
  Eigen::Index offset = 0;
  for (const auto& o : outputs) {
    stacked.middleRows(offset, o.rows()) = o;
    offset += o.rows();
  }
  detail::expectShape(weights.output.cols() == rows, "W^O must have M*d columns");
  return weights.output * stacked;
}

template <typename Scalar>
struct NormParams {
  Vector<Scalar> gamma, beta;
  Scalar eps = Scalar(1e-5);
};

/// (x - mean) / (std + eps) * gamma + beta, with the population std of x.
template <typename Derived>
Vector<typename Derived::Scalar> layerNorm(const Eigen::MatrixBase<Derived>& x, const NormParams<typename Derived::Scalar>& p) {
  using Scalar = typename Derived::Scalar;
  detail::expectShape(p.gamma.size() == x.size() && p.beta.size() == x.size(), "layer norm gamma/beta length");
  const Scalar mean = x.mean();
  const Vector<Scalar> centered = x.derived().array() - mean;
  const Scalar stddev = std::sqrt(centered.squaredNorm() / static_cast<Scalar>(x.size()));
  return (centered.array() / (stddev + p.eps) * p.gamma.array() + p.beta.array()).matrix();
}

/// Layer norm applied to every column (token).
template <typename Derived>
Matrix<typename Derived::Scalar> layerNormColumns(const Eigen::MatrixBase<Derived>& x,
                                                  const NormParams<typename Derived::Scalar>& p) {
  Matrix<typename Derived::Scalar> out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.cols(); ++i) out.col(i) = layerNorm(x.col(i), p);
  return out;
}

/// Batch norm across columns: every row (feature) is normalized by its mean
/// and population std over the batch, then scaled and shifted.
template <typename Derived>
Matrix<typename Derived::Scalar> batchNorm(const Eigen::MatrixBase<Derived>& x, const NormParams<typename Derived::Scalar>& p) {
  using Scalar = typename Derived::Scalar;
  detail::expectShape(p.gamma.size() == x.rows() && p.beta.size() == x.rows(), "batch norm gamma/beta length");
  const Vector<Scalar> mean = x.rowwise().mean();
  Matrix<Scalar> centered = x.colwise() - mean;
  const Vector<Scalar> stddev = (centered.rowwise().squaredNorm() / static_cast<Scalar>(x.cols())).cwiseSqrt();
  centered.array().colwise() *= (p.gamma.array() / (stddev.array() + p.eps));
  centered.colwise() += p.beta;
  return centered;
}

template <typename Scalar>
struct MlpWeights {
  Matrix<Scalar> w1;  // d' x d
  Matrix<Scalar> w2;  // d x d'
  Vector<Scalar> b1, b2;
};

/// W2 relu(W1 x + b1) + b2 on every column.
template <typename Derived>
Matrix<typename Derived::Scalar> mlp(const Eigen::MatrixBase<Derived>& x, const MlpWeights<typename Derived::Scalar>& w) {
  using Scalar = typename Derived::Scalar;
  detail::expectShape(w.w1.cols() == x.rows() && w.b1.size() == w.w1.rows(), "MLP first layer");
  detail::expectShape(w.w2.cols() == w.w1.rows() && w.b2.size() == w.w2.rows(), "MLP second layer");
  const Matrix<Scalar> hidden = ((w.w1 * x).colwise() + w.b1).cwiseMax(Scalar(0));
  return (w.w2 * hidden).colwise() + w.b2;
}

/// Pre-LN Transformer block: MLP(LN(X + A)) + A + X with A = MHAttn(LN(X)).
template <typename Derived>
Matrix<typename Derived::Scalar> preLNBlock(const Eigen::MatrixBase<Derived>& x,
                                            const AttnWeights<typename Derived::Scalar>& attn,
                                            const MlpWeights<typename Derived::Scalar>& ff,
                                            const NormParams<typename Derived::Scalar>& attnNorm,
                                            const NormParams<typename Derived::Scalar>& ffNorm) {
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> attended = multiHeadAttention(layerNormColumns(x, attnNorm), attn);
  const Matrix<Scalar> residual = x + attended;
  return mlp(layerNormColumns(residual, ffNorm), ff) + attended + x;
}

/// C x (H*W) feature map; column index = row * width + col.
template <typename Scalar>
struct FeatureMap {
  Eigen::Index height = 0, width = 0;
  Matrix<Scalar> data;

  Eigen::Index channels() const { return data.rows(); }
};

/// (2k+1)^2 taps, each C_out x C_in: taps[(dy+k)(2k+1) + (dx+k)](i, c) is the
/// weight from channel c to channel i at offset (dy, dx).
template <typename Scalar>
struct ConvWeights {
  Eigen::Index halfWidth = 0;
  std::vector<Matrix<Scalar>> taps;
  Vector<Scalar> bias;

  Eigen::Index side() const { return 2 * halfWidth + 1; }
  Matrix<Scalar>& tap(Eigen::Index dy, Eigen::Index dx) { return taps[(dy + halfWidth) * side() + dx + halfWidth]; }
  const Matrix<Scalar>& tap(Eigen::Index dy, Eigen::Index dx) const { return taps[(dy + halfWidth) * side() + dx + halfWidth]; }

  static ConvWeights zero(Eigen::Index channels, Eigen::Index halfWidth) {
    ConvWeights w;
    w.halfWidth = halfWidth;
    w.taps.assign(static_cast<std::size_t>(w.side() * w.side()), Matrix<Scalar>::Zero(channels, channels));
    w.bias = Vector<Scalar>::Zero(channels);
    return w;
  }
};

/// out_i(a) = sum_c sum_b W_{ci,b} relu(y_c(a + b)) + b_i, zero padded so the
/// spatial size is preserved.
template <typename Scalar>
FeatureMap<Scalar> convLayer(const FeatureMap<Scalar>& y, const ConvWeights<Scalar>& w) {
  const Eigen::Index k = w.halfWidth;
  if (k < 0 || k >= std::min(y.height, y.width))
    throw ParameterError("filter half-width " + std::to_string(k) + " too large for a " + std::to_string(y.height) +
                         "x" + std::to_string(y.width) + " input");
  detail::expectShape(static_cast<Eigen::Index>(w.taps.size()) == w.side() * w.side(), "conv tap count");
  detail::expectShape(y.data.cols() == y.height * y.width, "feature map size");
  const Eigen::Index outChannels = w.bias.size();
  for (const auto& tap : w.taps)
    detail::expectShape(tap.rows() == outChannels && tap.cols() == y.channels(), "conv tap shape");

  const Matrix<Scalar> activated = y.data.cwiseMax(Scalar(0));
  FeatureMap<Scalar> out{y.height, y.width, Matrix<Scalar>(outChannels, y.data.cols())};
  out.data.colwise() = w.bias;
  for (Eigen::Index dy = -k; dy <= k; ++dy) {
    for (Eigen::Index dx = -k; dx <= k; ++dx) {
      const auto& tap = w.tap(dy, dx);
      for (Eigen::Index r = 0; r < y.height; ++r) {
        const Eigen::Index sr = r + dy;
        if (sr < 0 || sr >= y.height) continue;
        for (Eigen::Index c = 0; c < y.width; ++c) {
          const Eigen::Index sc = c + dx;
          if (sc < 0 || sc >= y.width) continue;
          out.data.col(r * y.width + c).noalias() += tap * activated.col(sr * y.width + sc);
        }
      }
    }
  }
  return out;
}

/// Batch norm of a feature map, treating the H*W positions as the batch.
template <typename Scalar>
FeatureMap<Scalar> batchNorm(const FeatureMap<Scalar>& y, const NormParams<Scalar>& p) {
  return {y.height, y.width, batchNorm(y.data, p)};
}

/// X + Conv(BN(Conv(BN(Conv(BN(X)))))), stages applied in array order.
template <typename Scalar>
FeatureMap<Scalar> bottleneckBlock(const FeatureMap<Scalar>& x, const std::array<ConvWeights<Scalar>, 3>& convs,
                                   const std::array<NormParams<Scalar>, 3>& norms) {
  FeatureMap<Scalar> h = x;
  for (std::size_t stage = 0; stage < 3; ++stage) h = convLayer(batchNorm(h, norms[stage]), convs[stage]);
  detail::expectShape(h.data.rows() == x.data.rows(), "bottleneck must preserve the channel count");
  h.data += x.data;
  return h;
}

}  // namespace topolip::layers
