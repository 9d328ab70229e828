#pragma once

// Scalar-loop transcriptions of the layer formulas, written independently
// of the Eigen expressions under test.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// column i = sum_j softmax_j(x_i^T Q^T K x_j / sqrt(d/M)) V x_j
inline Mat attentionLoop(const Mat& x, const Mat& q, const Mat& k, const Mat& v, int heads) {
  const int d = static_cast<int>(x.rows()), n = static_cast<int>(x.cols());
  const double temperature = std::sqrt(static_cast<double>(d) / heads);
  auto apply = [](const Mat& w, const Mat& x, int col) {
    std::vector<double> out(w.rows(), 0.0);
    for (int r = 0; r < w.rows(); ++r)
      for (int c = 0; c < w.cols(); ++c) out[r] += w(r, c) * x(c, col);
    return out;
  };
  Mat out = Mat::Zero(v.rows(), n);
  for (int i = 0; i < n; ++i) {
    const auto qi = apply(q, x, i);
    std::vector<double> logits(n);
    for (int j = 0; j < n; ++j) {
      const auto kj = apply(k, x, j);
      double dot = 0.0;
      for (int r = 0; r < d; ++r) dot += qi[r] * kj[r];
      logits[j] = dot / temperature;
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    double norm = 0.0;
    for (double& l : logits) norm += (l = std::exp(l - top));
    for (int j = 0; j < n; ++j) {
      const auto vj = apply(v, x, j);
      for (int r = 0; r < v.rows(); ++r) out(r, i) += logits[j] / norm * vj[r];
    }
  }
  return out;
}

inline Mat multiHeadLoop(const Mat& x, const std::vector<Mat>& q, const std::vector<Mat>& k, const std::vector<Mat>& v,
                         const Mat& wo) {
  const int heads = static_cast<int>(q.size());
  std::vector<Mat> parts;
  int rows = 0;
  for (int m = 0; m < heads; ++m) {
    parts.push_back(attentionLoop(x, q[m], k[m], v[m], heads));
    rows += static_cast<int>(parts.back().rows());
  }
  Mat out = Mat::Zero(wo.rows(), x.cols());
  for (int i = 0; i < x.cols(); ++i) {
    std::vector<double> concat;
    for (const auto& p : parts)
      for (int r = 0; r < p.rows(); ++r) concat.push_back(p(r, i));
    for (int r = 0; r < wo.rows(); ++r)
      for (int c = 0; c < rows; ++c) out(r, i) += wo(r, c) * concat[c];
  }
  return out;
}

inline Vec layerNormLoop(const Vec& x, const Vec& gamma, const Vec& beta, double eps) {
  const int n = static_cast<int>(x.size());
  double mean = 0.0;
  for (int i = 0; i < n; ++i) mean += x(i);
  mean /= n;
  double var = 0.0;
  for (int i = 0; i < n; ++i) var += (x(i) - mean) * (x(i) - mean);
  const double sd = std::sqrt(var / n);
  Vec out(n);
  for (int i = 0; i < n; ++i) out(i) = (x(i) - mean) / (sd + eps) * gamma(i) + beta(i);
  return out;
}

// Each row normalized across the columns.
inline Mat batchNormLoop(const Mat& x, const Vec& gamma, const Vec& beta, double eps) {
  Mat out(x.rows(), x.cols());
  for (int r = 0; r < x.rows(); ++r) {
    const Vec row = x.row(r).transpose();
    const Vec g = Vec::Constant(row.size(), gamma(r)), b = Vec::Constant(row.size(), beta(r));
    out.row(r) = layerNormLoop(row, g, b, eps).transpose();
  }
  return out;
}

inline Mat mlpLoop(const Mat& x, const Mat& w1, const Vec& b1, const Mat& w2, const Vec& b2) {
  Mat out(w2.rows(), x.cols());
  for (int i = 0; i < x.cols(); ++i) {
    std::vector<double> h(w1.rows());
    for (int r = 0; r < w1.rows(); ++r) {
      double acc = b1(r);
      for (int c = 0; c < w1.cols(); ++c) acc += w1(r, c) * x(c, i);
      h[r] = acc > 0.0 ? acc : 0.0;
    }
    for (int r = 0; r < w2.rows(); ++r) {
      double acc = b2(r);
      for (int c = 0; c < w2.cols(); ++c) acc += w2(r, c) * h[c];
      out(r, i) = acc;
    }
  }
  return out;
}

// y: C x (H*W), weights[(dy+k)(2k+1)+(dx+k)](i, c); ReLU on inputs, zero padding.
inline Mat convLoop(const Mat& y, int height, int width, int k, const std::vector<Mat>& taps, const Vec& bias) {
  const int inC = static_cast<int>(y.rows()), outC = static_cast<int>(bias.size()), side = 2 * k + 1;
  Mat out(outC, height * width);
  for (int i = 0; i < outC; ++i)
    for (int r = 0; r < height; ++r)
      for (int col = 0; col < width; ++col) {
        double acc = bias(i);
        for (int c = 0; c < inC; ++c)
          for (int dy = -k; dy <= k; ++dy)
            for (int dx = -k; dx <= k; ++dx) {
              const int sr = r + dy, sc = col + dx;
              if (sr < 0 || sr >= height || sc < 0 || sc >= width) continue;
              const double v = y(c, sr * width + sc);
              acc += taps[(dy + k) * side + (dx + k)](i, c) * (v > 0.0 ? v : 0.0);
            }
        out(i, r * width + col) = acc;
      }
  return out;
}

// Atoms are columns. Gamma_mu(x) = sum_j e^{x^T A^T y_j} V y_j / sum_j e^{x^T A^T y_j}.
inline Mat meanFieldAttentionLoop(const Mat& atoms, const Mat& a, const Mat& v) {
  const int d = static_cast<int>(atoms.rows()), n = static_cast<int>(atoms.cols());
  Mat out = Mat::Zero(v.rows(), n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j) {
      double e = 0.0;
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) e += atoms(r, i) * a(c, r) * atoms(c, j);
      w[j] = e;
    }
    const double top = *std::max_element(w.begin(), w.end());
    double norm = 0.0;
    for (double& e : w) norm += (e = std::exp(e - top));
    for (int j = 0; j < n; ++j)
      for (int r = 0; r < v.rows(); ++r)
        for (int c = 0; c < d; ++c) out(r, i) += w[j] / norm * v(r, c) * atoms(c, j);
  }
  return out;
}

// Every output atom = (1/n) sum_j sum_b W_b y_j(a + b) + bias, zero padded.
inline Mat meanFieldConvLoop(const Mat& atoms, const Mat& filter, double bias, int height, int width) {
  const int n = static_cast<int>(atoms.cols()), k = static_cast<int>(filter.rows()) / 2;
  Vec response(height * width);
  for (int r = 0; r < height; ++r)
    for (int col = 0; col < width; ++col) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j)
        for (int dy = -k; dy <= k; ++dy)
          for (int dx = -k; dx <= k; ++dx) {
            const int sr = r + dy, sc = col + dx;
            if (sr < 0 || sr >= height || sc < 0 || sc >= width) continue;
            acc += filter(dy + k, dx + k) * atoms(sr * width + sc, j);
          }
      response(r * width + col) = acc / n + bias;
    }
  Mat out(height * width, n);
  for (int j = 0; j < n; ++j) out.col(j) = response;
  return out;
}

}  // namespace oracle
