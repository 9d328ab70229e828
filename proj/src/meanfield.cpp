#include "topolip/meanfield.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "topolip/diagram_metrics.hpp"
#include "topolip/error.hpp"
#include "topolip/parallel.hpp"

namespace topolip::meanfield {

EmpiricalMeasure meanFieldAttentionMap(const EmpiricalMeasure& mu, const Eigen::MatrixXd& a, const Eigen::MatrixXd& v) {
  const Eigen::Index d = mu.dim();
  if (a.rows() != d || a.cols() != d || v.cols() != d)
    throw UsageError("mean-field attention: A must be d x d and V must have d columns");
  const Eigen::MatrixXd& x = mu.atoms;
  // logits(i, j) = x_i^T A^T y_j
  const Eigen::MatrixXd logits = (a * x).transpose() * x;
  const Eigen::MatrixXd weights = layers::softmaxRows(logits);
  return {v * x * weights.transpose()};
}

EmpiricalMeasure meanFieldConvMap(const EmpiricalMeasure& mu, const Eigen::MatrixXd& filter, double bias,
                                  Eigen::Index height, Eigen::Index width) {
  if (mu.dim() != height * width)
    throw UsageError("mean-field convolution: atom length " + std::to_string(mu.dim()) + " != " +
                     std::to_string(height) + "x" + std::to_string(width));
  if (filter.rows() != filter.cols() || filter.rows() % 2 != 1)
    throw UsageError("mean-field convolution: filter must be (2k+1) x (2k+1)");
  const Eigen::Index k = filter.rows() / 2;

  // The response is linear in the atom, so averaging atoms first is exact.
  const Eigen::VectorXd mean = mu.atoms.rowwise().mean();
  Eigen::VectorXd response = Eigen::VectorXd::Constant(height * width, bias);
  for (Eigen::Index r = 0; r < height; ++r) {
    for (Eigen::Index c = 0; c < width; ++c) {
      double acc = 0.0;
      for (Eigen::Index dy = -k; dy <= k; ++dy) {
        const Eigen::Index sr = r + dy;
        if (sr < 0 || sr >= height) continue;
        for (Eigen::Index dx = -k; dx <= k; ++dx) {
          const Eigen::Index sc = c + dx;
          if (sc < 0 || sc >= width) continue;
          acc += filter(dy + k, dx + k) * mean(sr * width + sc);
        }
      }
      response(r * width + c) += acc;
    }
  }
  return {response.replicate(1, mu.size())};
}

std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t stream, std::uint64_t attempt) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(stream), hi(stream), lo(attempt), hi(attempt)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

namespace {

constexpr int kMaxRejections = 100000;

EmpiricalMeasure sampleMeasure(Eigen::Index d, Eigen::Index n, double sigma, double t, Support support,
                               std::mt19937_64& rng) {
  EmpiricalMeasure mu{Eigen::MatrixXd::Zero(d, n)};
  if (sigma == 0.0) return mu;
  std::normal_distribution<double> normal(0.0, sigma);
  const double radius = t * sigma;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (support == Support::Box) {
      for (Eigen::Index i = 0; i < d; ++i) {
        int tries = 0;
        double value;
        do {
          if (++tries > kMaxRejections) throw ParameterError("box t*sigma too small to sample from");
          value = normal(rng);
        } while (std::abs(value) > radius);
        mu.atoms(i, j) = value;
      }
    } else {
      int tries = 0;
      do {
        if (++tries > kMaxRejections) throw ParameterError("ball radius t*sigma too small to sample from");
        for (Eigen::Index i = 0; i < d; ++i) mu.atoms(i, j) = normal(rng);
      } while (mu.atoms.col(j).norm() > radius);
    }
  }
  return mu;
}

Eigen::MatrixXd gaussianMatrix(Eigen::Index rows, Eigen::Index cols, double stddev, std::mt19937_64& rng) {
  Eigen::MatrixXd m(rows, cols);
  if (stddev == 0.0) return m.setZero();
  std::normal_distribution<double> normal(0.0, stddev);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

}  // namespace

std::pair<EmpiricalMeasure, EmpiricalMeasure> sampleMeasurePair(Eigen::Index d, Eigen::Index n, double sigma, double t,
                                                                std::uint64_t seed, Support support) {
  if (d < 1 || n < 1) throw ParameterError("measure sampling needs d >= 1 and n >= 1");
  if (sigma < 0.0) throw ParameterError("sigma must be non-negative");
  if (sigma > 0.0 && !(t > 0.0)) throw ParameterError("t must be positive");
  std::mt19937_64 rng(seed);
  auto mu = sampleMeasure(d, n, sigma, t, support, rng);
  auto nu = sampleMeasure(d, n, sigma, t, support, rng);
  return {std::move(mu), std::move(nu)};
}

layers::AttnWeights<double> sampleAttnWeights(Eigen::Index d, Eigen::Index heads, double sigma, std::mt19937_64& rng) {
  if (d < 1 || heads < 1 || sigma < 0.0) throw ParameterError("attention weights need d, M >= 1 and sigma >= 0");
  layers::AttnWeights<double> w;
  for (Eigen::Index m = 0; m < heads; ++m) {
    layers::AttentionHead<double> head;
    head.query = gaussianMatrix(d, d, sigma, rng);
    head.key = gaussianMatrix(d, d, sigma, rng);
    head.value = gaussianMatrix(d, d, sigma, rng);
    w.heads.push_back(std::move(head));
  }
  w.output = gaussianMatrix(d, heads * d, sigma, rng);
  return w;
}

layers::ConvWeights<double> sampleConvWeights(Eigen::Index channels, Eigen::Index halfWidth, double sigma,
                                              std::mt19937_64& rng) {
  if (channels < 1 || halfWidth < 0 || sigma < 0.0) throw ParameterError("conv weights need C >= 1, k >= 0, sigma >= 0");
  auto w = layers::ConvWeights<double>::zero(channels, halfWidth);
  const double side = static_cast<double>(w.side());
  const double stddev = sigma / std::sqrt(static_cast<double>(channels) * side * side);
  for (auto& tap : w.taps) tap = gaussianMatrix(channels, channels, stddev, rng);
  return w;
}

LipschitzEstimate estimateLipschitzW1(const MeasureMap& map, const MeasureSampler& sampler, std::size_t numPairs,
                                      std::uint64_t seed) {
  if (numPairs < 1) throw ParameterError("numPairs must be at least 1");
  constexpr int kMaxAttempts = 64;
  LipschitzEstimate est;
  est.ratios.resize(numPairs);
  parallelFor(numPairs, [&](std::size_t i) {
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxAttempts)
        throw ParameterError("sampler keeps producing coincident measures (W1 < 1e-12)");
      const auto [mu, nu] = sampler(deriveSeed(seed, i, static_cast<std::uint64_t>(attempt)));
      const double input = cloudWasserstein(mu.cloud(), nu.cloud(), 1.0);
      if (input < 1e-12) continue;
      const auto fmu = map(mu);
      const auto fnu = map(nu);
      if (fmu.size() != fnu.size() || fmu.dim() != fnu.dim())
        throw UsageError("map produced measures of different shapes (" + std::to_string(fmu.size()) + " vs " +
                         std::to_string(fnu.size()) + " atoms)");
      est.ratios[i] = cloudWasserstein(fmu.cloud(), fnu.cloud(), 1.0) / input;
      return;
    }
  });
  est.supRatio = *std::max_element(est.ratios.begin(), est.ratios.end());
  return est;
}

BoundCheck checkAttentionBound(const bounds::AttnParams& params, Eigen::Index atoms, std::size_t numPairs,
                               std::uint64_t seed) {
  BoundCheck check;
  check.bound = bounds::attnSingleHeadBound(params);
  check.probability = bounds::attnProbability(params);
  check.warnings = bounds::attnWarnings(params);

  const auto d = static_cast<Eigen::Index>(params.d);
  std::mt19937_64 rng(deriveSeed(seed, 0xA77E));
  const auto weights = sampleAttnWeights(d, 1, params.sigma, rng);
  const auto& head = weights.heads.front();
  const Eigen::MatrixXd a = head.key.transpose() * head.query / std::sqrt(static_cast<double>(d));
  const Eigen::MatrixXd v = head.value;

  auto estimate = estimateLipschitzW1(
      [&](const EmpiricalMeasure& mu) { return meanFieldAttentionMap(mu, a, v); },
      [&](std::uint64_t s) { return sampleMeasurePair(d, atoms, params.sigma, params.t, s, Support::Ball); }, numPairs,
      seed);
  check.supRatio = estimate.supRatio;
  check.ratios = std::move(estimate.ratios);
  return check;
}

BoundCheck checkConvBound(const bounds::ConvParams& params, Eigen::Index height, Eigen::Index width,
                          std::size_t numPairs, std::uint64_t seed) {
  BoundCheck check;
  check.bound = bounds::convBound(params);
  check.probability = bounds::convProbability(params);

  const auto channels = static_cast<Eigen::Index>(params.channels);
  const auto k = static_cast<Eigen::Index>(params.halfWidth);
  std::mt19937_64 rng(deriveSeed(seed, 0xC0DE));
  const Eigen::Index side = 2 * k + 1;
  const double stddev = params.sigma / std::sqrt(static_cast<double>(channels * side * side));
  Eigen::MatrixXd filter = gaussianMatrix(side, side, stddev, rng);

  auto estimate = estimateLipschitzW1(
      [&](const EmpiricalMeasure& mu) { return meanFieldConvMap(mu, filter, 0.0, height, width); },
      [&](std::uint64_t s) {
        return sampleMeasurePair(height * width, channels, params.sigma, params.t, s, Support::Box);
      },
      numPairs, seed);
  check.supRatio = estimate.supRatio;
  check.ratios = std::move(estimate.ratios);
  return check;
}

}  // namespace topolip::meanfield
