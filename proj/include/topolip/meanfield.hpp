#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "topolip/bounds.hpp"
#include "topolip/layers.hpp"
#include "topolip/point_cloud.hpp"

namespace topolip::meanfield {

/// Uniform empirical measure; atoms are the columns (d x n).
struct EmpiricalMeasure {
  Eigen::MatrixXd atoms;

  Eigen::Index size() const { return atoms.cols(); }
  Eigen::Index dim() const { return atoms.rows(); }
  /// Rows = atoms, for the Wasserstein routines.
  PointCloud cloud() const { return PointCloud(atoms.transpose()); }
};

/// Pushforward of mu through Gamma_mu(x) = sum_j e^{x^T A^T y_j} V y_j / sum_j e^{x^T A^T y_j}.
EmpiricalMeasure meanFieldAttentionMap(const EmpiricalMeasure& mu, const Eigen::MatrixXd& a, const Eigen::MatrixXd& v);

/// Linear (ReLU-free) mean-field convolution. Atoms are channel responses
/// over a height x width grid (flattened row-major). Every atom is sent to
/// the average over atoms of sum_b W_b y(a + b), plus bias, zero padded.
/// filter is (2k+1) x (2k+1).
EmpiricalMeasure meanFieldConvMap(const EmpiricalMeasure& mu, const Eigen::MatrixXd& filter, double bias,
                                  Eigen::Index height, Eigen::Index width);

/// Support certificate enforced by rejection sampling.
enum class Support {
  Ball,  ///< |x| <= t sigma
  Box,   ///< |x_i| <= t sigma for every coordinate
};

/// Two independent n-atom measures with N(0, sigma^2) coordinates restricted
/// to the support. Deterministic per seed.
std::pair<EmpiricalMeasure, EmpiricalMeasure> sampleMeasurePair(Eigen::Index d, Eigen::Index n, double sigma, double t,
                                                                std::uint64_t seed, Support support = Support::Ball);

/// Q, K, V, W^O entries ~ N(0, sigma^2).
layers::AttnWeights<double> sampleAttnWeights(Eigen::Index d, Eigen::Index heads, double sigma, std::mt19937_64& rng);
/// Entries ~ N(0, sigma^2 / (C (2k+1)^2)), zero bias.
layers::ConvWeights<double> sampleConvWeights(Eigen::Index channels, Eigen::Index halfWidth, double sigma,
                                              std::mt19937_64& rng);

using MeasureMap = std::function<EmpiricalMeasure(const EmpiricalMeasure&)>;
using MeasureSampler = std::function<std::pair<EmpiricalMeasure, EmpiricalMeasure>(std::uint64_t seed)>;

struct LipschitzEstimate {
  double supRatio = 0.0;
  std::vector<double> ratios;  ///< W1(F mu, F nu) / W1(mu, nu), in pair order
};

/// Monte-Carlo lower estimate of the W1-Lipschitz constant of map. Pair i is
/// drawn from a seed derived from (seed, i); pairs with W1(mu, nu) < 1e-12
/// are redrawn. Pairs are evaluated in parallel, results reduced in order.
LipschitzEstimate estimateLipschitzW1(const MeasureMap& map, const MeasureSampler& sampler, std::size_t numPairs,
                                      std::uint64_t seed);

/// Deterministic child seed for stream index.
std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t stream, std::uint64_t attempt = 0);

/// Empirical estimate next to the theoretical bound at matching parameters.
struct BoundCheck {
  double supRatio = 0.0;
  double bound = 0.0;
  double probability = 0.0;
  std::vector<double> ratios;
  std::vector<std::string> warnings;

  bool withinBound() const { return supRatio <= bound; }
};

/// Single-head mean-field attention with (Q, K, V) sampled from seed,
/// A = K^T Q / sqrt(d), atoms in the ball of radius t sigma.
BoundCheck checkAttentionBound(const bounds::AttnParams& params, Eigen::Index atoms, std::size_t numPairs,
                               std::uint64_t seed);

/// Mean-field convolution with C channel atoms on a height x width grid,
/// entries bounded by t sigma, filter sampled from seed.
BoundCheck checkConvBound(const bounds::ConvParams& params, Eigen::Index height, Eigen::Index width,
                          std::size_t numPairs, std::uint64_t seed);

}  // namespace topolip::meanfield
