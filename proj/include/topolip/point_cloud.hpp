#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace topolip {

/// A finite set of points in R^m, one point per row.
///
/// Construction validates the invariants (n >= 1, m >= 1, all coordinates
/// finite), so any PointCloud in hand is usable by the TDA routines.
class PointCloud {
 public:
  explicit PointCloud(Eigen::MatrixXd points);
  /// Throws UsageError when the rows disagree in length.
  static PointCloud fromRows(const std::vector<std::vector<double>>& rows);

  const Eigen::MatrixXd& points() const { return m_points; }
  Eigen::Index size() const { return m_points.rows(); }
  Eigen::Index dim() const { return m_points.cols(); }
  auto point(Eigen::Index i) const { return m_points.row(i); }

  bool operator==(const PointCloud& other) const { return m_points == other.m_points; }

 private:
  Eigen::MatrixXd m_points;
};

/// Symmetric matrix of pairwise Euclidean distances.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(Eigen::MatrixXd entries);

  const Eigen::MatrixXd& entries() const { return m_entries; }
  Eigen::Index size() const { return m_entries.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_entries(i, j); }
  double maxEntry() const { return m_entries.size() == 0 ? 0.0 : m_entries.maxCoeff(); }

 private:
  Eigen::MatrixXd m_entries;
};

DistanceMatrix pairwiseDistances(const PointCloud& cloud);

/// Uniform random subset of at most maxPoints rows, in original row order.
/// Returns the cloud unchanged when it already fits.
PointCloud subsampleCloud(const PointCloud& cloud, Eigen::Index maxPoints, std::uint64_t seed);

}  // namespace topolip
