#include "topolip/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "topolip/error.hpp"

namespace topolip {

PointCloud::PointCloud(Eigen::MatrixXd points) : m_points(std::move(points)) {
  if (m_points.rows() < 1) throw UsageError("point cloud must contain at least one point");
  if (m_points.cols() < 1) throw UsageError("point cloud dimension must be at least 1");
  if (!m_points.allFinite()) throw UsageError("point cloud contains non-finite coordinates");
}

PointCloud PointCloud::fromRows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw UsageError("point cloud must contain at least one point");
  const std::size_t m = rows.front().size();
  Eigen::MatrixXd points(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m)
      throw UsageError("dimension mismatch: point " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                       " coordinates, expected " + std::to_string(m));
    for (std::size_t j = 0; j < m; ++j) points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return PointCloud(std::move(points));
}

DistanceMatrix::DistanceMatrix(Eigen::MatrixXd entries) : m_entries(std::move(entries)) {
  if (m_entries.rows() != m_entries.cols()) throw UsageError("distance matrix must be square");
  if (!m_entries.allFinite() || (m_entries.array() < 0.0).any())
    throw UsageError("distance matrix entries must be finite and non-negative");
  if (m_entries != m_entries.transpose())
    throw UsageError("distance matrix must be symmetric");
  if ((m_entries.diagonal().array() != 0.0).any())
    throw UsageError("distance matrix must have a zero diagonal");
}

DistanceMatrix pairwiseDistances(const PointCloud& cloud) {
  const auto& x = cloud.points();
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = (x.row(i) - x.row(j)).norm();
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return DistanceMatrix(std::move(d));
}

PointCloud subsampleCloud(const PointCloud& cloud, Eigen::Index maxPoints, std::uint64_t seed) {
  if (maxPoints < 1) throw ParameterError("maxPoints must be at least 1, got " + std::to_string(maxPoints));
  const Eigen::Index n = cloud.size();
  if (n <= maxPoints) return cloud;

  // Partial Fisher-Yates: the first maxPoints slots hold a uniform subset.
  std::vector<Eigen::Index> index(static_cast<std::size_t>(n));
  std::iota(index.begin(), index.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  for (Eigen::Index i = 0; i < maxPoints; ++i) {
    std::uniform_int_distribution<Eigen::Index> pick(i, n - 1);
    std::swap(index[static_cast<std::size_t>(i)], index[static_cast<std::size_t>(pick(rng))]);
  }
  index.resize(static_cast<std::size_t>(maxPoints));
  std::sort(index.begin(), index.end());

  Eigen::MatrixXd out(maxPoints, cloud.dim());
  for (Eigen::Index r = 0; r < maxPoints; ++r) out.row(r) = cloud.point(index[static_cast<std::size_t>(r)]);
  return PointCloud(std::move(out));
}

}  // namespace topolip
