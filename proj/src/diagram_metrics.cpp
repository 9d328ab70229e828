#include "topolip/diagram_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "topolip/assignment.hpp"
#include "topolip/error.hpp"

namespace topolip {

double diagonalDistance(const PersistencePair& point, GroundNorm norm) {
  const double half = (point.death - point.birth) / 2.0;
  return norm == GroundNorm::LInf ? half : half * std::numbers::sqrt2;
}

double pointDistance(const PersistencePair& a, const PersistencePair& b, GroundNorm norm) {
  const double db = std::abs(a.birth - b.birth);
  const double dd = std::abs(a.death - b.death);
  return norm == GroundNorm::LInf ? std::max(db, dd) : std::hypot(db, dd);
}

namespace {

void checkComparable(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  if (a.homDim != b.homDim)
    throw UsageError("cannot compare diagrams of homology dimensions " + std::to_string(a.homDim) + " and " +
                     std::to_string(b.homDim));
  if (a.essentialCount() > 0 || b.essentialCount() > 0)
    throw UsageError("diagram contains essential pairs; drop or cap them before matching");
}

// Ground costs of the augmented problem. Rows: points of a, then diagonal
// slots standing for b's points. Columns: points of b, then diagonal slots
// standing for a's points. Any point may use any diagonal slot.
Eigen::MatrixXd augmentedCosts(const PersistenceDiagram& a, const PersistenceDiagram& b, GroundNorm norm) {
  const auto n1 = static_cast<Eigen::Index>(a.size());
  const auto n2 = static_cast<Eigen::Index>(b.size());
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
  for (Eigen::Index i = 0; i < n1; ++i) {
    const auto& pa = a.pairs[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n2; ++j) cost(i, j) = pointDistance(pa, b.pairs[static_cast<std::size_t>(j)], norm);
    cost.block(i, n2, 1, n1).setConstant(diagonalDistance(pa, norm));
  }
  for (Eigen::Index j = 0; j < n2; ++j)
    cost.block(n1, j, n2, 1).setConstant(diagonalDistance(b.pairs[static_cast<std::size_t>(j)], norm));
  return cost;
}

void checkExponent(double p) {
  if (!(p >= 1.0)) throw ParameterError("Wasserstein exponent must satisfy p >= 1, got " + std::to_string(p));
}

}  // namespace

DistanceValue diagramWasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b, double p, GroundNorm norm) {
  checkExponent(p);
  checkComparable(a, b);
  if (std::isinf(p)) return bottleneckDistance(a, b, norm);
  const Eigen::MatrixXd ground = augmentedCosts(a, b, norm);
  const Eigen::MatrixXd cost = ground.array().pow(p).matrix();
  const double total = assignmentCost(cost, solveAssignment(cost));
  return {std::pow(total, 1.0 / p), p, DistanceKind::Diagram};
}

DistanceValue bottleneckDistance(const PersistenceDiagram& a, const PersistenceDiagram& b, GroundNorm norm) {
  checkComparable(a, b);
  return {bottleneckAssignment(augmentedCosts(a, b, norm)), kInfinity, DistanceKind::Diagram};
}

DistanceValue cloudWasserstein(const PointCloud& mu, const PointCloud& nu, double p) {
  checkExponent(p);
  if (std::isinf(p)) throw ParameterError("cloudWasserstein requires a finite exponent");
  if (mu.size() != nu.size())
    throw UsageError("cloudWasserstein requires equal point counts, got " + std::to_string(mu.size()) + " and " +
                     std::to_string(nu.size()));
  if (mu.dim() != nu.dim())
    throw UsageError("cloudWasserstein requires equal dimensions, got " + std::to_string(mu.dim()) + " and " +
                     std::to_string(nu.dim()));
  const Eigen::Index n = mu.size();
  Eigen::MatrixXd cost(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) cost(i, j) = std::pow((mu.point(i) - nu.point(j)).norm(), p);
  const double total = assignmentCost(cost, solveAssignment(cost));
  return {std::pow(total / static_cast<double>(n), 1.0 / p), p, DistanceKind::Cloud};
}

double combinedDiagramDistance(std::span<const PersistenceDiagram> a, std::span<const PersistenceDiagram> b,
                               const DiagramDistanceOptions& options) {
  if (a.size() != b.size())
    throw UsageError("diagram sets cover different homology dimensions (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  double combined = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const auto fa = finitePart(a[k], options.essential);
    const auto fb = finitePart(b[k], options.essential);
    const double w = std::isinf(options.p) ? bottleneckDistance(fa, fb, options.norm).value
                                           : diagramWasserstein(fa, fb, options.p, options.norm).value;
    combined = options.combine == DimensionCombine::Sum ? combined + w : std::max(combined, w);
  }
  return combined;
}

}  // namespace topolip
