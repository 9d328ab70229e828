#pragma once

#include <span>
#include <vector>

#include "topolip/persistence.hpp"
#include "topolip/point_cloud.hpp"

namespace topolip {

/// Norm on R^2 used between diagram points.
enum class GroundNorm { LInf, L2 };

enum class DistanceKind { Diagram, Cloud };

struct DistanceValue {
  double value = 0.0;
  double p = 1.0;  ///< +inf for bottleneck
  DistanceKind kind = DistanceKind::Diagram;

  operator double() const { return value; }
};

/// Cost of sending (birth, death) to its diagonal projection ((b+d)/2, (b+d)/2).
double diagonalDistance(const PersistencePair& point, GroundNorm norm = GroundNorm::LInf);
double pointDistance(const PersistencePair& a, const PersistencePair& b, GroundNorm norm = GroundNorm::LInf);

/// p-Wasserstein distance between two diagrams of the same dimension, p >= 1.
/// Each diagram is augmented with the diagonal projections of the other's
/// points and the resulting square assignment problem is solved exactly.
/// Diagrams must not contain essential pairs (see finitePart).
DistanceValue diagramWasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b, double p,
                                 GroundNorm norm = GroundNorm::LInf);

/// Bottleneck (p = inf) distance between two diagrams of the same dimension.
DistanceValue bottleneckDistance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                 GroundNorm norm = GroundNorm::LInf);

/// p-Wasserstein distance between equal-size uniform empirical measures with
/// a Euclidean ground metric: (min over permutations of mean |x_i - y_pi(i)|^p)^(1/p).
DistanceValue cloudWasserstein(const PointCloud& mu, const PointCloud& nu, double p);

/// How per-dimension diagram distances are folded into one number.
enum class DimensionCombine { Sum, Max };

struct DiagramDistanceOptions {
  double p = 1.0;  ///< +inf selects the bottleneck distance
  GroundNorm norm = GroundNorm::LInf;
  EssentialPolicy essential = EssentialPolicy::Drop;
  DimensionCombine combine = DimensionCombine::Sum;
};

/// Distance between two diagram sets (index = homology dimension): essential
/// classes handled per policy, then per-dimension distances combined.
double combinedDiagramDistance(std::span<const PersistenceDiagram> a, std::span<const PersistenceDiagram> b,
                               const DiagramDistanceOptions& options);

}  // namespace topolip
