#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "topolip/point_cloud.hpp"

namespace topolip {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct PersistencePair {
  double birth = 0.0;
  double death = kInfinity;

  bool essential() const { return death == kInfinity; }
  double persistence() const { return death - birth; }
  friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
  friend auto operator<=>(const PersistencePair&, const PersistencePair&) = default;
};

/// Birth/death multiset for one homology dimension of a Rips filtration.
/// Essential classes carry death = +inf. Pairs are kept sorted so equal
/// multisets compare equal.
struct PersistenceDiagram {
  int homDim = 0;
  std::vector<PersistencePair> pairs;
  double maxScale = kInfinity;

  std::size_t size() const { return pairs.size(); }
  std::size_t essentialCount() const;
  void canonicalize();
};

/// How classes that never die enter a distance computation.
enum class EssentialPolicy {
  Drop,  ///< remove them
  Cap,   ///< replace +inf by the diagram's maxScale
};

/// Copy of the diagram with no +inf deaths, per policy. Pairs that become
/// zero-length after capping are removed.
PersistenceDiagram finitePart(const PersistenceDiagram& diagram, EssentialPolicy policy = EssentialPolicy::Drop);

/// Vietoris-Rips persistent homology over Z/2 in dimensions 0..maxDim
/// (maxDim is 0 or 1). The filtration value of a simplex is its diameter;
/// simplices above maxScale are excluded. Zero-length pairs are omitted.
///
/// Returns one diagram per dimension, index = homology dimension.
std::vector<PersistenceDiagram> ripsPersistence(const DistanceMatrix& dist, int maxDim, double maxScale);

/// Same, with maxScale defaulting to the largest pairwise distance so that
/// nothing finite is truncated.
std::vector<PersistenceDiagram> ripsPersistence(const DistanceMatrix& dist, int maxDim = 1);

}  // namespace topolip
