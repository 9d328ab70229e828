#pragma once

#include <Eigen/Core>
#include <vector>

namespace topolip {

/// Minimum-cost perfect assignment on a square cost matrix (Hungarian method
/// with potentials, O(n^3)). Returns column[row]. Costs must be finite.
std::vector<Eigen::Index> solveAssignment(const Eigen::MatrixXd& cost);

/// Sum of cost(i, column[i]) accumulated in row order.
double assignmentCost(const Eigen::MatrixXd& cost, const std::vector<Eigen::Index>& column);

/// Smallest threshold c such that the bipartite graph {(i, j) : cost(i, j) <= c}
/// has a perfect matching (bottleneck assignment). Binary search over the
/// distinct entries with Hopcroft-Karp feasibility checks.
double bottleneckAssignment(const Eigen::MatrixXd& cost);

}  // namespace topolip
