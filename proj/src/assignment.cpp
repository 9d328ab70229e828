#include "topolip/assignment.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "topolip/error.hpp"

namespace topolip {

std::vector<Eigen::Index> solveAssignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) throw UsageError("assignment cost matrix must be square");
  if (!cost.allFinite()) throw UsageError("assignment cost matrix must be finite");
  const Eigen::Index n = cost.rows();
  if (n == 0) return {};

  // 1-based shortest augmenting path formulation; index 0 is a sentinel column.
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<Eigen::Index> match(n + 1, 0), way(n + 1, 0);
  for (Eigen::Index i = 1; i <= n; ++i) {
    match[0] = i;
    Eigen::Index j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const Eigen::Index i0 = match[j0];
      double delta = inf;
      Eigen::Index j1 = 0;
      for (Eigen::Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Eigen::Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const Eigen::Index j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<Eigen::Index> column(n);
  for (Eigen::Index j = 1; j <= n; ++j) column[match[j] - 1] = j - 1;
  return column;
}

double assignmentCost(const Eigen::MatrixXd& cost, const std::vector<Eigen::Index>& column) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < cost.rows(); ++i) total += cost(i, column[static_cast<std::size_t>(i)]);
  return total;
}

namespace {

// Hopcroft-Karp on the dense threshold graph.
class ThresholdMatcher {
 public:
  explicit ThresholdMatcher(const Eigen::MatrixXd& cost)
      : m_cost(cost), m_n(cost.rows()), m_matchRow(m_n), m_matchCol(m_n), m_layer(m_n) {}

  bool perfect(double threshold) {
    m_threshold = threshold;
    std::fill(m_matchRow.begin(), m_matchRow.end(), kNone);
    std::fill(m_matchCol.begin(), m_matchCol.end(), kNone);
    Eigen::Index matched = 0;
    while (buildLayers()) {
      for (Eigen::Index i = 0; i < m_n; ++i)
        if (m_matchRow[i] == kNone && augment(i)) ++matched;
    }
    return matched == m_n;
  }

 private:
  static constexpr Eigen::Index kNone = -1;

  bool buildLayers() {
    std::queue<Eigen::Index> frontier;
    bool reachedFree = false;
    for (Eigen::Index i = 0; i < m_n; ++i) {
      if (m_matchRow[i] == kNone) {
        m_layer[i] = 0;
        frontier.push(i);
      } else {
        m_layer[i] = kNone;
      }
    }
    while (!frontier.empty()) {
      const Eigen::Index i = frontier.front();
      frontier.pop();
      for (Eigen::Index j = 0; j < m_n; ++j) {
        if (m_cost(i, j) > m_threshold) continue;
        const Eigen::Index next = m_matchCol[j];
        if (next == kNone) {
          reachedFree = true;
        } else if (m_layer[next] == kNone) {
          m_layer[next] = m_layer[i] + 1;
          frontier.push(next);
        }
      }
    }
    return reachedFree;
  }

  bool augment(Eigen::Index i) {
    for (Eigen::Index j = 0; j < m_n; ++j) {
      if (m_cost(i, j) > m_threshold) continue;
      const Eigen::Index next = m_matchCol[j];
      if (next == kNone || (m_layer[next] == m_layer[i] + 1 && augment(next))) {
        m_matchRow[i] = j;
        m_matchCol[j] = i;
        return true;
      }
    }
    m_layer[i] = kNone;
    return false;
  }

  const Eigen::MatrixXd& m_cost;
  Eigen::Index m_n;
  double m_threshold = 0.0;
  std::vector<Eigen::Index> m_matchRow, m_matchCol, m_layer;
};

}  // namespace

double bottleneckAssignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) throw UsageError("assignment cost matrix must be square");
  if (cost.size() == 0) return 0.0;

  std::vector<double> candidates(cost.data(), cost.data() + cost.size());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  ThresholdMatcher matcher(cost);
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (matcher.perfect(candidates[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return candidates[lo];
}

}  // namespace topolip
