#pragma once

// Textbook persistence: enumerate every simplex up to dimension 2, sort by
// filtration value (faces first on ties), reduce the full Z/2 boundary
// matrix column by column. Only meant for a handful of points.

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <utility>
#include <vector>

namespace oracle {

using Bars = std::vector<std::pair<double, double>>;  // sorted (birth, death), death may be +inf

inline std::array<Bars, 2> naiveRips(const Eigen::MatrixXd& dist, double maxScale) {
  const int n = static_cast<int>(dist.rows());
  struct Simplex {
    double value;
    int dim;
    std::vector<int> vertices;
  };
  std::vector<Simplex> simplices;
  for (int i = 0; i < n; ++i) simplices.push_back({0.0, 0, {i}});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (dist(i, j) <= maxScale) simplices.push_back({dist(i, j), 1, {i, j}});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const double v = std::max({dist(i, j), dist(i, k), dist(j, k)});
        if (v <= maxScale) simplices.push_back({v, 2, {i, j, k}});
      }
  std::stable_sort(simplices.begin(), simplices.end(), [](const Simplex& a, const Simplex& b) {
    return a.value != b.value ? a.value < b.value : a.dim < b.dim;
  });

  std::map<std::vector<int>, int> position;
  for (int s = 0; s < static_cast<int>(simplices.size()); ++s) position[simplices[s].vertices] = s;

  const int total = static_cast<int>(simplices.size());
  std::vector<std::vector<char>> column(total, std::vector<char>(total, 0));
  for (int s = 0; s < total; ++s) {
    const auto& vs = simplices[s].vertices;
    if (vs.size() < 2) continue;
    for (std::size_t drop = 0; drop < vs.size(); ++drop) {
      std::vector<int> face;
      for (std::size_t q = 0; q < vs.size(); ++q)
        if (q != drop) face.push_back(vs[q]);
      column[s][position.at(face)] ^= 1;
    }
  }

  auto low = [&](int s) {
    for (int r = total - 1; r >= 0; --r)
      if (column[s][r]) return r;
    return -1;
  };
  std::vector<int> lowOwner(total, -1);
  std::vector<bool> paired(total, false);
  std::array<Bars, 2> bars;
  for (int s = 0; s < total; ++s) {
    int l = low(s);
    while (l >= 0 && lowOwner[l] >= 0) {
      for (int r = 0; r < total; ++r) column[s][r] ^= column[lowOwner[l]][r];
      l = low(s);
    }
    if (l < 0) continue;
    lowOwner[l] = s;
    paired[l] = paired[s] = true;
    const int d = simplices[l].dim;
    if (d <= 1 && simplices[s].value > simplices[l].value) bars[d].push_back({simplices[l].value, simplices[s].value});
  }
  for (int s = 0; s < total; ++s)
    if (!paired[s] && simplices[s].dim <= 1)
      bars[simplices[s].dim].push_back({simplices[s].value, std::numeric_limits<double>::infinity()});
  for (auto& b : bars) std::sort(b.begin(), b.end());
  return bars;
}

}  // namespace oracle
