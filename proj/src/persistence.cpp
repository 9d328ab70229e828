#include "topolip/persistence.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <string>
#include <unordered_map>

#include "topolip/error.hpp"

namespace topolip {

std::size_t PersistenceDiagram::essentialCount() const {
  return static_cast<std::size_t>(std::count_if(pairs.begin(), pairs.end(), [](const auto& p) { return p.essential(); }));
}

void PersistenceDiagram::canonicalize() { std::sort(pairs.begin(), pairs.end()); }

PersistenceDiagram finitePart(const PersistenceDiagram& diagram, EssentialPolicy policy) {
  PersistenceDiagram out{diagram.homDim, {}, diagram.maxScale};
  out.pairs.reserve(diagram.pairs.size());
  for (PersistencePair p : diagram.pairs) {
    if (p.essential()) {
      if (policy == EssentialPolicy::Drop) continue;
      p.death = diagram.maxScale;
      if (!(p.death > p.birth)) continue;
    }
    out.pairs.push_back(p);
  }
  return out;
}

namespace {

struct Edge {
  double diam;
  std::uint32_t u, v;  // u < v
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : m_parent(n), m_rank(n, 0) { std::iota(m_parent.begin(), m_parent.end(), 0u); }

  std::uint32_t find(std::uint32_t x) {
    while (m_parent[x] != x) {
      m_parent[x] = m_parent[m_parent[x]];
      x = m_parent[x];
    }
    return x;
  }

  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (m_rank[a] < m_rank[b]) std::swap(a, b);
    m_parent[b] = a;
    if (m_rank[a] == m_rank[b]) ++m_rank[a];
    return true;
  }

 private:
  std::vector<std::uint32_t> m_parent;
  std::vector<std::uint8_t> m_rank;
};

// A triangle in the coboundary of an edge, keyed by its sorted vertex triple.
struct Cofacet {
  double diam;
  std::uint64_t key;
};

// Filtration order on triangles: diameter, then key. Used as a min-heap.
struct ComesLater {
  bool operator()(const Cofacet& a, const Cofacet& b) const {
    return a.diam > b.diam || (a.diam == b.diam && a.key > b.key);
  }
};

using WorkingColumn = std::priority_queue<Cofacet, std::vector<Cofacet>, ComesLater>;

class RipsComplex {
 public:
  RipsComplex(const DistanceMatrix& dist, double maxScale) : m_dist(dist), m_maxScale(maxScale) {
    const auto n = static_cast<std::uint32_t>(dist.size());
    for (std::uint32_t v = 1; v < n; ++v)
      for (std::uint32_t u = 0; u < v; ++u)
        if (dist(u, v) <= maxScale) m_edges.push_back({dist(u, v), u, v});
    // Ties are broken lexicographically; the same order drives H0 and H1.
    std::sort(m_edges.begin(), m_edges.end(), [](const Edge& a, const Edge& b) {
      if (a.diam != b.diam) return a.diam < b.diam;
      if (a.u != b.u) return a.u < b.u;
      return a.v < b.v;
    });
  }

  PersistenceDiagram h0(std::vector<bool>& mergeEdge) const {
    const auto n = static_cast<std::size_t>(m_dist.size());
    PersistenceDiagram dg{0, {}, m_maxScale};
    UnionFind components(n);
    mergeEdge.assign(m_edges.size(), false);
    std::size_t remaining = n;
    for (std::size_t r = 0; r < m_edges.size() && remaining > 1; ++r) {
      if (!components.unite(m_edges[r].u, m_edges[r].v)) continue;
      mergeEdge[r] = true;
      --remaining;
      if (m_edges[r].diam > 0.0) dg.pairs.push_back({0.0, m_edges[r].diam});
    }
    for (std::size_t c = 0; c < remaining; ++c) dg.pairs.push_back({0.0, kInfinity});
    dg.canonicalize();
    return dg;
  }

  // Persistent cohomology in degree 1: coboundary columns of the non-merge
  // edges, reduced in reverse filtration order. Merge edges are cleared since
  // they are already paired with vertices.
  PersistenceDiagram h1(const std::vector<bool>& mergeEdge) const {
    PersistenceDiagram dg{1, {}, m_maxScale};
    std::unordered_map<std::uint64_t, std::uint32_t> pivotOwner;
    std::vector<std::vector<std::uint32_t>> reductions;

    for (std::size_t r = m_edges.size(); r-- > 0;) {
      if (mergeEdge[r]) continue;
      const double birth = m_edges[r].diam;
      std::vector<std::uint32_t> reduction{static_cast<std::uint32_t>(r)};
      WorkingColumn column;
      pushCoboundary(column, r);

      for (;;) {
        auto pivot = popPivot(column);
        if (!pivot) {
          dg.pairs.push_back({birth, kInfinity});
          break;
        }
        auto owner = pivotOwner.find(pivot->key);
        if (owner == pivotOwner.end()) {
          pivotOwner.emplace(pivot->key, static_cast<std::uint32_t>(reductions.size()));
          reductions.push_back(cancelPairs(std::move(reduction)));
          if (pivot->diam > birth) dg.pairs.push_back({birth, pivot->diam});
          break;
        }
        column.push(*pivot);
        for (std::uint32_t f : reductions[owner->second]) {
          pushCoboundary(column, f);
          reduction.push_back(f);
        }
      }
    }
    dg.canonicalize();
    return dg;
  }

 private:
  void pushCoboundary(WorkingColumn& column, std::size_t rank) const {
    const Edge& e = m_edges[rank];
    const auto n = static_cast<std::uint32_t>(m_dist.size());
    for (std::uint32_t w = 0; w < n; ++w) {
      if (w == e.u || w == e.v) continue;
      const double diam = std::max({e.diam, m_dist(e.u, w), m_dist(e.v, w)});
      if (diam > m_maxScale) continue;
      std::uint32_t a = e.u, b = e.v, c = w;
      if (c < a) std::swap(a, c);
      if (c < b) std::swap(b, c);
      if (b < a) std::swap(a, b);
      column.push({diam, (static_cast<std::uint64_t>(a) * n + b) * n + c});
    }
  }

  // Lowest surviving entry of the column over Z/2: equal keys cancel in pairs.
  static std::optional<Cofacet> popPivot(WorkingColumn& column) {
    while (!column.empty()) {
      Cofacet top = column.top();
      column.pop();
      if (!column.empty() && column.top().key == top.key) {
        column.pop();
        continue;
      }
      return top;
    }
    return std::nullopt;
  }

  static std::vector<std::uint32_t> cancelPairs(std::vector<std::uint32_t> ranks) {
    std::sort(ranks.begin(), ranks.end());
    std::vector<std::uint32_t> out;
    out.reserve(ranks.size());
    for (std::size_t i = 0; i < ranks.size();) {
      std::size_t j = i;
      while (j < ranks.size() && ranks[j] == ranks[i]) ++j;
      if ((j - i) % 2 == 1) out.push_back(ranks[i]);
      i = j;
    }
    return out;
  }

  const DistanceMatrix& m_dist;
  double m_maxScale;
  std::vector<Edge> m_edges;
};

}  // namespace

std::vector<PersistenceDiagram> ripsPersistence(const DistanceMatrix& dist, int maxDim, double maxScale) {
  if (!(maxScale > 0.0)) throw ParameterError("maxScale must be positive, got " + std::to_string(maxScale));
  if (maxDim != 0 && maxDim != 1) throw ParameterError("maxDim must be 0 or 1, got " + std::to_string(maxDim));
  if (dist.size() < 1) throw UsageError("distance matrix is empty");

  RipsComplex complex(dist, maxScale);
  std::vector<bool> mergeEdge;
  std::vector<PersistenceDiagram> diagrams;
  diagrams.push_back(complex.h0(mergeEdge));
  if (maxDim >= 1) diagrams.push_back(complex.h1(mergeEdge));
  return diagrams;
}

std::vector<PersistenceDiagram> ripsPersistence(const DistanceMatrix& dist, int maxDim) {
  const double enclosing = dist.maxEntry();
  // A cloud of coincident points has no positive scale; any positive cap works.
  return ripsPersistence(dist, maxDim, enclosing > 0.0 ? enclosing : 1.0);
}

}  // namespace topolip
