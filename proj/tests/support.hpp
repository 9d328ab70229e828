#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "topolip/persistence.hpp"
#include "topolip/point_cloud.hpp"
#include "topolip/trace.hpp"

namespace testing {

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    std::random_device rd;
    m_path = std::filesystem::temp_directory_path() /
             ("topolip-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(m_path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(m_path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return m_path; }
  std::filesystem::path operator/(const std::string& name) const { return m_path / name; }

 private:
  std::filesystem::path m_path;
};

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng, double sd = 1.0) {
  std::normal_distribution<double> n(0.0, sd);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = n(rng);
  return m;
}

inline topolip::PointCloud randomCloud(Eigen::Index n, Eigen::Index m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd pts(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) pts(i, j) = u(rng);
  return topolip::PointCloud(pts);
}

// Finite diagram of up to maxPoints pairs with births in [0, 1), lifetimes in (0, 1].
inline topolip::PersistenceDiagram randomDiagram(std::mt19937_64& rng, int maxPoints, int homDim = 0) {
  std::uniform_int_distribution<int> count(0, maxPoints);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  topolip::PersistenceDiagram dg{homDim, {}, topolip::kInfinity};
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const double b = u(rng);
    dg.pairs.push_back({b, b + 1.0 - u(rng)});
  }
  dg.canonicalize();
  return dg;
}

inline topolip::PointCloud line(std::vector<double> xs) {
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(xs.size()), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) pts(static_cast<Eigen::Index>(i), 0) = xs[i];
  return topolip::PointCloud(pts);
}

// Four layers of two 1-D points with gaps 10, 12, 13, 16: each H0 diagram
// is {(0, gap)}, so adjacent W_p distances are 2, 1, 3 for every p.
inline topolip::pipeline::LayerTrace syntheticTrace() {
  topolip::pipeline::LayerTrace trace;
  trace.modelName = "synthetic-wd-2-1-3";
  trace.meta = {{"source", "fixture"}};
  const double gaps[] = {10.0, 12.0, 13.0, 16.0};
  for (int i = 0; i < 4; ++i) trace.layers.push_back({"layer" + std::to_string(i), line({0.0, gaps[i]})});
  return trace;
}

}  // namespace testing
