#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/matching_oracle.hpp"
#include "support.hpp"
#include "topolip/assignment.hpp"
#include "topolip/diagram_io.hpp"
#include "topolip/diagram_metrics.hpp"
#include "topolip/error.hpp"

using namespace topolip;

namespace {

PersistenceDiagram diagram(std::vector<PersistencePair> pairs, int homDim = 0) {
  PersistenceDiagram dg{homDim, std::move(pairs), kInfinity};
  dg.canonicalize();
  return dg;
}

oracle::Points points(const PersistenceDiagram& dg) {
  oracle::Points out;
  for (const auto& p : dg.pairs) out.push_back({p.birth, p.death});
  return out;
}

}  // namespace

TEST_CASE("assignment solver") {
  Eigen::Matrix3d cost;
  cost << 4, 1, 3, 2, 0, 5, 3, 2, 2;
  const auto col = solveAssignment(cost);
  CHECK(assignmentCost(cost, col) == 5.0);
  CHECK(bottleneckAssignment(cost) == 2.0);
  CHECK(solveAssignment(Eigen::MatrixXd(0, 0)).empty());
}

TEST_CASE("diagram Wasserstein examples") {
  const auto a = diagram({{0, 2}});
  const auto b = diagram({{0, 4}});
  const auto empty = diagram({});
  CHECK(diagramWasserstein(a, a, 1).value == 0.0);
  CHECK(diagramWasserstein(a, empty, 1).value == 1.0);
  CHECK(diagramWasserstein(empty, a, 1).value == 1.0);
  CHECK(diagramWasserstein(a, b, 1).value == 2.0);
  CHECK(diagramWasserstein(empty, empty, 2).value == 0.0);
  const auto v = diagramWasserstein(a, b, 2);
  CHECK(v.p == 2.0);
  CHECK(v.kind == DistanceKind::Diagram);
}

TEST_CASE("bottleneck examples") {
  const auto a = diagram({{0, 2}});
  const auto b = diagram({{0, 4}});
  CHECK(bottleneckDistance(a, a).value == 0.0);
  CHECK(bottleneckDistance(a, diagram({})).value == 1.0);
  CHECK(bottleneckDistance(a, b).value == 2.0);
  CHECK(diagramWasserstein(a, b, kInfinity).value == 2.0);
}

TEST_CASE("diagram distance errors") {
  const auto a = diagram({{0, 2}});
  CHECK_THROWS_AS(diagramWasserstein(a, a, 0.5), ParameterError);
  CHECK_THROWS_AS(diagramWasserstein(a, diagram({{0, 2}}, 1), 1), UsageError);
  CHECK_THROWS_AS(bottleneckDistance(a, diagram({{0, 2}}, 1)), UsageError);
  CHECK_THROWS_AS(diagramWasserstein(a, diagram({{0, kInfinity}}), 1), UsageError);
}

TEST_CASE("ground norm selection") {
  const auto a = diagram({{0, 2}});
  const auto b = diagram({{1, 4}});
  CHECK(diagramWasserstein(a, b, 1, GroundNorm::LInf).value == 2.0);
  // L2: direct match sqrt(1 + 4) beats the diagonal route sqrt(2) + 3/sqrt(2).
  CHECK(diagramWasserstein(a, b, 1, GroundNorm::L2).value == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
}

TEST_CASE("matching agrees with exhaustive enumeration") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 80; ++trial) {
    const auto a = testing::randomDiagram(rng, 5);
    const auto b = testing::randomDiagram(rng, 5);
    for (double p : {1.0, 2.0}) {
      const auto want = oracle::bruteForceMatching(points(a), points(b), p);
      CHECK(diagramWasserstein(a, b, p).value == doctest::Approx(want.wasserstein).epsilon(1e-12));
      CHECK(std::abs(bottleneckDistance(a, b).value - want.bottleneck) <= 1e-12);
    }
  }
}

TEST_CASE("diagram metric axioms") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const auto a = testing::randomDiagram(rng, 6);
    const auto b = testing::randomDiagram(rng, 6);
    const auto c = testing::randomDiagram(rng, 6);
    for (double p : {1.0, 2.0, kInfinity}) {
      const double ab = diagramWasserstein(a, b, p), ba = diagramWasserstein(b, a, p);
      const double bc = diagramWasserstein(b, c, p), ac = diagramWasserstein(a, c, p);
      CHECK(ab == doctest::Approx(ba).epsilon(1e-14));
      CHECK(ac <= ab + bc + 1e-9);
      CHECK(diagramWasserstein(a, a, p).value <= 1e-12);
      if (!(a.pairs == b.pairs)) CHECK(ab > 0.0);
    }
  }
}

TEST_CASE("cloud Wasserstein examples") {
  CHECK(cloudWasserstein(testing::line({0}), testing::line({1}), 1).value == 1.0);
  CHECK(cloudWasserstein(testing::line({0, 1}), testing::line({0, 1}), 1).value == 0.0);
  CHECK(cloudWasserstein(testing::line({0, 1}), testing::line({0, 3}), 1).value == 1.0);
  CHECK(cloudWasserstein(testing::line({0, 1}), testing::line({0, 3}), 1).kind == DistanceKind::Cloud);
  CHECK_THROWS_AS(cloudWasserstein(testing::line({0, 1}), testing::line({0}), 1), UsageError);
  CHECK_THROWS_AS(cloudWasserstein(testing::line({0}), PointCloud::fromRows({{0, 0}}), 1), UsageError);
  CHECK_THROWS_AS(cloudWasserstein(testing::line({0}), testing::line({1}), 0.5), ParameterError);
}

TEST_CASE("cloud Wasserstein properties") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto mu = testing::randomCloud(12, 3, rng);
    const auto nu = testing::randomCloud(12, 3, rng);
    const double w1 = cloudWasserstein(mu, nu, 1), w2 = cloudWasserstein(mu, nu, 2);
    CHECK(w1 <= w2 + 1e-12);

    const Eigen::RowVector3d shift(u(rng), u(rng), u(rng));
    const PointCloud muShift(mu.points().rowwise() + shift), nuShift(nu.points().rowwise() + shift);
    CHECK(std::abs(cloudWasserstein(muShift, nuShift, 1).value - w1) <= 1e-9);
    CHECK(std::abs(cloudWasserstein(muShift, nuShift, 2).value - w2) <= 1e-9);

    const double c = 0.1 + std::abs(u(rng));
    const PointCloud muScaled(mu.points() * c), nuScaled(nu.points() * c);
    CHECK(std::abs(cloudWasserstein(muScaled, nuScaled, 1).value - c * w1) <= 1e-9);
    CHECK(std::abs(cloudWasserstein(muScaled, nuScaled, 2).value - c * w2) <= 1e-9);
  }
}

TEST_CASE("combined diagram distance") {
  const std::vector<PersistenceDiagram> a{diagram({{0, 2}, {0, kInfinity}}), diagram({{1, 3}}, 1)};
  const std::vector<PersistenceDiagram> b{diagram({{0, kInfinity}}), diagram({}, 1)};
  DiagramDistanceOptions opts;
  CHECK(combinedDiagramDistance(a, b, opts) == 2.0);
  opts.combine = DimensionCombine::Max;
  CHECK(combinedDiagramDistance(a, b, opts) == 1.0);
  opts.p = kInfinity;
  CHECK(combinedDiagramDistance(a, b, opts) == 1.0);
  CHECK_THROWS_AS(combinedDiagramDistance(a, std::vector<PersistenceDiagram>{b[0]}, opts), UsageError);
}

TEST_CASE("diagram CSV round trip") {
  testing::TempDir dir("csv");
  const std::vector<PersistenceDiagram> dgs{diagram({{0, 0.1}, {0, kInfinity}}), diagram({{0.3, 0.7000000000000001}}, 1)};
  writeDiagramCsv(dir / "d.csv", dgs);
  const auto text = testing::slurp(dir / "d.csv");
  CHECK(text.rfind("hom_dim,birth,death\n", 0) == 0);
  CHECK(text.find("0,0,inf") != std::string::npos);
  const auto back = readDiagramCsv(dir / "d.csv");
  REQUIRE(back.size() == 2);
  CHECK(back[0].pairs == dgs[0].pairs);
  CHECK(back[1].pairs == dgs[1].pairs);

  testing::spit(dir / "bad.csv", "hom_dim,birth,death\n0,2,1\n");
  CHECK_THROWS_AS(readDiagramCsv(dir / "bad.csv"), IngestionError);
  testing::spit(dir / "junk.csv", "0,x,1\n");
  CHECK_THROWS_AS(readDiagramCsv(dir / "junk.csv"), IngestionError);
  CHECK_THROWS_AS(readDiagramCsv(dir / "missing.csv"), IngestionError);
}

TEST_CASE("shortest round-trip formatting") {
  CHECK(formatReal(0.1) == "0.1");
  CHECK(formatReal(kInfinity) == "inf");
  CHECK(formatReal(2.0) == "2");
}
