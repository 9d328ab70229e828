#include <doctest.h>

#include <cmath>
#include <random>

#include "topolip/bounds.hpp"
#include "topolip/error.hpp"

using namespace topolip::bounds;

namespace {

AttnParams attn(double t, double sigma, double s, double d, double heads = 1) {
  AttnParams p;
  p.t = t;
  p.sigma = sigma;
  p.s = s;
  p.d = d;
  p.heads = heads;
  return p;
}

ConvParams conv(double halfWidth, double channels, double t, double sigma) {
  ConvParams p;
  p.halfWidth = halfWidth;
  p.channels = channels;
  p.t = t;
  p.sigma = sigma;
  return p;
}

}  // namespace

TEST_CASE("attention bounds by hand") {
  CHECK(attnSingleHeadBound(attn(1, 1, 0, 1)) == 20.0);
  CHECK(attnMultiHeadBound(attn(1, 1, 0, 1, 1)) == 40.0);
  CHECK(attnSingleHeadFormula(0, 1, 1, 0) == 0.0);
  CHECK(attnMultiHeadFormula(0, 1, 1, 1, 0) == 0.0);
}

TEST_CASE("attention bound against an independent evaluation") {
  // mpmath, 30 digits: sigma = 0.05, d = 512, t = sqrt(512), s = 0.05
  const double expected = 6.63268050839767429465;
  CHECK(attnSingleHeadBound(attn(std::sqrt(512.0), 0.05, 0.05, 512)) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("M = 1 multi-head is single-head times the operator-norm factor") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.01, 2.0);
  for (int i = 0; i < 50; ++i) {
    const auto p = attn(1 + 10 * u(rng), u(rng), u(rng), std::ceil(100 * u(rng)));
    const double factor = 2 * p.sigma * std::sqrt(p.d) + p.s;
    CHECK(attnMultiHeadBound(p) == doctest::Approx(attnSingleHeadBound(p) * factor).epsilon(1e-13));
  }
}

TEST_CASE("single-head homogeneity in sigma") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int i = 0; i < 50; ++i) {
    const double t = u(rng) * 4, s = u(rng), d = std::ceil(u(rng) * 50), sigma = u(rng) / 10, c = u(rng);
    // symbolic re-evaluation at c sigma
    const double cs = c * sigma, g = 2 * cs * std::sqrt(d) + s;
    const double want = 2 * t * cs * g * (1 + t * cs / std::sqrt(d) * g * g);
    CHECK(attnSingleHeadBound(attn(t, cs, s, d)) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("conv bound") {
  CHECK(convBound(conv(0, 1, 1, 1)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(convFormula(0, 4, 1, 2) == 0.0);
  // k = 3, C = 512, sigma = 0.05 at t = 1: same order as k sqrt(sigma C) ~ 15
  const double v = convBound(conv(3, 512, 1, 0.05));
  CHECK(v > 10.0);
  CHECK(v < 60.0);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(attnSingleHeadBound(attn(1, -1, 0, 1)), topolip::ParameterError);
  CHECK_THROWS_AS(attnSingleHeadBound(attn(0, 1, 0, 1)), topolip::ParameterError);
  CHECK_THROWS_AS(attnMultiHeadBound(attn(1, 1, 0, 1, 0)), topolip::ParameterError);
  CHECK_THROWS_AS(attnMultiHeadBound(attn(1, 1, -0.1, 1)), topolip::ParameterError);
  CHECK_THROWS_AS(convBound(conv(-1, 1, 1, 1)), topolip::ParameterError);
  CHECK_THROWS_AS(convBound(conv(1, 0, 1, 1)), topolip::ParameterError);
  CHECK_THROWS_AS(asymptoticOrders(0, 1, 1, 1, 1), topolip::ParameterError);
  CHECK_THROWS_AS(tfBound(-1, CompositeInputs{}), topolip::ParameterError);
  CHECK_THROWS_AS(resBound(1, -1), topolip::ParameterError);
}

TEST_CASE("monotonicity on random grids") {
  // Attention: increasing in sigma, t and d for s <= 4 sigma.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double sigma = 0.01 + u(rng), t = 0.5 + 10 * u(rng), d = 1 + std::floor(500 * u(rng));
    const double s = 4 * sigma * u(rng), heads = 1 + std::floor(16 * u(rng));
    const auto p = attn(t, sigma, s, d, heads);
    auto bump = [&](auto field, double factor) {
      auto q = p;
      q.*field *= factor;
      return q;
    };
    for (auto field : {&AttnParams::sigma, &AttnParams::t}) {
      CHECK(attnSingleHeadBound(bump(field, 1.01)) > attnSingleHeadBound(p));
      CHECK(attnMultiHeadBound(bump(field, 1.01)) > attnMultiHeadBound(p));
    }
    auto q = p;
    q.d += 1;
    CHECK(attnSingleHeadBound(q) > attnSingleHeadBound(p));
    CHECK(attnMultiHeadBound(q) > attnMultiHeadBound(p));

    const auto c = conv(std::floor(4 * u(rng)), 1 + std::floor(512 * u(rng)), 0.5 + 5 * u(rng), 0.01 + u(rng));
    auto cs = c, ct = c, cc = c;
    cs.sigma *= 1.01;
    ct.t *= 1.01;
    cc.channels += 1;
    CHECK(convBound(cs) > convBound(c));
    CHECK(convBound(ct) > convBound(c));
    CHECK(convBound(cc) > convBound(c));
  }
}

TEST_CASE("probability qualifiers and warnings") {
  const auto p = attn(4, 0.05, 0.15, 4);
  CHECK(attnProbability(p) == doctest::Approx(std::min(1 - 4.0 / 16, 1 - 2 * std::exp(-9.0 / 2))));
  CHECK(attnProbability(attn(1, 1, 0, 4)) == 0.0);
  CHECK(convProbability(conv(1, 4, 2, 0.05)) == 0.75);
  CHECK(convProbability(conv(1, 4, 0.5, 0.05)) == 0.0);
  const auto warnings = attnWarnings(attn(1, 0.05, 0.0, 4));
  CHECK(warnings.size() == 3);
}

TEST_CASE("asymptotic orders") {
  const auto o = asymptoticOrders(0.05, 512, 8, 3, 512);
  CHECK(o.attn == doctest::Approx(0.08192).epsilon(1e-12));
  CHECK(o.mhattn == doctest::Approx(0.741455200189465).epsilon(1e-12));
  CHECK(o.conv == doctest::Approx(15.1789327688082).epsilon(1e-12));
  const auto practical = asymptoticOrders(1e-2, 1e2, 1e1, 1e1, 1e2);
  CHECK(std::round(std::log10(practical.mhattn)) == -6);
  CHECK(std::round(std::log10(practical.conv)) == 1);
}

TEST_CASE("composite bounds") {
  CHECK(tfBound(0, {0, 0, 0, 0}) == 1.0);
  CHECK(tfBound(2, {1, 1, 1, 1}) == 6.0);
  CHECK(tfBound(123, {5, 7, 0, 1}) == 1.0);
  CHECK(resBound(0, 3) == 1.0);
  CHECK(resBound(1, 1) == 2.0);
  CHECK(resBound(2, 1) == 9.0);
  CHECK(tfOrder(0.01, 100, 10) >= 1.0);
  CHECK(resOrder(0.01, 10, 512) > 1e3);
}

TEST_CASE("presets") {
  const auto& table = builtinPresets();
  CHECK(table.sigma == 0.05);
  const auto vit = table.config("vit-small");
  CHECK(vit.description == "6 heads; embedding dimension: 384");
  REQUIRE(vit.attention);
  CHECK(vit.attention->heads == 6);
  CHECK(vit.attention->d == 384);
  const auto r50 = table.config("resnet50", 0.01);
  REQUIRE(r50.convolution);
  CHECK(r50.convolution->sigma == 0.01);
  CHECK(r50.convolution->channels.front() == 64);
  CHECK(r50.convolution->channels.back() == 512);
  CHECK(toString(r50.composite) == "res");
  CHECK_THROWS_AS(table.config("nope"), topolip::UsageError);
  for (const auto& name : table.names()) CHECK_NOTHROW(computeBounds(table.config(name)));
}

TEST_CASE("compare architectures") {
  const auto& table = builtinPresets();
  const auto vit = computeBounds(table.config("vit-base"));
  const auto res = computeBounds(table.config("resnet50"));
  REQUIRE(vit.orders.tf);
  REQUIRE(res.orders.res);
  CHECK(*res.orders.res > 1e3);
  CHECK(*vit.orders.tf < *res.orders.res);

  const auto ab = compareArchitectures(vit, res);
  CHECK(ab.verdict == "attention smoother");
  const auto ba = compareArchitectures(res, vit);
  CHECK(ba.verdict == "attention smoother");
  CHECK(ab.headline.smaller == "a");
  CHECK(ba.headline.smaller == "b");
  CHECK(compareArchitectures(vit, vit).verdict == "equal");

  const auto small = computeBounds(table.config("vit-small"));
  CHECK(compareArchitectures(small, vit).verdict == "vit-small smoother");
}

TEST_CASE("bound report JSON round trip") {
  const auto report = computeBounds(builtinPresets().config("resnet18"));
  const auto doc = toJson(report);
  const auto back = boundReportFromJson(doc);
  CHECK(toJson(back) == doc);
  CHECK_THROWS_AS(boundReportFromJson(nlohmann::json{{"name", 3}}), topolip::UsageError);
}
