#include "topolip/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "presets_data.hpp"
#include "topolip/error.hpp"

namespace topolip::bounds {

using nlohmann::json;

double attnSingleHeadFormula(double sigma, double d, double t, double s) {
  const double op = 2.0 * sigma * std::sqrt(d) + s;
  return 2.0 * t * sigma * op * (1.0 + t * sigma / std::sqrt(d) * op * op);
}

double attnMultiHeadFormula(double sigma, double d, double heads, double t, double s) {
  const double op = 2.0 * sigma * std::sqrt(d) + s;
  return 2.0 * t * sigma * std::sqrt(heads) * op * op * (1.0 + t * sigma * std::sqrt(heads / d) * op * op);
}

double convFormula(double sigma, double channels, double halfWidth, double t) {
  const double width = 2.0 * halfWidth + 1.0;
  return width * std::sqrt(t * sigma * channels * (1.0 + 1.0 / (width * std::sqrt(channels))));
}

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ParameterError(message);
}

void check(const AttnParams& p) {
  require(p.sigma > 0.0, "sigma must be positive, got " + std::to_string(p.sigma));
  require(p.d >= 1.0, "embedding dimension d must be >= 1");
  require(p.heads >= 1.0, "head count M must be >= 1");
  require(p.t > 0.0, "t must be positive");
  require(p.s >= 0.0, "singular-value slack s must be non-negative");
}

void check(const ConvParams& p) {
  require(p.sigma > 0.0, "sigma must be positive, got " + std::to_string(p.sigma));
  require(p.channels >= 1.0, "channel count C must be >= 1");
  require(p.halfWidth >= 0.0, "filter half-width k must be >= 0");
  require(p.t > 0.0, "t must be positive");
}

double clampProbability(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

double attnSingleHeadBound(const AttnParams& p) {
  check(p);
  return attnSingleHeadFormula(p.sigma, p.d, p.t, p.s);
}

double attnMultiHeadBound(const AttnParams& p) {
  check(p);
  return attnMultiHeadFormula(p.sigma, p.d, p.heads, p.t, p.s);
}

double convBound(const ConvParams& p) {
  check(p);
  return convFormula(p.sigma, p.channels, p.halfWidth, p.t);
}

double attnProbability(const AttnParams& p) {
  check(p);
  const double ball = 1.0 - p.d / (p.t * p.t);
  const double spectrum = 1.0 - 2.0 * std::exp(-p.s * p.s / (2.0 * p.sigma * p.sigma));
  return clampProbability(std::min(ball, spectrum));
}

double convProbability(const ConvParams& p) {
  check(p);
  return clampProbability(1.0 - 1.0 / (p.t * p.t));
}

std::vector<std::string> attnWarnings(const AttnParams& p) {
  check(p);
  std::vector<std::string> out;
  if (p.t <= std::sqrt(p.d)) out.push_back("t <= sqrt(d): the ball B_{t sigma} is not certified (1 - d/t^2 <= 0)");
  if (p.s < p.sigma * std::sqrt(2.0 * std::numbers::ln2))
    out.push_back("s < sigma sqrt(2 ln 2): the singular-value tail bound is vacuous");
  const double op = 2.0 * p.sigma * std::sqrt(p.d) + p.s;
  if (std::sqrt(p.heads / p.d) * op * op < 2.0 / (p.sigma * p.sigma))
    out.push_back("|A|_op >= 2/sigma^2 cannot be certified: sqrt(M/d)(2 sigma sqrt(d) + s)^2 < 2/sigma^2");
  return out;
}

AsymptoticOrders asymptoticOrders(double sigma, double d, double heads, double halfWidth, double channels) {
  require(sigma > 0.0 && d > 0.0 && heads > 0.0 && halfWidth > 0.0 && channels > 0.0,
          "asymptotic orders need positive sigma, d, M, k and C");
  return {std::pow(sigma, 5) * d * d, std::pow(sigma, 6) * std::pow(d, 2.5) * heads,
          halfWidth * std::sqrt(sigma * channels)};
}

double tfOrder(double sigma, double d, double heads) {
  require(sigma > 0.0 && d > 0.0 && heads > 0.0, "transformer order needs positive sigma, d and M");
  return std::max({1.0, std::pow(sigma, 3) * std::pow(d, 1.5) * heads, std::pow(sigma, 7) * std::pow(d, 3) * heads,
                   std::pow(sigma, 10) * std::pow(d, 4.5) * heads});
}

double resOrder(double sigma, double halfWidth, double channels) {
  require(sigma > 0.0 && halfWidth >= 0.0 && channels > 0.0, "residual order needs positive sigma and C, k >= 0");
  return std::max(1.0, std::pow(halfWidth, 3) * std::pow(sigma, 2.5) * std::pow(channels, 3));
}

double tfBound(double mhattn, const CompositeInputs& c) {
  require(mhattn >= 0.0 && c.w1Norm >= 0.0 && c.w2Norm >= 0.0 && c.gammaInf >= 0.0,
          "transformer bound inputs must be non-negative");
  return (c.w1Norm * c.w2Norm * c.gammaInf + 1.0) * (1.0 + c.gammaInf * mhattn);
}

double resBound(double conv, double bnLip) {
  require(conv >= 0.0 && bnLip >= 0.0, "residual bound inputs must be non-negative");
  return 1.0 + std::pow(conv, 3) * std::pow(bnLip, 3);
}

AttnParams defaultAttnParams(double sigma, double d, double heads) {
  return {sigma, d, heads, 2.0 * std::sqrt(d), 3.0 * sigma};
}

CompositeInputs defaultCompositeInputs(const std::optional<AttnParams>& attention) {
  CompositeInputs c;
  const double op = attention ? 2.0 * attention->sigma * std::sqrt(attention->d) + attention->s : 1.0;
  c.w1Norm = op;
  c.w2Norm = op;
  c.gammaInf = 1.0;
  c.bnLip = c.gammaInf;
  return c;
}

double BoundReport::headlineOrder() const {
  if (composite == Composite::Transformer && orders.tf) return *orders.tf;
  if (composite == Composite::Residual && orders.res) return *orders.res;
  const double attn = orders.mhattn.value_or(0.0);
  const double conv = orders.conv.value_or(0.0);
  switch (family) {
    case Family::Attention: return attn;
    case Family::Convolution: return conv;
    case Family::Mixed: return std::max(attn, conv);
  }
  return 0.0;
}

BoundReport computeBounds(const ArchitectureConfig& config) {
  if (!config.attention && !config.convolution)
    throw UsageError("architecture '" + config.name + "' has neither attention nor convolution parameters");
  if (config.composite == Composite::Transformer && !config.attention)
    throw UsageError("a transformer composite needs attention parameters");
  if (config.composite == Composite::Residual && !config.convolution)
    throw UsageError("a residual composite needs convolution parameters");

  BoundReport r;
  r.name = config.name;
  r.description = config.description;
  r.composite = config.composite;
  r.attention = config.attention;
  r.convolution = config.convolution;
  r.inputs = config.inputs;
  r.family = config.attention && config.convolution ? Family::Mixed
             : config.attention                      ? Family::Attention
                                                     : Family::Convolution;

  if (const auto& a = config.attention) {
    r.bounds.attnSingleHead = attnSingleHeadBound(*a);
    r.bounds.attnMultiHead = attnMultiHeadBound(*a);
    r.orders.attn = std::pow(a->sigma, 5) * a->d * a->d;
    r.orders.mhattn = std::pow(a->sigma, 6) * std::pow(a->d, 2.5) * a->heads;
    r.attnProbability = attnProbability(*a);
    r.warnings = attnWarnings(*a);
  }
  if (const auto& c = config.convolution) {
    if (c->channels.empty()) throw UsageError("convolution channel ladder is empty");
    const double widest = *std::max_element(c->channels.begin(), c->channels.end());
    const ConvParams p{c->sigma, widest, c->halfWidth, c->t};
    r.bounds.conv = convBound(p);
    r.orders.conv = c->halfWidth * std::sqrt(c->sigma * widest);
    r.convProbability = convProbability(p);
    if (c->t <= 1.0) r.warnings.push_back("t <= 1: the convolution probability qualifier 1 - 1/t^2 is vacuous");
  }
  if (config.composite == Composite::Transformer) {
    r.bounds.tf = tfBound(*r.bounds.attnMultiHead, config.inputs);
    r.orders.tf = tfOrder(config.attention->sigma, config.attention->d, config.attention->heads);
  }
  if (config.composite == Composite::Residual) {
    r.bounds.res = resBound(*r.bounds.conv, config.inputs.bnLip);
    const auto& c = *config.convolution;
    r.orders.res = resOrder(c.sigma, c.halfWidth, *std::max_element(c.channels.begin(), c.channels.end()));
  }
  return r;
}

std::string toString(Family family) {
  switch (family) {
    case Family::Attention: return "attention";
    case Family::Convolution: return "convolution";
    case Family::Mixed: return "mixed";
  }
  return "unknown";
}

std::string toString(Composite composite) {
  switch (composite) {
    case Composite::None: return "none";
    case Composite::Transformer: return "tf";
    case Composite::Residual: return "res";
  }
  return "unknown";
}

namespace {

Family familyFromString(const std::string& s) {
  if (s == "attention") return Family::Attention;
  if (s == "convolution") return Family::Convolution;
  if (s == "mixed") return Family::Mixed;
  throw UsageError("unknown family '" + s + "'");
}

Composite compositeFromString(const std::string& s) {
  if (s == "none") return Composite::None;
  if (s == "tf") return Composite::Transformer;
  if (s == "res") return Composite::Residual;
  throw UsageError("unknown composite '" + s + "'");
}

json optionalJson(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optionalValue(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

}  // namespace

std::vector<std::string> PresetTable::names() const {
  std::vector<std::string> out;
  for (const auto& [name, entry] : entries) out.push_back(name);
  return out;
}

ArchitectureConfig PresetTable::config(const std::string& name, std::optional<double> sigmaOverride) const {
  auto it = entries.find(name);
  if (it == entries.end()) {
    std::string known;
    for (const auto& n : names()) known += (known.empty() ? "" : ", ") + n;
    throw UsageError("unknown preset '" + name + "' (known: " + known + ")");
  }
  const json& e = it->second;
  const double s = sigmaOverride.value_or(sigma);
  ArchitectureConfig c;
  c.name = name;
  c.description = e.value("description", "");
  c.composite = compositeFromString(e.value("composite", "none"));
  const auto family = familyFromString(e.at("family").get<std::string>());
  if (family != Family::Convolution)
    c.attention = defaultAttnParams(s, e.at("embed_dim").get<double>(), e.at("heads").get<double>());
  if (family != Family::Attention)
    c.convolution = ConvSpec{s, e.at("half_width").get<double>(), e.at("channels").get<std::vector<double>>(), 2.0};
  c.inputs = defaultCompositeInputs(c.attention);
  return c;
}

PresetTable presetsFromJson(const json& doc) {
  PresetTable table;
  try {
    table.sigma = doc.value("sigma", 0.05);
    for (const auto& [name, entry] : doc.at("presets").items()) table.entries[name] = entry;
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed preset table: ") + e.what());
  }
  return table;
}

const PresetTable& builtinPresets() {
  static const PresetTable table = presetsFromJson(json::parse(detail::kBuiltinPresets));
  return table;
}

json toJson(const BoundReport& r) {
  json attention = nullptr, convolution = nullptr;
  if (r.attention)
    attention = {{"sigma", r.attention->sigma}, {"d", r.attention->d}, {"heads", r.attention->heads},
                 {"t", r.attention->t}, {"s", r.attention->s}};
  if (r.convolution)
    convolution = {{"sigma", r.convolution->sigma}, {"half_width", r.convolution->halfWidth},
                   {"channels", r.convolution->channels}, {"t", r.convolution->t}};
  return {
      {"name", r.name},
      {"description", r.description},
      {"family", toString(r.family)},
      {"composite", toString(r.composite)},
      {"params",
       {{"attention", attention},
        {"convolution", convolution},
        {"composite_inputs",
         {{"w1_norm", r.inputs.w1Norm}, {"w2_norm", r.inputs.w2Norm}, {"gamma_inf", r.inputs.gammaInf},
          {"bn_lip", r.inputs.bnLip}}}}},
      {"bounds",
       {{"attn_single_head", optionalJson(r.bounds.attnSingleHead)},
        {"attn_multi_head", optionalJson(r.bounds.attnMultiHead)},
        {"conv", optionalJson(r.bounds.conv)},
        {"tf", optionalJson(r.bounds.tf)},
        {"res", optionalJson(r.bounds.res)}}},
      {"orders",
       {{"attn", optionalJson(r.orders.attn)},
        {"mhattn", optionalJson(r.orders.mhattn)},
        {"conv", optionalJson(r.orders.conv)},
        {"tf", optionalJson(r.orders.tf)},
        {"res", optionalJson(r.orders.res)}}},
      {"probability", {{"attention", optionalJson(r.attnProbability)}, {"convolution", optionalJson(r.convProbability)}}},
      {"warnings", r.warnings},
  };
}

BoundReport boundReportFromJson(const json& doc) {
  try {
    BoundReport r;
    r.name = doc.value("name", "");
    r.description = doc.value("description", "");
    r.family = familyFromString(doc.at("family").get<std::string>());
    r.composite = compositeFromString(doc.at("composite").get<std::string>());
    const json& params = doc.at("params");
    if (const json& a = params.at("attention"); !a.is_null())
      r.attention = AttnParams{a.at("sigma"), a.at("d"), a.at("heads"), a.at("t"), a.at("s")};
    if (const json& c = params.at("convolution"); !c.is_null())
      r.convolution = ConvSpec{c.at("sigma"), c.at("half_width"), c.at("channels").get<std::vector<double>>(), c.at("t")};
    const json& ci = params.at("composite_inputs");
    r.inputs = {ci.at("w1_norm"), ci.at("w2_norm"), ci.at("gamma_inf"), ci.at("bn_lip")};
    const json& b = doc.at("bounds");
    r.bounds = {optionalValue(b, "attn_single_head"), optionalValue(b, "attn_multi_head"), optionalValue(b, "conv"),
                optionalValue(b, "tf"), optionalValue(b, "res")};
    const json& o = doc.at("orders");
    r.orders = {optionalValue(o, "attn"), optionalValue(o, "mhattn"), optionalValue(o, "conv"), optionalValue(o, "tf"),
                optionalValue(o, "res")};
    const json& pr = doc.at("probability");
    r.attnProbability = optionalValue(pr, "attention");
    r.convProbability = optionalValue(pr, "convolution");
    r.warnings = doc.value("warnings", std::vector<std::string>{});
    return r;
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed bound report: ") + e.what());
  }
}

namespace {

CategoryComparison compareValues(std::string name, double a, double b) {
  CategoryComparison c{std::move(name), a, b, 0.0, "equal"};
  c.ratio = b != 0.0 ? a / b : (a == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
  const double scale = std::max(std::abs(a), std::abs(b));
  if (std::abs(a - b) > 1e-12 * scale) c.smaller = a < b ? "a" : "b";
  return c;
}

void addIfBoth(std::vector<CategoryComparison>& out, const char* name, const std::optional<double>& a,
               const std::optional<double>& b) {
  if (a && b) out.push_back(compareValues(name, *a, *b));
}

}  // namespace

ComparisonReport compareArchitectures(const BoundReport& a, const BoundReport& b) {
  ComparisonReport out;
  out.nameA = a.name;
  out.nameB = b.name;
  addIfBoth(out.categories, "bound.attn_single_head", a.bounds.attnSingleHead, b.bounds.attnSingleHead);
  addIfBoth(out.categories, "bound.attn_multi_head", a.bounds.attnMultiHead, b.bounds.attnMultiHead);
  addIfBoth(out.categories, "bound.conv", a.bounds.conv, b.bounds.conv);
  addIfBoth(out.categories, "bound.tf", a.bounds.tf, b.bounds.tf);
  addIfBoth(out.categories, "bound.res", a.bounds.res, b.bounds.res);
  addIfBoth(out.categories, "order.attn", a.orders.attn, b.orders.attn);
  addIfBoth(out.categories, "order.mhattn", a.orders.mhattn, b.orders.mhattn);
  addIfBoth(out.categories, "order.conv", a.orders.conv, b.orders.conv);
  addIfBoth(out.categories, "order.tf", a.orders.tf, b.orders.tf);
  addIfBoth(out.categories, "order.res", a.orders.res, b.orders.res);

  out.headline = compareValues("headline_order", a.headlineOrder(), b.headlineOrder());
  if (out.headline.smaller == "equal") {
    out.verdict = "equal";
  } else {
    const BoundReport& winner = out.headline.smaller == "a" ? a : b;
    const BoundReport& loser = out.headline.smaller == "a" ? b : a;
    const bool crossFamily =
        winner.family != loser.family && winner.family != Family::Mixed && loser.family != Family::Mixed;
    out.verdict = (crossFamily ? toString(winner.family) : winner.name) + " smoother";
  }
  return out;
}

json toJson(const ComparisonReport& r) {
  auto entry = [](const CategoryComparison& c) {
    return json{{"category", c.name}, {"a", c.a}, {"b", c.b}, {"ratio", c.ratio}, {"smaller", c.smaller}};
  };
  json categories = json::array();
  for (const auto& c : r.categories) categories.push_back(entry(c));
  return {{"a", r.nameA}, {"b", r.nameB}, {"categories", categories}, {"headline", entry(r.headline)},
          {"verdict", r.verdict}};
}

}  // namespace topolip::bounds
