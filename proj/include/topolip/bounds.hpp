#pragma once

#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace topolip::bounds {

/// Mean-field attention setting: weights ~ N(0, sigma^2), tokens certified in
/// the ball of radius t*sigma, s the singular-value slack.
struct AttnParams {
  double sigma = 0.05;
  double d = 1;      ///< embedding dimension
  double heads = 1;  ///< M
  double t = 2;
  double s = 0.15;
};

/// Mean-field convolution setting: C channels, (2k+1)x(2k+1) filters.
struct ConvParams {
  double sigma = 0.05;
  double channels = 1;   ///< C
  double halfWidth = 1;  ///< k
  double t = 2;
};

/// Norm inputs of the Pre-LN Transformer and bottleneck composites.
struct CompositeInputs {
  double w1Norm = 0.0;  ///< |W_1|_op of the MLP
  double w2Norm = 0.0;  ///< |W_2|_op of the MLP
  double gammaInf = 1.0;
  double bnLip = 1.0;   ///< Lipschitz constant assumed for batch norm
};

// Closed forms evaluated as printed, with no domain checks. Degenerate
// arguments (sigma = 0, s = 0, ...) are allowed here.
double attnSingleHeadFormula(double sigma, double d, double t, double s);
double attnMultiHeadFormula(double sigma, double d, double heads, double t, double s);
double convFormula(double sigma, double channels, double halfWidth, double t);

/// 2 t s (2 s sqrt(d) + s')(1 + t s d^{-1/2} (2 s sqrt(d) + s')^2) with
/// s = sigma, s' = slack. Throws ParameterError unless sigma, d, M, t > 0 and
/// s >= 0.
double attnSingleHeadBound(const AttnParams& p);
/// 2 t sigma sqrt(M) (2 sigma sqrt(d) + s)^2 (1 + t sigma sqrt(M/d) (2 sigma sqrt(d) + s)^2)
double attnMultiHeadBound(const AttnParams& p);
/// (2k+1) sqrt(t sigma C (1 + 1/((2k+1) sqrt(C)))). Requires k >= 0.
double convBound(const ConvParams& p);

/// min{1 - d/t^2, 1 - 2 exp(-s^2 / (2 sigma^2))}, clamped at 0.
double attnProbability(const AttnParams& p);
/// 1 - 1/t^2, clamped at 0.
double convProbability(const ConvParams& p);
/// Human-readable notes on hypotheses the parameters fail to certify
/// (t <= sqrt(d), small slack, |A|_op >= 2/sigma^2 not certifiable).
std::vector<std::string> attnWarnings(const AttnParams& p);

struct AsymptoticOrders {
  double attn = 0.0;    ///< sigma^5 d^2
  double mhattn = 0.0;  ///< sigma^6 d^{5/2} M
  double conv = 0.0;    ///< k sqrt(sigma C)
};

AsymptoticOrders asymptoticOrders(double sigma, double d, double heads, double halfWidth, double channels);
/// max{1, sigma^3 d^{3/2} M, sigma^7 d^3 M, sigma^10 d^{9/2} M}
double tfOrder(double sigma, double d, double heads);
/// max{1, k^3 sigma^{5/2} C^3}
double resOrder(double sigma, double halfWidth, double channels);

/// (|W1| |W2| |gamma|_inf + 1)(1 + |gamma|_inf mhattn)
double tfBound(double mhattn, const CompositeInputs& c);
/// 1 + conv^3 bnLip^3
double resBound(double conv, double bnLip);

enum class Family { Attention, Convolution, Mixed };
enum class Composite { None, Transformer, Residual };

/// Convolution part of an architecture: one filter size, a channel ladder.
struct ConvSpec {
  double sigma = 0.05;
  double halfWidth = 1;
  std::vector<double> channels;  ///< per-layer output channels
  double t = 2;
};

struct ArchitectureConfig {
  std::string name;
  std::string description;
  Composite composite = Composite::None;
  std::optional<AttnParams> attention;
  std::optional<ConvSpec> convolution;
  CompositeInputs inputs;
};

struct BoundValues {
  std::optional<double> attnSingleHead, attnMultiHead, conv, tf, res;
};

struct OrderValues {
  std::optional<double> attn, mhattn, conv, tf, res;
};

struct BoundReport {
  std::string name;
  std::string description;
  Family family = Family::Attention;
  Composite composite = Composite::None;
  std::optional<AttnParams> attention;
  std::optional<ConvSpec> convolution;
  CompositeInputs inputs;
  BoundValues bounds;
  OrderValues orders;
  std::optional<double> attnProbability, convProbability;
  std::vector<std::string> warnings;

  /// Order used for the smoothness verdict: the composite order when there
  /// is one, otherwise the layer order of the family.
  double headlineOrder() const;
};

/// Evaluates every bound and order the configuration supports. The
/// convolution bound is taken at the widest layer of the ladder.
BoundReport computeBounds(const ArchitectureConfig& config);

/// Attention defaults: t = 2 sqrt(d), s = 3 sigma.
AttnParams defaultAttnParams(double sigma, double d, double heads);
/// Composite defaults: |W1|, |W2| at the certified operator-norm bound
/// 2 sigma sqrt(d) + s (1 when there is no attention part), |gamma|_inf = 1,
/// Lip(BN) = |gamma|_inf.
CompositeInputs defaultCompositeInputs(const std::optional<AttnParams>& attention);

struct PresetTable {
  double sigma = 0.05;
  std::map<std::string, nlohmann::json> entries;

  std::vector<std::string> names() const;
  /// Throws UsageError for unknown names. sigma overrides the table default.
  ArchitectureConfig config(const std::string& name, std::optional<double> sigma = std::nullopt) const;
};

PresetTable presetsFromJson(const nlohmann::json& doc);
/// The table shipped in data/presets.json, compiled into the library.
const PresetTable& builtinPresets();

struct CategoryComparison {
  std::string name;
  double a = 0.0;
  double b = 0.0;
  double ratio = 0.0;     ///< a / b
  std::string smaller;    ///< "a", "b" or "equal"
};

struct ComparisonReport {
  std::string nameA, nameB;
  std::vector<CategoryComparison> categories;
  CategoryComparison headline;
  std::string verdict;
};

/// Per-category comparison of two reports plus a verdict on the headline
/// order: "attention smoother" / "convolution smoother" across families,
/// "<name> smoother" within one, "equal" on ties.
ComparisonReport compareArchitectures(const BoundReport& a, const BoundReport& b);

nlohmann::json toJson(const BoundReport& report);
BoundReport boundReportFromJson(const nlohmann::json& doc);
nlohmann::json toJson(const ComparisonReport& report);

std::string toString(Family family);
std::string toString(Composite composite);

}  // namespace topolip::bounds
