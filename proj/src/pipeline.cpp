#include "topolip/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "topolip/error.hpp"
#include "topolip/parallel.hpp"

namespace topolip::pipeline {

using nlohmann::json;

void PipelineConfig::validate() const {
  if (maxPoints < 1) throw ParameterError("max_points must be >= 1");
  if (maxDim != 0 && maxDim != 1) throw ParameterError("max_dim must be 0 or 1");
  if (maxScale && !(*maxScale > 0.0)) throw ParameterError("max_scale must be positive");
  if (exponents.empty()) throw ParameterError("at least one Wasserstein exponent is required");
  for (double p : exponents)
    if (!(p >= 1.0)) throw ParameterError("Wasserstein exponent must satisfy p >= 1, got " + std::to_string(p));
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  if (gridSize < 2) throw ParameterError("grid_size must be >= 2");
}

std::vector<DiagramSet> layerDiagrams(const LayerTrace& trace, Eigen::Index maxPoints, std::uint64_t seed,
                                      int maxDim, std::optional<double> maxScale) {
  trace.validate();
  std::vector<DiagramSet> out(trace.layers.size());
  parallelFor(trace.layers.size(), [&](std::size_t i) {
    const PointCloud cloud = subsampleCloud(trace.layers[i].cloud, maxPoints, seed);
    const DistanceMatrix dist = pairwiseDistances(cloud);
    out[i] = maxScale ? ripsPersistence(dist, maxDim, *maxScale) : ripsPersistence(dist, maxDim);
  });
  return out;
}

std::vector<double> adjacentDistances(std::span<const DiagramSet> diagramSets, const DiagramDistanceOptions& options) {
  if (diagramSets.size() < 2) throw UsageError("adjacentDistances needs at least 2 diagram sets");
  std::vector<double> out(diagramSets.size() - 1);
  parallelFor(out.size(), [&](std::size_t i) {
    out[i] = combinedDiagramDistance(diagramSets[i], diagramSets[i + 1], options);
  });
  return out;
}

std::vector<double> changeRates(std::span<const double> distances, double epsilon) {
  if (distances.size() < 2)
    throw UsageError("change rates need at least 2 distances, got " + std::to_string(distances.size()));
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  std::vector<double> rates(distances.size() - 1);
  for (std::size_t i = 0; i + 1 < distances.size(); ++i)
    rates[i] = std::abs(distances[i + 1] - distances[i]) / std::max(distances[i], epsilon);
  return rates;
}

double topoLip(std::span<const double> rates) {
  if (rates.empty()) throw UsageError("TopoLip of an empty rate list is undefined");
  return *std::max_element(rates.begin(), rates.end());
}

std::vector<double> cumulativeRates(std::span<const double> rates) {
  std::vector<double> out(rates.size());
  std::partial_sum(rates.begin(), rates.end(), out.begin());
  return out;
}

std::vector<double> normalizeDepth(std::span<const double> curve, int gridSize) {
  if (gridSize < 2) throw ParameterError("gridSize must be >= 2, got " + std::to_string(gridSize));
  if (curve.empty()) throw UsageError("cannot normalize an empty curve");
  std::vector<double> out(static_cast<std::size_t>(gridSize));
  const auto last = curve.size() - 1;
  for (int g = 0; g < gridSize; ++g) {
    const double position = static_cast<double>(g) / (gridSize - 1) * static_cast<double>(last);
    const auto i = std::min(static_cast<std::size_t>(position), last);
    const double f = position - static_cast<double>(i);
    out[static_cast<std::size_t>(g)] = (i == last || f == 0.0) ? curve[i] : (1.0 - f) * curve[i] + f * curve[i + 1];
  }
  return out;
}

ChangeRateLandscape landscape(std::vector<double> distances, double p, double epsilon) {
  ChangeRateLandscape out;
  out.p = p;
  out.rates = changeRates(distances, epsilon);
  out.cumulative = cumulativeRates(out.rates);
  out.distances = std::move(distances);
  return out;
}

std::vector<TopoLipReport> runPipeline(const LayerTrace& trace, const PipelineConfig& config) {
  config.validate();
  const auto diagrams = layerDiagrams(trace, config.maxPoints, config.seed, config.maxDim, config.maxScale);
  std::vector<TopoLipReport> reports;
  for (double p : config.exponents) {
    const DiagramDistanceOptions options{p, config.norm, config.essential, config.combine};
    TopoLipReport report;
    report.modelName = trace.modelName;
    report.landscape = landscape(adjacentDistances(diagrams, options), p, config.epsilon);
    report.topoLip = topoLip(report.landscape.rates);
    report.normalizedCurve = normalizeDepth(report.landscape.rates, config.gridSize);
    report.config = config;
    reports.push_back(std::move(report));
  }
  return reports;
}

std::vector<TopoLipReport> runPipeline(const std::filesystem::path& tracePath, PipelineConfig config) {
  config.tracePath = tracePath.string();
  config.validate();
  return runPipeline(loadTrace(tracePath), config);
}

namespace {

const char* name(GroundNorm norm) { return norm == GroundNorm::LInf ? "linf" : "l2"; }
const char* name(EssentialPolicy policy) { return policy == EssentialPolicy::Drop ? "drop" : "cap"; }
const char* name(DimensionCombine combine) { return combine == DimensionCombine::Sum ? "sum" : "max"; }

template <typename T>
T get(const json& doc, const char* key, T fallback) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ParameterError(std::string("config field '") + key + "': " + e.what());
  }
}

json exponentToJson(double p) { return std::isinf(p) ? json("inf") : json(p); }

double exponentFromJson(const json& e) {
  if (e.is_number()) return e.get<double>();
  if (e.is_string() && e.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
  throw ParameterError("config field 'p': expected a number or \"inf\", got " + e.dump());
}

}  // namespace

json toJson(const PipelineConfig& c) {
  json doc = {
      {"trace", c.tracePath},
      {"max_points", c.maxPoints},
      {"seed", c.seed},
      {"max_dim", c.maxDim},
      {"max_scale", c.maxScale ? json(*c.maxScale) : json(nullptr)},
      {"p", [&] {
         json ps = json::array();
         for (double p : c.exponents) ps.push_back(exponentToJson(p));
         return ps;
       }()},
      {"epsilon", c.epsilon},
      {"ground_norm", name(c.norm)},
      {"essential", name(c.essential)},
      {"combine", name(c.combine)},
      {"grid_size", c.gridSize},
      {"timestamp", c.timestamp},
  };
  return doc;
}

PipelineConfig configFromJson(const json& doc, PipelineConfig c) {
  if (!doc.is_object()) throw ParameterError("pipeline config must be a JSON object");
  c.tracePath = get(doc, "trace", c.tracePath);
  c.maxPoints = get(doc, "max_points", c.maxPoints);
  c.seed = get(doc, "seed", c.seed);
  c.maxDim = get(doc, "max_dim", c.maxDim);
  if (auto it = doc.find("max_scale"); it != doc.end() && !it->is_null()) c.maxScale = get<double>(doc, "max_scale", 0.0);
  if (auto it = doc.find("p"); it != doc.end()) {
    c.exponents.clear();
    for (const auto& e : it->is_array() ? *it : json::array({*it})) c.exponents.push_back(exponentFromJson(e));
  }
  c.epsilon = get(doc, "epsilon", c.epsilon);
  c.gridSize = get(doc, "grid_size", c.gridSize);
  c.timestamp = get(doc, "timestamp", c.timestamp);

  const auto norm = get<std::string>(doc, "ground_norm", name(c.norm));
  if (norm != "linf" && norm != "l2") throw ParameterError("ground_norm must be 'linf' or 'l2'");
  c.norm = norm == "linf" ? GroundNorm::LInf : GroundNorm::L2;
  const auto essential = get<std::string>(doc, "essential", name(c.essential));
  if (essential != "drop" && essential != "cap") throw ParameterError("essential must be 'drop' or 'cap'");
  c.essential = essential == "drop" ? EssentialPolicy::Drop : EssentialPolicy::Cap;
  const auto combine = get<std::string>(doc, "combine", name(c.combine));
  if (combine != "sum" && combine != "max") throw ParameterError("combine must be 'sum' or 'max'");
  c.combine = combine == "sum" ? DimensionCombine::Sum : DimensionCombine::Max;
  c.validate();
  return c;
}

json toJson(const TopoLipReport& report) {
  json doc = {
      {"model_name", report.modelName},
      {"p", exponentToJson(report.landscape.p)},
      {"distances", report.landscape.distances},
      {"rates", report.landscape.rates},
      {"cumulative", report.landscape.cumulative},
      {"topolip", report.topoLip},
      {"normalized_curve", report.normalizedCurve},
      {"config", toJson(report.config)},
      {"seed", report.config.seed},
  };
  if (report.config.timestamp) {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    doc["generated_at"] = std::chrono::duration_cast<std::chrono::seconds>(now).count();
  }
  return doc;
}

std::string renderReports(const std::vector<TopoLipReport>& reports) {
  if (reports.size() == 1) return toJson(reports.front()).dump(2) + "\n";
  json all = json::array();
  for (const auto& r : reports) all.push_back(toJson(r));
  return all.dump(2) + "\n";
}

void writeReports(const std::filesystem::path& path, const std::vector<TopoLipReport>& reports) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestionError("cannot open " + path.string() + " for writing");
  out << renderReports(reports);
  if (!out) throw IngestionError("failed writing " + path.string());
}

}  // namespace topolip::pipeline
