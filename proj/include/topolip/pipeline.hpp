#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topolip/diagram_metrics.hpp"
#include "topolip/persistence.hpp"
#include "topolip/trace.hpp"

namespace topolip::pipeline {

using DiagramSet = std::vector<PersistenceDiagram>;  ///< index = homology dimension

struct PipelineConfig {
  std::string tracePath;
  Eigen::Index maxPoints = 256;
  std::uint64_t seed = 0;
  int maxDim = 1;
  std::optional<double> maxScale;  ///< unset: each layer's largest pairwise distance
  std::vector<double> exponents{1.0, 2.0};
  double epsilon = 1e-12;
  GroundNorm norm = GroundNorm::LInf;
  EssentialPolicy essential = EssentialPolicy::Drop;
  DimensionCombine combine = DimensionCombine::Sum;
  int gridSize = 101;
  bool timestamp = false;  ///< adds a wall-clock "generated_at" field to reports

  /// Throws ParameterError on out-of-range values.
  void validate() const;
};

struct ChangeRateLandscape {
  double p = 1.0;
  std::vector<double> distances;   ///< WD_1 .. WD_{L-1}
  std::vector<double> rates;       ///< length L-2
  std::vector<double> cumulative;  ///< prefix sums of rates
};

struct TopoLipReport {
  std::string modelName;
  ChangeRateLandscape landscape;
  double topoLip = 0.0;
  std::vector<double> normalizedCurve;
  PipelineConfig config;
};

/// Subsamples each layer and computes its Rips diagrams, in layer order.
/// Every layer uses the same seed, so equal-size layers keep the same rows.
std::vector<DiagramSet> layerDiagrams(const LayerTrace& trace, Eigen::Index maxPoints, std::uint64_t seed,
                                      int maxDim, std::optional<double> maxScale = std::nullopt);

/// WD_i = combined diagram distance between sets i and i+1.
std::vector<double> adjacentDistances(std::span<const DiagramSet> diagramSets, const DiagramDistanceOptions& options);

/// rates[i] = |WD_{i+1} - WD_i| / max(WD_i, epsilon).
std::vector<double> changeRates(std::span<const double> distances, double epsilon = 1e-12);

/// Maximum absolute change rate.
double topoLip(std::span<const double> rates);

std::vector<double> cumulativeRates(std::span<const double> rates);

/// Piecewise-linear resampling of a curve whose samples sit at equally spaced
/// abscissae on [0, 1], evaluated on gridSize uniform points. A single sample
/// gives a constant curve.
std::vector<double> normalizeDepth(std::span<const double> curve, int gridSize);

ChangeRateLandscape landscape(std::vector<double> distances, double p, double epsilon);

/// Full measurement on an in-memory trace: one report per configured exponent.
std::vector<TopoLipReport> runPipeline(const LayerTrace& trace, const PipelineConfig& config);

/// Loads the trace at config.tracePath (or tracePath) and runs it.
std::vector<TopoLipReport> runPipeline(const std::filesystem::path& tracePath, PipelineConfig config);

nlohmann::json toJson(const PipelineConfig& config);
/// Missing keys keep their defaults. Throws ParameterError on bad values.
PipelineConfig configFromJson(const nlohmann::json& doc, PipelineConfig base = {});
nlohmann::json toJson(const TopoLipReport& report);

/// A single report is written as an object; several as an array of objects.
std::string renderReports(const std::vector<TopoLipReport>& reports);
void writeReports(const std::filesystem::path& path, const std::vector<TopoLipReport>& reports);

}  // namespace topolip::pipeline
