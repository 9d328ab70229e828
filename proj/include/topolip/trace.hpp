#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "topolip/point_cloud.hpp"

namespace topolip::pipeline {

struct Layer {
  std::string name;
  PointCloud cloud;
};

/// Per-layer activation clouds of one model run. Layer widths may differ.
struct LayerTrace {
  std::string modelName;
  std::vector<Layer> layers;
  std::map<std::string, std::string> meta;

  /// Throws UsageError unless there are >= 2 layers with unique names.
  void validate() const;
};

enum class LayerFormat { Csv, F64 };

/// Loads manifest.json (the path may name the manifest itself or its
/// directory) and every referenced layer file. Layer file paths are relative
/// to the manifest. Format follows the extension: .csv or .f64 (raw
/// little-endian doubles, row-major rows x cols).
///
/// Throws IngestionError on missing files, parse failures, shape mismatches
/// and traces with fewer than two layers.
LayerTrace loadTrace(const std::filesystem::path& path);

/// Writes manifest.json plus one file per layer into directory. Used for
/// fixtures and by the tooling; the inverse of loadTrace.
void saveTrace(const LayerTrace& trace, const std::filesystem::path& directory, LayerFormat format = LayerFormat::Csv);

}  // namespace topolip::pipeline
