#include "topolip/trace.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "topolip/diagram_io.hpp"
#include "topolip/error.hpp"

namespace topolip::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;

void LayerTrace::validate() const {
  if (layers.size() < 2)
    throw UsageError("insufficient layers: a trace needs at least 2, got " + std::to_string(layers.size()));
  std::set<std::string> seen;
  for (const auto& layer : layers)
    if (!seen.insert(layer.name).second) throw UsageError("duplicate layer name '" + layer.name + "'");
}

namespace {

Eigen::MatrixXd readCsvLayer(const fs::path& file, Eigen::Index rows, Eigen::Index cols) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IngestionError("missing layer file " + file.string());
  Eigen::MatrixXd data(rows, cols);
  std::string line;
  Eigen::Index r = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (r >= rows)
      throw IngestionError("shape mismatch in " + file.string() + ": more than the " + std::to_string(rows) +
                           " rows declared in the manifest");
    const char* p = line.data();
    const char* end = p + line.size();
    Eigen::Index c = 0;
    for (;;) {
      while (p < end && *p == ' ') ++p;
      double value = 0.0;
      auto [next, ec] = std::from_chars(p, end, value);
      if (ec != std::errc())
        throw IngestionError(file.string() + ":" + std::to_string(r + 1) + ": cannot parse value");
      if (c >= cols)
        throw IngestionError("shape mismatch in " + file.string() + ": row " + std::to_string(r + 1) +
                             " has more than " + std::to_string(cols) + " columns");
      data(r, c++) = value;
      p = next;
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      if (*p != ',') throw IngestionError(file.string() + ":" + std::to_string(r + 1) + ": expected ','");
      ++p;
    }
    if (c != cols)
      throw IngestionError("shape mismatch in " + file.string() + ": row " + std::to_string(r + 1) + " has " +
                           std::to_string(c) + " columns, manifest declares " + std::to_string(cols));
    ++r;
  }
  if (r != rows)
    throw IngestionError("shape mismatch in " + file.string() + ": " + std::to_string(r) +
                         " rows, manifest declares " + std::to_string(rows));
  return data;
}

Eigen::MatrixXd readF64Layer(const fs::path& file, Eigen::Index rows, Eigen::Index cols) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IngestionError("missing layer file " + file.string());
  const auto expected = static_cast<std::uintmax_t>(rows * cols) * sizeof(double);
  const auto actual = fs::file_size(file);
  if (actual != expected)
    throw IngestionError("shape mismatch in " + file.string() + ": " + std::to_string(actual) + " bytes, manifest " +
                         std::to_string(rows) + "x" + std::to_string(cols) + " needs " + std::to_string(expected));
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajor data(rows, cols);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(expected));
  if (!in) throw IngestionError("short read from " + file.string());
  if constexpr (std::endian::native == std::endian::big) {
    for (Eigen::Index i = 0; i < data.size(); ++i) {
      auto bits = std::bit_cast<std::uint64_t>(data.data()[i]);
      bits = __builtin_bswap64(bits);
      data.data()[i] = std::bit_cast<double>(bits);
    }
  }
  return data;
}

void writeF64Layer(const fs::path& file, const Eigen::MatrixXd& points) {
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajor data = points;
  if constexpr (std::endian::native == std::endian::big) {
    for (Eigen::Index i = 0; i < data.size(); ++i)
      data.data()[i] = std::bit_cast<double>(__builtin_bswap64(std::bit_cast<std::uint64_t>(data.data()[i])));
  }
  std::ofstream out(file, std::ios::binary);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (!out) throw IngestionError("failed writing " + file.string());
}

void writeCsvLayer(const fs::path& file, const Eigen::MatrixXd& points) {
  std::ofstream out(file, std::ios::binary);
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    for (Eigen::Index c = 0; c < points.cols(); ++c) {
      if (c) out << ',';
      out << formatReal(points(r, c));
    }
    out << '\n';
  }
  if (!out) throw IngestionError("failed writing " + file.string());
}

template <typename T>
T field(const json& object, const char* key, const std::string& where) {
  auto it = object.find(key);
  if (it == object.end()) throw IngestionError(where + ": missing field '" + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw IngestionError(where + ": bad field '" + key + "': " + e.what());
  }
}

}  // namespace

LayerTrace loadTrace(const fs::path& path) {
  const fs::path manifest = fs::is_directory(path) ? path / "manifest.json" : path;
  std::ifstream in(manifest);
  if (!in) throw IngestionError("cannot open trace manifest " + manifest.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw IngestionError("malformed manifest " + manifest.string() + ": " + e.what());
  }
  const std::string where = manifest.string();
  if (!doc.is_object()) throw IngestionError(where + ": manifest must be a JSON object");

  LayerTrace trace;
  trace.modelName = field<std::string>(doc, "model_name", where);
  if (auto meta = doc.find("meta"); meta != doc.end() && meta->is_object()) {
    for (const auto& [key, value] : meta->items()) trace.meta[key] = value.is_string() ? value.get<std::string>() : value.dump();
  }
  const auto layers = field<json>(doc, "layers", where);
  if (!layers.is_array()) throw IngestionError(where + ": 'layers' must be an array");
  if (layers.size() < 2)
    throw IngestionError(where + ": insufficient layers (need at least 2, got " + std::to_string(layers.size()) + ")");

  const fs::path base = manifest.parent_path();
  for (const auto& entry : layers) {
    const auto name = field<std::string>(entry, "name", where);
    const auto file = field<std::string>(entry, "file", where);
    const auto rows = field<Eigen::Index>(entry, "rows", where);
    const auto cols = field<Eigen::Index>(entry, "cols", where);
    if (rows < 1 || cols < 1) throw IngestionError(where + ": layer '" + name + "' must have rows, cols >= 1");
    const fs::path layerPath = base / file;
    const auto ext = layerPath.extension().string();
    Eigen::MatrixXd points;
    if (ext == ".csv")
      points = readCsvLayer(layerPath, rows, cols);
    else if (ext == ".f64")
      points = readF64Layer(layerPath, rows, cols);
    else
      throw IngestionError(where + ": layer '" + name + "' has unsupported extension '" + ext + "'");
    try {
      trace.layers.push_back({name, PointCloud(std::move(points))});
    } catch (const UsageError& e) {
      throw IngestionError("layer '" + name + "': " + e.what());
    }
  }
  try {
    trace.validate();
  } catch (const UsageError& e) {
    throw IngestionError(where + ": " + e.what());
  }
  return trace;
}

void saveTrace(const LayerTrace& trace, const fs::path& directory, LayerFormat format) {
  fs::create_directories(directory);
  json layers = json::array();
  for (std::size_t i = 0; i < trace.layers.size(); ++i) {
    const auto& layer = trace.layers[i];
    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "layer_%03zu", i);
    const std::string file = std::string(prefix) + (format == LayerFormat::Csv ? ".csv" : ".f64");
    if (format == LayerFormat::Csv)
      writeCsvLayer(directory / file, layer.cloud.points());
    else
      writeF64Layer(directory / file, layer.cloud.points());
    layers.push_back({{"name", layer.name}, {"file", file}, {"rows", layer.cloud.size()}, {"cols", layer.cloud.dim()}});
  }
  json meta = json::object();
  for (const auto& [key, value] : trace.meta) meta[key] = value;
  const json doc = {{"model_name", trace.modelName}, {"layers", layers}, {"meta", meta}};
  std::ofstream out(directory / "manifest.json");
  out << doc.dump(2) << '\n';
  if (!out) throw IngestionError("failed writing manifest in " + directory.string());
}

}  // namespace topolip::pipeline
