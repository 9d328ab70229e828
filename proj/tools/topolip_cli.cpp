// topolip: command-line frontend.
//
//   topolip ph TRACE -o DIR          per-layer Rips diagrams as CSV + index.json
//   topolip dist A.csv B.csv         diagram distance
//   topolip run TRACE                TopoLip report
//   topolip bounds --preset NAME     theoretical bounds and orders
//   topolip simulate --map attention empirical W1 sup-ratio vs bound
//   topolip compare A.json B.json    verdict between two bound reports
//
// Exit codes: 0 success, 2 usage/parameter, 3 ingestion, 4 internal.
// TOPOLIP_THREADS caps the worker count.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "topolip/bounds.hpp"
#include "topolip/diagram_io.hpp"
#include "topolip/diagram_metrics.hpp"
#include "topolip/error.hpp"
#include "topolip/meanfield.hpp"
#include "topolip/pipeline.hpp"
#include "topolip/trace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode : int { kOk = 0, kUsage = 2, kIngestion = 3, kInternal = 4 };

json readJsonFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw topolip::UsageError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw topolip::UsageError(path.string() + ": invalid JSON: " + e.what());
  }
}

// A config file may be a bare config object or an earlier output that embeds
// one under key (a report array contributes its first element).
json configSection(json doc, const char* key) {
  if (doc.is_array() && !doc.empty()) doc = doc.front();
  if (doc.is_object() && doc.contains(key)) return doc[key];
  return doc;
}

void emit(const std::string& text, const std::string& outPath) {
  if (outPath.empty() || outPath == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(outPath, std::ios::binary);
  if (!out) throw topolip::IngestionError("cannot open " + outPath + " for writing");
  out << text;
  if (!out) throw topolip::IngestionError("failed writing " + outPath);
}

std::string render(const json& doc) { return doc.dump(2) + "\n"; }

// Missing traces are usage errors; anything wrong inside one is ingestion.
void requireManifest(const std::string& tracePath) {
  if (tracePath.empty()) throw topolip::UsageError("no trace given");
  fs::path manifest = tracePath;
  if (fs::is_directory(manifest)) manifest /= "manifest.json";
  if (!fs::exists(manifest)) throw topolip::UsageError("trace manifest not found: " + manifest.string());
}

// ---------------------------------------------------------------- pipeline

struct PipelineFlags {
  std::string trace;
  std::string configPath;
  std::optional<Eigen::Index> maxPoints;
  std::optional<std::uint64_t> seed;
  std::optional<int> maxDim;
  std::optional<double> maxScale;
  std::vector<std::string> exponents;
  std::optional<double> epsilon;
  std::optional<std::string> ground, essential, combine;
  std::optional<int> gridSize;
  bool timestamp = false;
  std::string out;
};

void addTraceFlags(CLI::App* cmd, PipelineFlags& f) {
  cmd->add_option("trace", f.trace, "Trace directory or manifest.json");
  cmd->add_option("--config", f.configPath, "JSON config (a previous report is accepted)");
  cmd->add_option("--max-points", f.maxPoints, "Subsample size per layer");
  cmd->add_option("--seed", f.seed, "Subsampling seed");
  cmd->add_option("--max-dim", f.maxDim, "Highest homology dimension (0 or 1)");
  cmd->add_option("--max-scale", f.maxScale, "Filtration cutoff (default: per-layer diameter)");
}

double parseExponent(const std::string& text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  std::istringstream in(text);
  if (!(in >> value) || !in.eof()) throw topolip::UsageError("--p: not a number: " + text);
  return value;
}

topolip::pipeline::PipelineConfig resolvePipeline(const PipelineFlags& f) {
  topolip::pipeline::PipelineConfig base;
  json overrides = json::object();
  if (!f.configPath.empty()) overrides = configSection(readJsonFile(f.configPath), "config");
  if (!overrides.is_object()) throw topolip::UsageError("config must be a JSON object");
  if (!f.trace.empty()) overrides["trace"] = f.trace;
  if (f.maxPoints) overrides["max_points"] = *f.maxPoints;
  if (f.seed) overrides["seed"] = *f.seed;
  if (f.maxDim) overrides["max_dim"] = *f.maxDim;
  if (f.maxScale) overrides["max_scale"] = *f.maxScale;
  if (!f.exponents.empty()) {
    json ps = json::array();
    for (const auto& p : f.exponents) {
      const double v = parseExponent(p);
      ps.push_back(std::isinf(v) ? json("inf") : json(v));
    }
    overrides["p"] = ps;
  }
  if (f.epsilon) overrides["epsilon"] = *f.epsilon;
  if (f.ground) overrides["ground_norm"] = *f.ground;
  if (f.essential) overrides["essential"] = *f.essential;
  if (f.combine) overrides["combine"] = *f.combine;
  if (f.gridSize) overrides["grid_size"] = *f.gridSize;
  if (f.timestamp) overrides["timestamp"] = true;
  return topolip::pipeline::configFromJson(overrides, base);
}

int cmdPh(const PipelineFlags& f, const std::string& outDir) {
  const auto config = resolvePipeline(f);
  requireManifest(config.tracePath);
  const auto trace = topolip::pipeline::loadTrace(config.tracePath);
  const auto sets = topolip::pipeline::layerDiagrams(trace, config.maxPoints, config.seed, config.maxDim,
                                                     config.maxScale);

  fs::create_directories(outDir);
  json layers = json::array();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    char file[32];
    std::snprintf(file, sizeof file, "layer_%03zu.csv", i);
    topolip::writeDiagramCsv(fs::path(outDir) / file, sets[i]);
    json pairs = json::array();
    for (const auto& dg : sets[i]) pairs.push_back(dg.pairs.size());
    layers.push_back({{"index", i},
                      {"name", trace.layers[i].name},
                      {"file", file},
                      {"points", trace.layers[i].cloud.size()},
                      {"dim", trace.layers[i].cloud.dim()},
                      {"pairs", pairs},
                      {"max_scale", sets[i].front().maxScale}});
  }
  json index = {{"model_name", trace.modelName},
                {"layers", layers},
                {"max_points", config.maxPoints},
                {"seed", config.seed},
                {"config", topolip::pipeline::toJson(config)}};
  emit(render(index), (fs::path(outDir) / "index.json").string());
  return kOk;
}

int cmdRun(const PipelineFlags& f) {
  const auto config = resolvePipeline(f);
  requireManifest(config.tracePath);
  emit(topolip::pipeline::renderReports(topolip::pipeline::runPipeline(config.tracePath, config)), f.out);
  return kOk;
}

// -------------------------------------------------------------------- dist

struct DistFlags {
  std::string a, b;
  std::optional<double> p;
  bool bottleneck = false;
  std::optional<int> homDim;
  std::optional<double> capAt;
  std::string ground = "linf";
  std::string combine = "sum";
  bool asJson = false;
};

topolip::PersistenceDiagram prepare(topolip::PersistenceDiagram dg, const DistFlags& f) {
  if (f.capAt) {
    if (!(*f.capAt > 0.0)) throw topolip::ParameterError("--cap-at must be positive");
    dg.maxScale = *f.capAt;
    return topolip::finitePart(dg, topolip::EssentialPolicy::Cap);
  }
  return topolip::finitePart(dg, topolip::EssentialPolicy::Drop);
}

int cmdDist(const DistFlags& f) {
  const double p = f.bottleneck ? std::numeric_limits<double>::infinity() : f.p.value_or(1.0);
  if (!(p >= 1.0)) throw topolip::ParameterError("--p must be >= 1 (got " + topolip::formatReal(p) + ")");
  if (f.ground != "linf" && f.ground != "l2") throw topolip::UsageError("--ground must be linf or l2");
  if (f.combine != "sum" && f.combine != "max") throw topolip::UsageError("--combine must be sum or max");
  const auto norm = f.ground == "linf" ? topolip::GroundNorm::LInf : topolip::GroundNorm::L2;

  auto da = topolip::readDiagramCsv(f.a);
  auto db = topolip::readDiagramCsv(f.b);
  for (auto& dg : da) dg = prepare(dg, f);
  for (auto& dg : db) dg = prepare(dg, f);

  double value = 0.0;
  if (f.homDim) {
    if (*f.homDim < 0 || *f.homDim > 1) throw topolip::ParameterError("--hom-dim must be 0 or 1");
    const auto& x = da[static_cast<std::size_t>(*f.homDim)];
    const auto& y = db[static_cast<std::size_t>(*f.homDim)];
    value = std::isinf(p) ? topolip::bottleneckDistance(x, y, norm).value
                          : topolip::diagramWasserstein(x, y, p, norm).value;
  } else {
    double acc = 0.0;
    for (std::size_t d = 0; d < da.size(); ++d) {
      const double v = std::isinf(p) ? topolip::bottleneckDistance(da[d], db[d], norm).value
                                     : topolip::diagramWasserstein(da[d], db[d], p, norm).value;
      acc = f.combine == "sum" ? acc + v : std::max(acc, v);
    }
    value = acc;
  }

  if (!f.asJson) {
    std::cout << topolip::formatReal(value) << "\n";
    return kOk;
  }
  json config = {{"a", f.a},
                 {"b", f.b},
                 {"p", std::isinf(p) ? json("inf") : json(p)},
                 {"hom_dim", f.homDim ? json(*f.homDim) : json(nullptr)},
                 {"cap_at", f.capAt ? json(*f.capAt) : json(nullptr)},
                 {"ground_norm", f.ground},
                 {"combine", f.combine}};
  std::cout << render({{"distance", value}, {"config", config}, {"seed", nullptr}});
  return kOk;
}

// ------------------------------------------------------------------ bounds

struct BoundsFlags {
  std::string configPath;
  std::optional<std::string> preset;
  std::optional<std::string> presetsFile;
  std::optional<double> sigma, d, heads, halfWidth, channels, t, s, convT;
  bool list = false;
  std::string out;
};

template <typename T>
void overlay(std::optional<T>& field, const json& doc, const char* key) {
  if (field || !doc.contains(key) || doc[key].is_null()) return;
  try {
    field = doc[key].get<T>();
  } catch (const json::exception& e) {
    throw topolip::ParameterError(std::string("config field '") + key + "': " + e.what());
  }
}

template <typename T>
json optionalJson(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

int cmdBounds(BoundsFlags f) {
  if (!f.configPath.empty()) {
    const json doc = configSection(readJsonFile(f.configPath), "config");
    if (!doc.is_object()) throw topolip::UsageError("config must be a JSON object");
    overlay(f.preset, doc, "preset");
    overlay(f.presetsFile, doc, "presets");
    overlay(f.sigma, doc, "sigma");
    overlay(f.d, doc, "d");
    overlay(f.heads, doc, "M");
    overlay(f.halfWidth, doc, "k");
    overlay(f.channels, doc, "C");
    overlay(f.t, doc, "t");
    overlay(f.s, doc, "s");
    overlay(f.convT, doc, "conv_t");
  }

  const auto table = f.presetsFile ? topolip::bounds::presetsFromJson(readJsonFile(*f.presetsFile))
                                   : topolip::bounds::builtinPresets();
  if (f.list) {
    json names = json::array();
    for (const auto& n : table.names()) names.push_back({{"name", n}, {"description", table.config(n).description}});
    emit(render(names), f.out);
    return kOk;
  }
  if (f.sigma && !(*f.sigma > 0.0)) throw topolip::ParameterError("--sigma must be positive");

  topolip::bounds::ArchitectureConfig arch;
  const bool explicitDims = f.d || f.heads || f.halfWidth || f.channels;
  if (f.preset) {
    if (explicitDims) throw topolip::UsageError("--preset excludes --d/--M/--k/--C");
    arch = table.config(*f.preset, f.sigma);
  } else {
    if (!explicitDims) throw topolip::UsageError("bounds needs --preset or explicit --d/--M and/or --k/--C");
    const double sigma = f.sigma.value_or(table.sigma);
    arch.name = "custom";
    if (f.d || f.heads) {
      if (!f.d) throw topolip::UsageError("--M requires --d");
      arch.attention = topolip::bounds::defaultAttnParams(sigma, *f.d, f.heads.value_or(1.0));
    }
    if (f.halfWidth || f.channels) {
      if (!f.channels) throw topolip::UsageError("--k requires --C");
      arch.convolution = topolip::bounds::ConvSpec{sigma, f.halfWidth.value_or(1.0), {*f.channels}, 2.0};
    }
  }
  if ((f.t || f.s) && !arch.attention) throw topolip::UsageError("--t/--s need an attention part");
  if (f.convT && !arch.convolution) throw topolip::UsageError("--conv-t needs a convolution part");
  if (f.t) arch.attention->t = *f.t;
  if (f.s) arch.attention->s = *f.s;
  if (f.convT) arch.convolution->t = *f.convT;
  arch.inputs = topolip::bounds::defaultCompositeInputs(arch.attention);

  json doc = topolip::bounds::toJson(topolip::bounds::computeBounds(arch));
  doc["config"] = {{"preset", optionalJson(f.preset)}, {"presets", optionalJson(f.presetsFile)},
                   {"sigma", optionalJson(f.sigma)},   {"d", optionalJson(f.d)},
                   {"M", optionalJson(f.heads)},       {"k", optionalJson(f.halfWidth)},
                   {"C", optionalJson(f.channels)},    {"t", optionalJson(f.t)},
                   {"s", optionalJson(f.s)},           {"conv_t", optionalJson(f.convT)}};
  doc["seed"] = nullptr;
  emit(render(doc), f.out);
  return kOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateFlags {
  std::string configPath;
  std::optional<std::string> map;
  std::optional<std::size_t> pairs;
  std::optional<std::uint64_t> seed;
  std::optional<double> d, n, sigma, t, s, channels, halfWidth, height, width, factor;
  std::string out;
};

int cmdSimulate(SimulateFlags f) {
  if (!f.configPath.empty()) {
    const json doc = configSection(readJsonFile(f.configPath), "params");
    if (!doc.is_object()) throw topolip::UsageError("config must be a JSON object");
    overlay(f.map, doc, "map");
    overlay(f.pairs, doc, "pairs");
    overlay(f.seed, doc, "seed");
    overlay(f.d, doc, "d");
    overlay(f.n, doc, "n");
    overlay(f.sigma, doc, "sigma");
    overlay(f.t, doc, "t");
    overlay(f.s, doc, "s");
    overlay(f.channels, doc, "C");
    overlay(f.halfWidth, doc, "k");
    overlay(f.height, doc, "height");
    overlay(f.width, doc, "width");
    overlay(f.factor, doc, "factor");
  }
  namespace mf = topolip::meanfield;
  const std::string map = f.map.value_or("attention");
  const std::size_t pairs = f.pairs.value_or(200);
  const std::uint64_t seed = f.seed.value_or(0);
  const double sigma = f.sigma.value_or(0.05);
  if (pairs < 1) throw topolip::ParameterError("--pairs must be at least 1");
  if (!(sigma > 0.0)) throw topolip::ParameterError("--sigma must be positive");

  auto count = [](double v, const char* flag) {
    if (!(v >= 1.0) || v != std::floor(v)) throw topolip::ParameterError(std::string(flag) + " must be a positive integer");
    return static_cast<Eigen::Index>(v);
  };

  json params = {{"map", map}, {"pairs", pairs}, {"seed", seed}, {"sigma", sigma}};
  json result;
  if (map == "conv") {
    topolip::bounds::ConvParams cp;
    cp.sigma = sigma;
    cp.channels = static_cast<double>(count(f.channels.value_or(4), "--C"));
    cp.halfWidth = f.halfWidth.value_or(1);
    cp.t = f.t.value_or(2.0);
    if (cp.halfWidth < 0 || cp.halfWidth != std::floor(cp.halfWidth))
      throw topolip::ParameterError("--k must be a non-negative integer");
    const auto h = count(f.height.value_or(4), "--height");
    const auto w = count(f.width.value_or(4), "--width");
    const auto check = mf::checkConvBound(cp, h, w, pairs, seed);
    params.update({{"C", cp.channels}, {"k", cp.halfWidth}, {"t", cp.t}, {"height", h}, {"width", w}});
    result = {{"supRatio", check.supRatio},
              {"theoreticalBound", check.bound},
              {"probability", check.probability},
              {"ratios", check.ratios},
              {"warnings", check.warnings}};
  } else {
    const auto d = count(f.d.value_or(4), "--d");
    const auto n = count(f.n.value_or(32), "--n");
    auto ap = topolip::bounds::defaultAttnParams(sigma, static_cast<double>(d), 1.0);
    if (f.t) ap.t = *f.t;
    if (f.s) ap.s = *f.s;
    params.update({{"d", d}, {"n", n}, {"t", ap.t}});
    if (map == "attention") {
      params["s"] = ap.s;
      const auto check = mf::checkAttentionBound(ap, n, pairs, seed);
      result = {{"supRatio", check.supRatio},
                {"theoreticalBound", check.bound},
                {"probability", check.probability},
                {"ratios", check.ratios},
                {"warnings", check.warnings}};
    } else {
      mf::MeasureMap fn;
      double bound = 0.0;
      if (map == "identity") {
        fn = [](const mf::EmpiricalMeasure& mu) { return mu; };
        bound = 1.0;
      } else if (map == "scale") {
        const double c = f.factor.value_or(2.0);
        params["factor"] = c;
        fn = [c](const mf::EmpiricalMeasure& mu) { return mf::EmpiricalMeasure{c * mu.atoms}; };
        bound = std::abs(c);
      } else if (map == "constant") {
        fn = [](const mf::EmpiricalMeasure& mu) {
          return mf::EmpiricalMeasure{Eigen::MatrixXd::Zero(mu.dim(), mu.size())};
        };
      } else {
        throw topolip::UsageError("--map must be identity, scale, constant, attention or conv");
      }
      const double t = ap.t;
      auto est = mf::estimateLipschitzW1(
          fn, [&](std::uint64_t s) { return mf::sampleMeasurePair(d, n, sigma, t, s); }, pairs, seed);
      result = {{"supRatio", est.supRatio},
                {"theoreticalBound", bound},
                {"probability", 1.0},
                {"ratios", est.ratios},
                {"warnings", json::array()}};
    }
  }
  result["params"] = params;
  result["seed"] = seed;
  emit(render(result), f.out);
  return kOk;
}

// ----------------------------------------------------------------- compare

topolip::bounds::BoundReport loadBoundReport(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw topolip::UsageError("cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw topolip::IngestionError(path + ": invalid JSON: " + e.what());
  }
  try {
    return topolip::bounds::boundReportFromJson(doc);
  } catch (const topolip::UsageError& e) {
    throw topolip::IngestionError(path + ": " + e.what());
  }
}

int cmdCompare(const std::string& a, const std::string& b, const std::string& out) {
  const auto report = topolip::bounds::compareArchitectures(loadBoundReport(a), loadBoundReport(b));
  json doc = topolip::bounds::toJson(report);
  doc["config"] = {{"a", a}, {"b", b}};
  doc["seed"] = nullptr;
  emit(render(doc), out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TopoLip: topological and theoretical Lipschitz analysis of layered models"};
  app.require_subcommand(1);

  PipelineFlags phFlags;
  std::string phOut = "diagrams";
  auto* ph = app.add_subcommand("ph", "Per-layer Rips persistence diagrams");
  addTraceFlags(ph, phFlags);
  ph->add_option("-o,--out-dir", phOut, "Output directory")->capture_default_str();

  DistFlags distFlags;
  auto* dist = app.add_subcommand("dist", "Distance between two diagram CSV files");
  dist->add_option("a", distFlags.a, "First diagram CSV")->required();
  dist->add_option("b", distFlags.b, "Second diagram CSV")->required();
  auto* pOpt = dist->add_option("--p", distFlags.p, "Wasserstein exponent (>= 1)");
  auto* bnOpt = dist->add_flag("--bottleneck", distFlags.bottleneck, "Bottleneck distance");
  pOpt->excludes(bnOpt);
  dist->add_option("--hom-dim", distFlags.homDim, "Single homology dimension (default: combine all)");
  dist->add_option("--cap-at", distFlags.capAt, "Cap essential classes at this scale (default: drop)");
  dist->add_option("--ground", distFlags.ground, "Ground metric: linf or l2")->capture_default_str();
  dist->add_option("--combine", distFlags.combine, "Across dimensions: sum or max")->capture_default_str();
  dist->add_flag("--json", distFlags.asJson, "Print a JSON record");

  PipelineFlags runFlags;
  auto* run = app.add_subcommand("run", "TopoLip report for a layer trace");
  addTraceFlags(run, runFlags);
  run->add_option("--p", runFlags.exponents, "Exponents (repeatable; 'inf' for bottleneck)");
  run->add_option("--epsilon", runFlags.epsilon, "Denominator guard for change rates");
  run->add_option("--ground", runFlags.ground, "Ground metric: linf or l2");
  run->add_option("--essential", runFlags.essential, "Essential classes: drop or cap");
  run->add_option("--combine", runFlags.combine, "Across dimensions: sum or max");
  run->add_option("--grid-size", runFlags.gridSize, "Normalized depth grid size");
  run->add_flag("--timestamp", runFlags.timestamp, "Add a generated_at field");
  run->add_option("-o,--out", runFlags.out, "Output file (default stdout)");

  BoundsFlags boundsFlags;
  auto* bnd = app.add_subcommand("bounds", "Theoretical Lipschitz bounds and asymptotic orders");
  bnd->add_option("--config", boundsFlags.configPath, "JSON config (a previous report is accepted)");
  auto* presetOpt = bnd->add_option("--preset", boundsFlags.preset, "Architecture preset");
  bnd->add_option("--presets", boundsFlags.presetsFile, "Preset table JSON (default: built-in)");
  bnd->add_flag("--list", boundsFlags.list, "List presets");
  bnd->add_option("--sigma", boundsFlags.sigma, "Weight standard deviation");
  for (auto* opt : {bnd->add_option("--d", boundsFlags.d, "Embedding dimension"),
                    bnd->add_option("--M", boundsFlags.heads, "Attention heads"),
                    bnd->add_option("--k", boundsFlags.halfWidth, "Filter half-width"),
                    bnd->add_option("--C", boundsFlags.channels, "Channels")})
    presetOpt->excludes(opt);
  bnd->add_option("--t", boundsFlags.t, "Attention support radius factor");
  bnd->add_option("--s", boundsFlags.s, "Operator-norm slack");
  bnd->add_option("--conv-t", boundsFlags.convT, "Convolution support factor");
  bnd->add_option("-o,--out", boundsFlags.out, "Output file (default stdout)");

  SimulateFlags simFlags;
  auto* sim = app.add_subcommand("simulate", "Empirical W1 Lipschitz ratio of a mean-field map");
  sim->add_option("--config", simFlags.configPath, "JSON config (a previous result is accepted)");
  sim->add_option("--map", simFlags.map, "identity, scale, constant, attention or conv");
  sim->add_option("--pairs", simFlags.pairs, "Number of measure pairs");
  sim->add_option("--seed", simFlags.seed, "Seed");
  sim->add_option("--d", simFlags.d, "Atom dimension");
  sim->add_option("--n", simFlags.n, "Atoms per measure");
  sim->add_option("--sigma", simFlags.sigma, "Weight and atom scale");
  sim->add_option("--t", simFlags.t, "Support radius factor");
  sim->add_option("--s", simFlags.s, "Operator-norm slack (attention)");
  sim->add_option("--C", simFlags.channels, "Channel atoms (conv)");
  sim->add_option("--k", simFlags.halfWidth, "Filter half-width (conv)");
  sim->add_option("--height", simFlags.height, "Grid height (conv)");
  sim->add_option("--width", simFlags.width, "Grid width (conv)");
  sim->add_option("--factor", simFlags.factor, "Scale factor (scale map)");
  sim->add_option("-o,--out", simFlags.out, "Output file (default stdout)");

  std::string cmpA, cmpB, cmpOut;
  auto* cmp = app.add_subcommand("compare", "Compare two bound reports");
  cmp->add_option("a", cmpA, "First BoundReport JSON")->required();
  cmp->add_option("b", cmpB, "Second BoundReport JSON")->required();
  cmp->add_option("-o,--out", cmpOut, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (ph->parsed()) return cmdPh(phFlags, phOut);
    if (dist->parsed()) return cmdDist(distFlags);
    if (run->parsed()) return cmdRun(runFlags);
    if (bnd->parsed()) return cmdBounds(boundsFlags);
    if (sim->parsed()) return cmdSimulate(simFlags);
    if (cmp->parsed()) return cmdCompare(cmpA, cmpB, cmpOut);
  } catch (const std::invalid_argument& e) {  // UsageError, ParameterError
    std::cerr << "topolip: error: " << e.what() << "\n";
    return kUsage;
  } catch (const topolip::IngestionError& e) {
    std::cerr << "topolip: ingestion error: " << e.what() << "\n";
    return kIngestion;
  } catch (const std::exception& e) {
    std::cerr << "topolip: internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
