#include "topolip/diagram_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "topolip/error.hpp"

namespace topolip {

std::string formatReal(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

void writeDiagramCsv(const std::filesystem::path& path, const std::vector<PersistenceDiagram>& diagrams) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestionError("cannot open " + path.string() + " for writing");
  out << "hom_dim,birth,death\n";
  for (const auto& dg : diagrams)
    for (const auto& p : dg.pairs) out << dg.homDim << ',' << formatReal(p.birth) << ',' << formatReal(p.death) << '\n';
  if (!out) throw IngestionError("failed writing " + path.string());
}

namespace {

double parseReal(std::string_view field, const std::string& where) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) field.remove_suffix(1);
  if (field == "inf" || field == "+inf" || field == "Infinity") return kInfinity;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw IngestionError(where + ": cannot parse number '" + std::string(field) + "'");
  return value;
}

}  // namespace

std::vector<PersistenceDiagram> readDiagramCsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open diagram file " + path.string());
  std::vector<PersistenceDiagram> diagrams{{0, {}, kInfinity}, {1, {}, kInfinity}};
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty() || line == "\r") continue;
    if (lineNo == 1 && line.rfind("hom_dim", 0) == 0) continue;
    const std::string where = path.string() + ":" + std::to_string(lineNo);
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (std::size_t comma; (comma = rest.find(',')) != std::string_view::npos; rest.remove_prefix(comma + 1))
      fields.push_back(rest.substr(0, comma));
    fields.push_back(rest);
    if (fields.size() != 3) throw IngestionError(where + ": expected 3 columns (hom_dim,birth,death)");
    const double dim = parseReal(fields[0], where);
    if (dim != 0.0 && dim != 1.0) throw IngestionError(where + ": hom_dim must be 0 or 1");
    PersistencePair pair{parseReal(fields[1], where), parseReal(fields[2], where)};
    if (!std::isfinite(pair.birth) || pair.birth < 0.0 || !(pair.death >= pair.birth))
      throw IngestionError(where + ": invalid pair (need 0 <= birth <= death)");
    diagrams[static_cast<std::size_t>(dim)].pairs.push_back(pair);
  }
  for (auto& dg : diagrams) dg.canonicalize();
  return diagrams;
}

}  // namespace topolip
