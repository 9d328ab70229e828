#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "topolip/persistence.hpp"

namespace topolip {

/// Shortest decimal text that round-trips the double; "inf" for +inf.
std::string formatReal(double value);

/// Diagram CSV: header "hom_dim,birth,death", one pair per row, +inf as "inf".
void writeDiagramCsv(const std::filesystem::path& path, const std::vector<PersistenceDiagram>& diagrams);

/// Reads a diagram CSV into diagrams for H0 and H1 (index = dimension).
/// maxScale of the result is +inf since the file does not record it.
std::vector<PersistenceDiagram> readDiagramCsv(const std::filesystem::path& path);

}  // namespace topolip
