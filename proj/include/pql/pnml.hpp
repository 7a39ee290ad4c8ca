#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pql/petri.hpp"

namespace pql {

struct PnmlResult {
  NetSystem system;
  std::vector<std::string> warnings;
};

// Reads the first net of a PNML document. Places may carry
// initialMarking/text, transitions name/text (absent name means silent),
// arcs source/target. Other elements are skipped and reported as warnings.
PnmlResult read_pnml(const std::string& text);
PnmlResult read_pnml_file(const std::filesystem::path& path);

std::string write_pnml(const NetSystem& system, const std::string& net_id = "net");

}  // namespace pql
