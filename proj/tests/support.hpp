#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "heliocant/heliostat.hpp"

namespace heliocant::test_support {

inline std::filesystem::path source_dir() { return HELIOCANT_SOURCE_DIR; }

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Rows of tests/data/canting_golden.csv.
inline std::vector<CantingRow> load_canting_golden() {
  std::ifstream in(source_dir() / "tests/data/canting_golden.csv");
  std::vector<CantingRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'i') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    CantingRow r;
    ls >> r.i >> r.j >> r.spherical_a >> r.spherical_h >> r.off_axis_a >> r.off_axis_h >> r.diff_a >> r.diff_h;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace heliocant::test_support
