#include <algorithm>
#include <cstdint>
#include <ostream>

#include "heliocant/error.hpp"
#include "heliocant/flux.hpp"
#include "heliocant/io.hpp"

namespace heliocant {

FluxMap FluxMap::zeros(const GridSpec& grid, double dni) {
  FluxMap m;
  m.grid = grid;
  m.values.assign(grid.size(), 0.0);
  m.dni = dni;
  return m;
}

double FluxMap::total() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.cell_area();
}

FluxMap map_add(const FluxMap& a, const FluxMap& b) {
  if (!(a.grid == b.grid) || a.dni != b.dni || a.values.size() != b.values.size()) {
    throw Error(ErrorCode::GridMismatch, "cannot add flux maps on different grids or DNI bases");
  }
  FluxMap out = a;
  simd::accumulate(simd::active_isa(), out.values, b.values);
  out.spilled = a.spilled + b.spilled;
  for (const std::string& id : b.heliostats) {
    if (std::find(out.heliostats.begin(), out.heliostats.end(), id) == out.heliostats.end()) {
      out.heliostats.push_back(id);
    }
  }
  if (out.engine != b.engine) out.engine = a.engine + "+" + b.engine;
  return out;
}

FluxMap mirror_y(const FluxMap& m) {
  FluxMap out = m;
  const int gy = m.grid.cells_y;
  for (int iz = 0; iz < m.grid.cells_z; ++iz) {
    for (int iy = 0; iy < gy; ++iy) out.at(iy, iz) = m.at(gy - 1 - iy, iz);
  }
  out.sun.azimuth_deg = -m.sun.azimuth_deg;
  return out;
}

MapStats map_stats(const FluxMap& m) {
  if (m.values.empty()) throw Error(ErrorCode::EmptyMap, "flux map has no cells");
  MapStats s;
  double sum = 0.0;
  double sy = 0.0;
  double sz = 0.0;
  for (int iz = 0; iz < m.grid.cells_z; ++iz) {
    for (int iy = 0; iy < m.grid.cells_y; ++iy) {
      const double v = m.at(iy, iz);
      s.peak = std::max(s.peak, v);
      sum += v;
      sy += v * m.grid.y_centre(iy);
      sz += v * m.grid.z_centre(iz);
    }
  }
  s.total = sum * m.grid.cell_area();
  if (sum > 0.0) {
    s.centroid_y = sy / sum;
    s.centroid_z = sz / sum;
  }
  const double all = s.total + m.spilled;
  s.spill_fraction = all > 0.0 ? m.spilled / all : 0.0;
  return s;
}

double rms_difference(const FluxMap& a, const FluxMap& b) {
  if (!(a.grid == b.grid) || a.values.size() != b.values.size() || a.values.empty()) {
    throw Error(ErrorCode::GridMismatch, "cannot compare flux maps on different grids");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    const double d = a.values[k] - b.values[k];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(a.values.size()));
}

void write_flux_csv(std::ostream& os, const FluxMap& m) {
  const GridSpec& g = m.grid;
  os << "# heliocant flux map\n"
     << "# engine," << m.engine << "\n"
     << "# sun_azimuth_deg," << format_double(m.sun.azimuth_deg) << "\n"
     << "# sun_elevation_deg," << format_double(m.sun.elevation_deg) << "\n";
  if (m.sun.timestamp) os << "# sun_time_utc," << m.sun.timestamp->iso() << "\n";
  os << "# heliostats,";
  for (std::size_t k = 0; k < m.heliostats.size(); ++k) os << (k ? ";" : "") << m.heliostats[k];
  os << "\n"
     << "# dni," << format_double(m.dni) << "\n"
     << "# unit,suns\n"
     << "# cells_y," << g.cells_y << "\n"
     << "# cells_z," << g.cells_z << "\n"
     << "# extent_y_m," << format_double(g.extent_y) << "\n"
     << "# extent_z_m," << format_double(g.extent_z) << "\n"
     << "# cell_size_m," << format_double(g.cell_size()) << "\n"
     << "# spilled_power," << format_double(m.spilled) << "\n"
     << "# layout,first row = max z'; first column = min y'\n";
  for (int iz = g.cells_z - 1; iz >= 0; --iz) {
    for (int iy = 0; iy < g.cells_y; ++iy) {
      if (iy) os << ',';
      os << format_double(m.at(iy, iz));
    }
    os << '\n';
  }
}

void write_flux_pgm(std::ostream& os, const FluxMap& m) {
  const GridSpec& g = m.grid;
  double peak = 0.0;
  for (double v : m.values) peak = std::max(peak, v);
  os << "P5\n" << g.cells_y << ' ' << g.cells_z << "\n65535\n";
  std::vector<char> row(static_cast<std::size_t>(g.cells_y) * 2);
  for (int iz = g.cells_z - 1; iz >= 0; --iz) {
    for (int iy = 0; iy < g.cells_y; ++iy) {
      const double scaled = peak > 0.0 ? m.at(iy, iz) / peak * 65535.0 : 0.0;
      const auto level = static_cast<std::uint16_t>(std::clamp(std::lround(scaled), 0L, 65535L));
      row[2 * iy] = static_cast<char>(level >> 8);
      row[2 * iy + 1] = static_cast<char>(level & 0xFF);
    }
    os.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

}  // namespace heliocant
