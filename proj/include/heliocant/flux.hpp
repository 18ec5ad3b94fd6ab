#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "heliocant/grid.hpp"
#include "heliocant/heliostat.hpp"
#include "heliocant/simd/kernels.hpp"
#include "heliocant/sun.hpp"

namespace heliocant {

/// Flat receiver in the world Y'Z' plane through `centre`, facing +X'.
struct ReceiverSpec {
  Vec3 centre{};
  double diameter = 1.2;  // m
  GridSpec grid{};

  UnitVector3 normal() const { return kWorldX; }
  /// cos(beta) = |R . X'| for a heliostat aimed at the receiver centre.
  double incidence_cos(const HeliostatSpec& h) const;
};

struct SamplingSpec {
  int surface = 32;    // N_s x N_s samples per facet
  int radial = 24;     // sun-cone radial nodes
  int azimuthal = 48;  // sun-cone azimuthal nodes

  void validate() const;
};

enum class Engine { grt, conv };

std::string to_string(Engine e);

/// Irradiance on the receiver grid in suns (flux density / DNI). Values are
/// row-major with row = Z' index and column = Y' index.
struct FluxMap {
  GridSpec grid;
  std::vector<double> values;
  double dni = 1.0;      // W/m^2 the map is normalized to
  double spilled = 0.0;  // power that missed the grid [W per unit DNI]
  std::string engine;
  SunPosition sun;
  std::vector<std::string> heliostats;

  static FluxMap zeros(const GridSpec& grid, double dni = 1.0);

  double& at(int iy, int iz) { return values[static_cast<std::size_t>(iz) * grid.cells_y + iy]; }
  double at(int iy, int iz) const { return values[static_cast<std::size_t>(iz) * grid.cells_y + iy]; }
  /// Sum of cells times cell area [W per unit DNI].
  double total() const;
};

/// A heliostat aimed at the receiver centre for one sun position.
RealizedHeliostat aim_heliostat(const HeliostatSpec& spec, const CantingSet& canting,
                                const UnitVector3& sun, const ReceiverSpec& receiver);

/// DNI * sum(facet area * cos i * reflectivity), with i the tracking
/// incidence; in W per unit DNI.
double aperture_power(const RealizedHeliostat& h, const UnitVector3& sun);

/// Deterministic grid ray trace: N_s^2 midpoint samples per facet times the
/// sun-cone quadrature. No shift-invariance approximation.
FluxMap trace_flux_grt(std::span<const RealizedHeliostat> heliostats, const SunPosition& sun,
                       const SunshapeModel& shape, const ReceiverSpec& receiver,
                       const SamplingSpec& sampling, double dni = 1.0,
                       simd::Isa isa = simd::active_isa());

/// Point-sun trace (sun centre only): the geometric/aberration spot.
FluxMap geometric_spot(const RealizedHeliostat& heliostat, const SunPosition& sun,
                       const ReceiverSpec& receiver, const SamplingSpec& sampling, double dni = 1.0,
                       simd::Isa isa = simd::active_isa());

/// Linear convolution of `spot` with `kernel` through zero-padded FFTs.
/// Power pushed beyond the grid is added to `spilled`. A delta kernel is an
/// exact copy.
FluxMap convolve_spot(const FluxMap& spot, const SunKernel& kernel, simd::Isa isa = simd::active_isa());

/// Projected sun kernel for a heliostat aimed at the receiver centre.
SunKernel heliostat_kernel(const RealizedHeliostat& heliostat, const UnitVector3& sun,
                           const SunshapeModel& shape, const ReceiverSpec& receiver);

/// Geometric spot per heliostat convolved with its own projected sunshape,
/// summed over heliostats. Throws GridTooSmall when the point-sun spot spills
/// more than half its power.
FluxMap convolve_flux(std::span<const RealizedHeliostat> heliostats, const SunPosition& sun,
                      const SunshapeModel& shape, const ReceiverSpec& receiver,
                      const SamplingSpec& sampling, double dni = 1.0,
                      simd::Isa isa = simd::active_isa());

/// Dispatches to trace_flux_grt or convolve_flux.
FluxMap compute_flux(Engine engine, std::span<const RealizedHeliostat> heliostats, const SunPosition& sun,
                     const SunshapeModel& shape, const ReceiverSpec& receiver, const SamplingSpec& sampling,
                     double dni = 1.0);

/// Cell-wise sum. Throws GridMismatch on differing grids or DNI.
FluxMap map_add(const FluxMap& a, const FluxMap& b);

/// Reflection y' -> -y' (column k -> cells_y - 1 - k).
FluxMap mirror_y(const FluxMap& m);

struct MapStats {
  double peak = 0.0;        // suns
  double total = 0.0;       // W per unit DNI
  double centroid_y = 0.0;  // m
  double centroid_z = 0.0;  // m
  double spill_fraction = 0.0;
};

/// Throws EmptyMap for a map without cells.
MapStats map_stats(const FluxMap& m);

/// sqrt(mean((a - b)^2)) over cells. Throws GridMismatch.
double rms_difference(const FluxMap& a, const FluxMap& b);

void write_flux_csv(std::ostream& os, const FluxMap& m);

/// Binary 16-bit portable graymap scaled to the map peak, top row = max Z'.
void write_flux_pgm(std::ostream& os, const FluxMap& m);

}  // namespace heliocant
