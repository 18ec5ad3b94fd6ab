#include <sstream>

#include "heliocant/error.hpp"
#include "heliocant/flux.hpp"

namespace heliocant {
namespace {

/// Owning storage behind a SurfaceSoA view.
struct SampleBuffer {
  std::vector<double> px, py, pz, nx, ny, nz, weight;

  simd::SurfaceSoA view() const { return {px, py, pz, nx, ny, nz, weight}; }
  std::size_t size() const { return px.size(); }
};

SampleBuffer sample_surfaces(const RealizedHeliostat& h, int ns) {
  SampleBuffer b;
  const std::size_t count = h.facets.size() * static_cast<std::size_t>(ns) * ns;
  for (auto* v : {&b.px, &b.py, &b.pz, &b.nx, &b.ny, &b.nz, &b.weight}) v->reserve(count);
  for (const Facet& f : h.facets) {
    const double dA = f.area() / (static_cast<double>(ns) * ns);
    for (int kv = 0; kv < ns; ++kv) {
      // (2k + 1 - ns) / (2 ns) is exactly antisymmetric in k.
      const double v = static_cast<double>(2 * kv + 1 - ns) / (2.0 * ns) * f.height();
      for (int ku = 0; ku < ns; ++ku) {
        const double u = static_cast<double>(2 * ku + 1 - ns) / (2.0 * ns) * f.width();
        const SurfaceSample s = f.sample(u, v);
        b.px.push_back(s.point.x);
        b.py.push_back(s.point.y);
        b.pz.push_back(s.point.z);
        b.nx.push_back(s.normal.x());
        b.ny.push_back(s.normal.y());
        b.nz.push_back(s.normal.z());
        b.weight.push_back(dA * h.reflectivity);
      }
    }
  }
  return b;
}

void check_front_lit(const RealizedHeliostat& h, const SampleBuffer& b, const UnitVector3& sun) {
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (!(b.nx[k] * sun.x() + b.ny[k] * sun.y() + b.nz[k] * sun.z() > 0.0)) {
      throw Error(ErrorCode::BackLitFacet, "heliostat '" + h.name + "' has a facet lit from behind");
    }
  }
}

simd::PlaneGrid plane_grid(const ReceiverSpec& r) {
  const GridSpec& g = r.grid;
  return {r.centre.x, r.centre.y - 0.5 * g.extent_y, r.centre.z - 0.5 * g.extent_z,
          1.0 / g.cell_size(), g.cells_y, g.cells_z};
}

/// Two unit vectors completing `s` to an orthonormal basis.
std::pair<Vec3, Vec3> cone_basis(const UnitVector3& s) {
  const Vec3 helper = std::abs(s.z()) < 0.9 ? kWorldZ.vec() : kWorldX.vec();
  const UnitVector3 t = UnitVector3::normalize(cross(s, helper));
  const UnitVector3 b = UnitVector3::normalize(cross(s, t));
  return {t.vec(), b.vec()};
}

/// Traces one sun direction over all samples and scatters into `map`.
void trace_direction(const SampleBuffer& b, const Vec3& dir, double scale, const simd::PlaneGrid& pg,
                     simd::Isa isa, std::vector<std::int32_t>& cell, std::vector<double>& power,
                     FluxMap& map) {
  const double sun[3] = {dir.x, dir.y, dir.z};
  simd::reflect_to_grid(isa, b.view(), sun, scale, pg, cell, power);
  const double area = map.grid.cell_area();
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (cell[k] >= 0) {
      map.values[static_cast<std::size_t>(cell[k])] += power[k] / area;
    } else {
      map.spilled += power[k];
    }
  }
}

FluxMap empty_map(const ReceiverSpec& receiver, const SunPosition& sun, double dni, const char* engine) {
  receiver.grid.validate();
  if (!(dni > 0.0)) throw Error(ErrorCode::InvalidArgument, "DNI must be positive");
  FluxMap m = FluxMap::zeros(receiver.grid, dni);
  m.engine = engine;
  m.sun = sun;
  return m;
}

}  // namespace

double ReceiverSpec::incidence_cos(const HeliostatSpec& h) const {
  return std::abs(dot(target_direction(h, centre), kWorldX));
}

void SamplingSpec::validate() const {
  if (surface < 1 || radial < 1 || azimuthal < 1) {
    throw Error(ErrorCode::InvalidArgument, "sampling counts must be positive");
  }
}

std::string to_string(Engine e) { return e == Engine::grt ? "grt" : "conv"; }

RealizedHeliostat aim_heliostat(const HeliostatSpec& spec, const CantingSet& canting, const UnitVector3& sun,
                                const ReceiverSpec& receiver) {
  const ReflectionGeometry g = bisector_normal(sun, target_direction(spec, receiver.centre));
  return realize_modules(spec, module_centres(spec), canting, g.normal);
}

double aperture_power(const RealizedHeliostat& h, const UnitVector3& sun) {
  const double c = dot(sun, h.frame.axis_x);
  double area = 0.0;
  for (const Facet& f : h.facets) area += f.area();
  return area * c * h.reflectivity;
}

FluxMap trace_flux_grt(std::span<const RealizedHeliostat> heliostats, const SunPosition& sun,
                       const SunshapeModel& shape, const ReceiverSpec& receiver,
                       const SamplingSpec& sampling, double dni, simd::Isa isa) {
  sampling.validate();
  const UnitVector3 s = sun_vector(sun);
  FluxMap map = empty_map(receiver, sun, dni, "grt");
  const simd::PlaneGrid pg = plane_grid(receiver);
  const std::vector<ConeNode> nodes = cone_quadrature(shape, sampling.radial, sampling.azimuthal);
  const auto [t, b] = cone_basis(s);

  std::vector<std::int32_t> cell;
  std::vector<double> power;
  for (const RealizedHeliostat& h : heliostats) {
    map.heliostats.push_back(h.name);
    const SampleBuffer samples = sample_surfaces(h, sampling.surface);
    check_front_lit(h, samples, s);
    cell.resize(samples.size());
    power.resize(samples.size());
    for (const ConeNode& node : nodes) {
      const Vec3 lateral = std::cos(node.azimuth) * t + std::sin(node.azimuth) * b;
      const Vec3 dir = std::cos(node.offset) * s.vec() + std::sin(node.offset) * lateral;
      trace_direction(samples, dir, node.weight, pg, isa, cell, power, map);
    }
  }
  return map;
}

FluxMap geometric_spot(const RealizedHeliostat& heliostat, const SunPosition& sun, const ReceiverSpec& receiver,
                       const SamplingSpec& sampling, double dni, simd::Isa isa) {
  sampling.validate();
  const UnitVector3 s = sun_vector(sun);
  FluxMap map = empty_map(receiver, sun, dni, "spot");
  map.heliostats.push_back(heliostat.name);
  const SampleBuffer samples = sample_surfaces(heliostat, sampling.surface);
  check_front_lit(heliostat, samples, s);
  std::vector<std::int32_t> cell(samples.size());
  std::vector<double> power(samples.size());
  trace_direction(samples, s.vec(), 1.0, plane_grid(receiver), isa, cell, power, map);
  return map;
}

SunKernel heliostat_kernel(const RealizedHeliostat& heliostat, const UnitVector3& sun,
                           const SunshapeModel& shape, const ReceiverSpec& receiver) {
  const UnitVector3 beam = reflect(sun, heliostat.frame.axis_x);
  if (!(beam.x() < 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "heliostat '" + heliostat.name + "' does not face the receiver");
  }
  const double path = (receiver.centre.x - heliostat.frame.origin.x) / beam.x();
  return build_kernel(shape, path, beam, receiver.normal(), receiver.grid);
}

FluxMap convolve_flux(std::span<const RealizedHeliostat> heliostats, const SunPosition& sun,
                      const SunshapeModel& shape, const ReceiverSpec& receiver, const SamplingSpec& sampling,
                      double dni, simd::Isa isa) {
  const UnitVector3 s = sun_vector(sun);
  FluxMap total = empty_map(receiver, sun, dni, "conv");
  for (const RealizedHeliostat& h : heliostats) {
    const FluxMap spot = geometric_spot(h, sun, receiver, sampling, dni, isa);
    const double on_grid = spot.total();
    if (spot.spilled > on_grid) {
      std::ostringstream os;
      os << "point-sun spot of heliostat '" << h.name << "' spills " << spot.spilled / (on_grid + spot.spilled)
         << " of its power off the grid";
      throw Error(ErrorCode::GridTooSmall, os.str());
    }
    FluxMap conv = convolve_spot(spot, heliostat_kernel(h, s, shape, receiver), isa);
    simd::accumulate(isa, total.values, conv.values);
    total.spilled += conv.spilled;
    total.heliostats.push_back(h.name);
  }
  return total;
}

FluxMap compute_flux(Engine engine, std::span<const RealizedHeliostat> heliostats, const SunPosition& sun,
                     const SunshapeModel& shape, const ReceiverSpec& receiver, const SamplingSpec& sampling,
                     double dni) {
  return engine == Engine::grt ? trace_flux_grt(heliostats, sun, shape, receiver, sampling, dni)
                               : convolve_flux(heliostats, sun, shape, receiver, sampling, dni);
}

}  // namespace heliocant
