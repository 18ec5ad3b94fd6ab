#include "heliocant/grid.hpp"

#include "heliocant/error.hpp"

namespace heliocant {

void GridSpec::validate() const {
  if (cells_y <= 0 || cells_z <= 0 || cells_y % 2 != 0 || cells_z % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "grid cell counts must be positive and even");
  }
  if (!(extent_y > 0.0) || !(extent_z > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "grid extents must be positive");
  }
  const double dy = extent_y / cells_y;
  const double dz = extent_z / cells_z;
  if (std::abs(dy - dz) > 1e-12 * dy) {
    throw Error(ErrorCode::InvalidArgument, "grid cells must be square");
  }
}

}  // namespace heliocant
