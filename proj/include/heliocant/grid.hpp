#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace heliocant {

/// Regular receiver-plane grid centred on the receiver. Columns run along
/// +Y', rows along +Z'; row 0 is the lowest Z'.
struct GridSpec {
  double extent_y = 4.0;  // m
  double extent_z = 4.0;  // m
  int cells_y = 256;
  int cells_z = 256;

  static GridSpec square(double extent, int cells) { return {extent, extent, cells, cells}; }

  double cell_size() const { return extent_y / cells_y; }
  double cell_area() const { return cell_size() * cell_size(); }
  std::size_t size() const { return static_cast<std::size_t>(cells_y) * cells_z; }

  /// Centre coordinate of column `iy` / row `iz` relative to the grid centre.
  double y_centre(int iy) const { return (iy + 0.5) * cell_size() - 0.5 * extent_y; }
  double z_centre(int iz) const { return (iz + 0.5) * cell_size() - 0.5 * extent_z; }

  /// Even cell counts, square cells, positive extents. Throws InvalidArgument.
  void validate() const;

  bool operator==(const GridSpec&) const = default;
};

/// Dense row-major 2D array.
template <class T>
class Grid2D {
 public:
  Grid2D() = default;
  Grid2D(int cols, int rows, T fill = T{})
      : cols_(cols), rows_(rows), data_(static_cast<std::size_t>(cols) * rows, fill) {}

  int cols() const { return cols_; }
  int rows() const { return rows_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(int col, int row) { return data_[static_cast<std::size_t>(row) * cols_ + col]; }
  const T& operator()(int col, int row) const {
    return data_[static_cast<std::size_t>(row) * cols_ + col];
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool operator==(const Grid2D&) const = default;

 private:
  int cols_ = 0;
  int rows_ = 0;
  std::vector<T> data_;
};

}  // namespace heliocant
