#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "nlslab/grid.hpp"

namespace nlslab {

/// Complex samples of a function on a Grid.
class Field {
 public:
  explicit Field(GridPtr grid);
  Field(GridPtr grid, std::vector<cplx> values);

  template <class F>
  static Field from_function(GridPtr grid, F&& f) {
    Field out(grid);
    for (std::size_t j = 0; j < grid->size(); ++j) out.values_[j] = cplx(f(grid->x(j)));
    return out;
  }

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }
  cplx& operator[](std::size_t j) { return values_[j]; }
  const cplx& operator[](std::size_t j) const { return values_[j]; }

  Field real_part() const;
  Field imag_part() const;
  bool is_finite() const;

  Field& operator+=(const Field& rhs);
  Field& operator-=(const Field& rhs);
  Field& operator*=(cplx s);
  /// Pointwise product.
  Field& operator*=(const Field& rhs);

  friend Field operator+(Field lhs, const Field& rhs) { return lhs += rhs; }
  friend Field operator-(Field lhs, const Field& rhs) { return lhs -= rhs; }
  friend Field operator*(Field lhs, cplx s) { return lhs *= s; }
  friend Field operator*(cplx s, Field rhs) { return rhs *= s; }
  friend Field operator*(Field lhs, const Field& rhs) { return lhs *= rhs; }

 private:
  GridPtr grid_;
  std::vector<cplx> values_;
};

/// Throws DimensionError unless both fields live on equivalent grids.
void require_same_grid(const Field& a, const Field& b);

}  // namespace nlslab
