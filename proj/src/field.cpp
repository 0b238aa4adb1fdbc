#include "nlslab/field.hpp"

#include <cmath>

#include "nlslab/errors.hpp"

namespace nlslab {

Field::Field(GridPtr grid) : grid_(std::move(grid)), values_(grid_->size()) {}

Field::Field(GridPtr grid, std::vector<cplx> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size())
    throw DimensionError("field length does not match grid resolution");
}

Field Field::real_part() const {
  Field out(grid_);
  for (std::size_t j = 0; j < values_.size(); ++j) out.values_[j] = values_[j].real();
  return out;
}

Field Field::imag_part() const {
  Field out(grid_);
  for (std::size_t j = 0; j < values_.size(); ++j) out.values_[j] = values_[j].imag();
  return out;
}

bool Field::is_finite() const {
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

Field& Field::operator+=(const Field& rhs) {
  require_same_grid(*this, rhs);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += rhs.values_[j];
  return *this;
}

Field& Field::operator-=(const Field& rhs) {
  require_same_grid(*this, rhs);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= rhs.values_[j];
  return *this;
}

Field& Field::operator*=(cplx s) {
  for (auto& v : values_) v *= s;
  return *this;
}

Field& Field::operator*=(const Field& rhs) {
  require_same_grid(*this, rhs);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] *= rhs.values_[j];
  return *this;
}

void require_same_grid(const Field& a, const Field& b) {
  if (!a.grid().equivalent(b.grid())) throw DimensionError("fields live on different grids");
}

}  // namespace nlslab
