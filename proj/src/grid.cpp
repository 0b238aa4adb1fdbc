#include "nlslab/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "nlslab/errors.hpp"

namespace nlslab {

namespace {
// The FFTW planner is not reentrant; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Grid::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

std::shared_ptr<const Grid> Grid::make(double half_length, std::size_t n_points) {
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw InputError("grid half_length must be positive and finite");
  if (n_points < 16 || (n_points & (n_points - 1)) != 0)
    throw InputError("grid n_points must be a power of two >= 16");
  return std::shared_ptr<const Grid>(new Grid(half_length, n_points));
}

Grid::Grid(double half_length, std::size_t n_points)
    : half_length_(half_length),
      n_(n_points),
      spacing_(2.0 * half_length / static_cast<double>(n_points)),
      dk_(std::numbers::pi / half_length),
      nyquist_(std::numbers::pi / spacing_),
      positions_(n_points),
      wavenumbers_(n_points),
      plans_(std::make_unique<Plans>()) {
  const auto n = static_cast<std::ptrdiff_t>(n_);
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    positions_[j] = -half_length_ + static_cast<double>(j) * spacing_;
    const std::ptrdiff_t m = j < n / 2 ? j : j - n;
    wavenumbers_[j] = static_cast<double>(m) * dk_;
  }

  std::vector<cplx> a(n_), b(n_);
  auto* in = reinterpret_cast<fftw_complex*>(a.data());
  auto* out = reinterpret_cast<fftw_complex*>(b.data());
  const int ni = static_cast<int>(n_);
  std::lock_guard lock(planner_mutex());
  // ESTIMATE keeps the chosen algorithm, and hence the bits, reproducible.
  plans_->forward = fftw_plan_dft_1d(ni, in, out, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->backward = fftw_plan_dft_1d(ni, in, out, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
}

Grid::~Grid() {
  std::lock_guard lock(planner_mutex());
  if (plans_->forward) fftw_destroy_plan(plans_->forward);
  if (plans_->backward) fftw_destroy_plan(plans_->backward);
}

void Grid::forward(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != n_ || out.size() != n_) throw DimensionError("transform size mismatch");
  // FFTW's new-array execute takes a non-const input; the plan is out-of-place.
  if (in.data() == out.data()) {
    std::vector<cplx> tmp(in.begin(), in.end());
    fftw_execute_dft(plans_->forward, reinterpret_cast<fftw_complex*>(tmp.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return;
  }
  fftw_execute_dft(plans_->forward, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

void Grid::inverse(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != n_ || out.size() != n_) throw DimensionError("transform size mismatch");
  std::vector<cplx> tmp(in.begin(), in.end());
  fftw_execute_dft(plans_->backward, reinterpret_cast<fftw_complex*>(tmp.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : out) v *= scale;
}

bool Grid::equivalent(const Grid& other) const {
  return this == &other || (n_ == other.n_ && half_length_ == other.half_length_);
}

}  // namespace nlslab
