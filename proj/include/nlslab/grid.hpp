#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace nlslab {

using cplx = std::complex<double>;

/// Periodic box [-L, L) sampled at n equispaced points x_j = -L + j h.
///
/// Wavenumbers use the standard FFT ordering: k_j = j dk for 0 <= j < n/2,
/// k_j = (j - n) dk for n/2 <= j < n, with dk = pi / L. The Nyquist entry
/// k_{n/2} = -pi/h is kept negative; odd-order multipliers zero it.
///
/// A Grid owns its FFTW plans and is shared between Fields through a
/// shared_ptr. Transforms are safe to call concurrently.
class Grid {
 public:
  /// Throws InputError unless n is a power of two >= 16 and L > 0.
  static std::shared_ptr<const Grid> make(double half_length, std::size_t n_points);

  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  double half_length() const { return half_length_; }
  std::size_t size() const { return n_; }
  double spacing() const { return spacing_; }
  double dk() const { return dk_; }
  double nyquist() const { return nyquist_; }
  double x(std::size_t j) const { return positions_[j]; }

  std::span<const double> positions() const { return positions_; }
  std::span<const double> wavenumbers() const { return wavenumbers_; }

  /// Unnormalized forward DFT: out_m = sum_j in_j e^{-2 pi i j m / n}.
  void forward(std::span<const cplx> in, std::span<cplx> out) const;
  /// Normalized inverse DFT, so inverse(forward(v)) == v.
  void inverse(std::span<const cplx> in, std::span<cplx> out) const;

  /// Same box and resolution. Fields on equivalent grids may be combined.
  bool equivalent(const Grid& other) const;

 private:
  Grid(double half_length, std::size_t n_points);

  struct Plans;
  double half_length_;
  std::size_t n_;
  double spacing_;
  double dk_;
  double nyquist_;
  std::vector<double> positions_;
  std::vector<double> wavenumbers_;
  std::unique_ptr<Plans> plans_;
};

using GridPtr = std::shared_ptr<const Grid>;

}  // namespace nlslab
