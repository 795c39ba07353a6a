#pragma once

#include <cstddef>
#include <numbers>

namespace sfnls {

/// Uniform periodic grid on (a, b) with N points and the centered mode set
/// T_N = {-N/2, ..., N/2 - 1}.
///
/// Coefficient arrays attached to a grid are stored in FFT-natural order
/// [0, 1, ..., N/2-1, -N/2, ..., -1]; `slot` and `mode` translate between a
/// storage index and a mode number.
class SpectralGrid {
 public:
  /// Throws std::invalid_argument unless b > a and N is even and >= 2.
  SpectralGrid(double a, double b, std::size_t n);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double length() const noexcept { return b_ - a_; }
  std::size_t size() const noexcept { return n_; }
  double h() const noexcept { return (b_ - a_) / static_cast<double>(n_); }

  /// Grid point x_j = a + j h.
  double x(std::size_t j) const noexcept { return a_ + static_cast<double>(j) * h(); }

  /// Wavenumber mu_l = 2 pi l / (b - a).
  double mu(long l) const noexcept {
    return 2.0 * std::numbers::pi * static_cast<double>(l) / (b_ - a_);
  }

  long min_mode() const noexcept { return -static_cast<long>(n_ / 2); }
  long max_mode() const noexcept { return static_cast<long>(n_ / 2) - 1; }
  bool contains(long l) const noexcept { return l >= min_mode() && l <= max_mode(); }

  /// Storage index of mode l; requires contains(l).
  std::size_t slot(long l) const noexcept {
    return l >= 0 ? static_cast<std::size_t>(l) : static_cast<std::size_t>(l + static_cast<long>(n_));
  }
  /// Mode number stored at index k < N.
  long mode(std::size_t k) const noexcept {
    return k < n_ / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n_);
  }

  bool same_domain(const SpectralGrid& other) const noexcept {
    return a_ == other.a_ && b_ == other.b_;
  }
  bool operator==(const SpectralGrid& other) const noexcept = default;

  /// Same domain with a different point count.
  SpectralGrid resized(std::size_t n) const { return SpectralGrid(a_, b_, n); }

 private:
  double a_;
  double b_;
  std::size_t n_;
};

/// Validating factory; takes a signed count so that nonpositive N is reported
/// rather than wrapped.
SpectralGrid make_grid(double a, double b, long long n);

}  // namespace sfnls
