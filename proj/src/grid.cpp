#include "sfnls/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sfnls {

SpectralGrid::SpectralGrid(double a, double b, std::size_t n) : a_(a), b_(b), n_(n) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
    throw std::invalid_argument("grid: require finite endpoints with b > a");
  }
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("grid: N must be even and >= 2, got " + std::to_string(n));
  }
}

SpectralGrid make_grid(double a, double b, long long n) {
  if (n <= 0) {
    throw std::invalid_argument("grid: N must be positive, got " + std::to_string(n));
  }
  return SpectralGrid(a, b, static_cast<std::size_t>(n));
}

}  // namespace sfnls
