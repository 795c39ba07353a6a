#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sfnls {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

namespace fft {

// Unnormalized complex transforms backed by FFTW.
//   forward:  out_k = sum_j in_j e^{-2 pi i jk/n}
//   backward: out_j = sum_k in_k e^{+2 pi i jk/n}
// Plans are cached per size and shared between threads; execution is
// reentrant. `in` and `out` must not overlap.
void forward(std::span<const Complex> in, std::span<Complex> out);
void backward(std::span<const Complex> in, std::span<Complex> out);

ComplexVector forward(std::span<const Complex> in);
ComplexVector backward(std::span<const Complex> in);

}  // namespace fft
}  // namespace sfnls
