#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace moller::fft {

/// In-place unnormalized DFT, sum_j v[j] exp(-2 pi i m j / n).
void forward(std::complex<double>* data, std::size_t n);
/// In-place unnormalized inverse DFT, sum_m v[m] exp(+2 pi i m j / n).
void backward(std::complex<double>* data, std::size_t n);

/// Row-major 2D transforms (nx outer, ny inner).
void forward2(std::complex<double>* data, std::size_t nx, std::size_t ny);
void backward2(std::complex<double>* data, std::size_t nx, std::size_t ny);

} // namespace moller::fft
