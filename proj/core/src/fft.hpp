#pragma once

// Thin FFTW wrapper. Plans are cached per size and created with
// FFTW_ESTIMATE so that repeated runs execute the same algorithm and produce
// identical bytes. Execution through the new-array interface is thread-safe;
// planning is serialized internally.

#include <complex>
#include <cstddef>
#include <span>

namespace zrlab::detail {

/// Unnormalized in-place transforms:
///   forward:  X[k] = sum_m x[m] exp(-2 pi i k m / n)
///   backward: x[m] = sum_k X[k] exp(+2 pi i k m / n)
void fft_forward(std::span<std::complex<double>> data);
void fft_backward(std::span<std::complex<double>> data);

}  // namespace zrlab::detail
