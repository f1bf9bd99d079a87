#pragma once
// Internal radix-2 complex FFT, power-of-two sizes only (the grid type
// guarantees that). Unnormalized: forward is sum f_j e^{-2pi i jm/n},
// inverse is sum F_m e^{+2pi i jm/n}; callers apply their own scaling.

#include <complex>

namespace mlnheat::detail {

// In-place 1-D transform of length n; sign = -1 forward, +1 inverse.
void fft_pow2(std::complex<double>* a, int n, int sign);

// In-place 2-D transform of row-major n x n data.
void fft_2d(std::complex<double>* a, int n, int sign);

} // namespace mlnheat::detail
