#pragma once

#include <complex>
#include <vector>

namespace lmoments {

// Unnormalized backward DFT in place: out[a] = sum_m in[m] exp(+2 pi i a m / n).
// Any length; plans are cached per length and shared across threads.
void dft_backward(std::vector<std::complex<double>>& data);

}  // namespace lmoments
