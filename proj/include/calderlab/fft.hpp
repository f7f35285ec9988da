#pragma once

#include <complex>
#include <cstddef>

namespace calderlab::fft {

// Unnormalized length-n transforms: forward uses exp(-2 pi i jk/n), backward exp(+).
// `in` and `out` may alias.
void forward(const std::complex<double>* in, std::complex<double>* out, std::size_t n);
void backward(const std::complex<double>* in, std::complex<double>* out, std::size_t n);

}  // namespace calderlab::fft
