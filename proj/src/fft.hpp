#pragma once

#include <complex>

namespace curlsob::fft {

// Batched 3-D transforms of `howmany` interleaved components (stride howmany).
// All transforms are unnormalized. c2r destroys its input.
void r2c(int n, int howmany, const double* in, std::complex<double>* out);
void c2r(int n, int howmany, std::complex<double>* in, double* out);
void c2c(int n, int howmany, bool forward, const std::complex<double>* in,
         std::complex<double>* out);

int threads();

}  // namespace curlsob::fft
