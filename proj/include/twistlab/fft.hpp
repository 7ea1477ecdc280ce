#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace twistlab::fft {

using cplx = std::complex<double>;

// In-place power-of-two FFT with kernel e(sign * 2*pi*i * jk / n).
// No scaling is applied in either direction.  The parallel path runs the
// same butterflies as the serial one, so outputs are bit-identical.
void pow2_transform(std::vector<cplx>& a, int sign, bool parallel);

// Arbitrary-length DFT, out[t] = sum_k a[k] e(sign * 2*pi*i * t*k / n),
// via Bluestein's chirp embedding in a power-of-two cyclic convolution.
// Chirp phases are reduced with exact integer arithmetic (k^2 mod 2n) before
// the sin/cos call, which keeps the phase error flat in n.
std::vector<cplx> dft(const std::vector<cplx>& a, int sign, bool parallel);

// O(n^2) reference used by tests and benchmarks.
std::vector<cplx> dft_direct(const std::vector<cplx>& a, int sign);

} // namespace twistlab::fft
