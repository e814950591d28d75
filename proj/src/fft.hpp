// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.

#ifndef SIGCLASS_FFT_HPP
#define SIGCLASS_FFT_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace sigclass::fft {

// In-place iterative radix-2 transform; data.size() must be a power of two.
// The inverse applies the 1/N scaling.
void transform(std::vector<std::complex<double>>& data, bool inverse);

} // namespace sigclass::fft

#endif
