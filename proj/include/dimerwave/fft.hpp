#pragma once

#include <complex>
#include <vector>

namespace dimerwave {

using Vec = std::vector<double>;
using CVec = std::vector<std::complex<double>>;

/// Unnormalized real-to-half-complex transform, length n/2+1 output.
CVec rfft(const Vec& f);

/// Inverse of rfft including the 1/n factor. n is the real length.
Vec irfft(const CVec& F, std::size_t n);

}  // namespace dimerwave
