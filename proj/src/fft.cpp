#include "dimerwave/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace dimerwave {
namespace {

struct Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex plan_mutex;
std::map<std::size_t, Plans> plan_cache;

const Plans& plans_for(std::size_t n) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = plan_cache.find(n);
    if (it != plan_cache.end()) return it->second;
    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
    Plans p;
    p.forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    p.backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), out, in, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    return plan_cache.emplace(n, p).first->second;
}

}  // namespace

CVec rfft(const Vec& f) {
    const std::size_t n = f.size();
    const Plans& p = plans_for(n);
    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
    std::copy(f.begin(), f.end(), in);
    fftw_execute_dft_r2c(p.forward, in, out);
    CVec F(n / 2 + 1);
    for (std::size_t k = 0; k < F.size(); ++k) F[k] = {out[k][0], out[k][1]};
    fftw_free(in);
    fftw_free(out);
    return F;
}

Vec irfft(const CVec& F, std::size_t n) {
    const Plans& p = plans_for(n);
    double* out = fftw_alloc_real(n);
    fftw_complex* in = fftw_alloc_complex(n / 2 + 1);
    for (std::size_t k = 0; k < n / 2 + 1; ++k) {
        in[k][0] = F[k].real();
        in[k][1] = F[k].imag();
    }
    // c2r destroys its input; the copy above makes that harmless.
    fftw_execute_dft_c2r(p.backward, in, out);
    Vec f(out, out + n);
    const double scale = 1.0 / static_cast<double>(n);
    for (double& v : f) v *= scale;
    fftw_free(in);
    fftw_free(out);
    return f;
}

}  // namespace dimerwave
