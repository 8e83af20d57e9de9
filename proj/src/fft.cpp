#include "decoh/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

namespace decoh {

namespace {

std::mutex g_plan_mutex;
std::map<std::pair<std::size_t, int>, fftw_plan> g_plans;

struct AlignedBuffer {
    fftw_complex* ptr = nullptr;
    std::size_t n = 0;
    ~AlignedBuffer() {
        if (ptr) fftw_free(ptr);
    }
    fftw_complex* get(std::size_t want) {
        if (want > n) {
            if (ptr) fftw_free(ptr);
            ptr = fftw_alloc_complex(want);
            n = want;
        }
        return ptr;
    }
};

fftw_plan plan_for(std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto key = std::make_pair(n, sign);
    auto it = g_plans.find(key);
    if (it != g_plans.end()) return it->second;
    fftw_complex* tmp = fftw_alloc_complex(n);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), tmp, tmp, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                   FFTW_ESTIMATE);
    fftw_free(tmp);
    g_plans.emplace(key, p);
    return p;
}

}  // namespace

void fft(std::span<cplx> data, int sign) {
    const std::size_t n = data.size();
    if (n <= 1) return;
    fftw_plan p = plan_for(n, sign);
    thread_local AlignedBuffer buf;
    fftw_complex* b = buf.get(n);
    std::memcpy(static_cast<void*>(b), data.data(), n * sizeof(cplx));
    fftw_execute_dft(p, b, b);
    std::memcpy(static_cast<void*>(data.data()), b, n * sizeof(cplx));
}

void fft_inverse(std::span<cplx> data) {
    fft(data, +1);
    const double s = 1.0 / static_cast<double>(data.size());
    for (auto& v : data) v *= s;
}

std::vector<double> fft_wavenumbers(std::size_t n, double d) {
    std::vector<double> k(n);
    const double dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * d);
    for (std::size_t j = 0; j < n; ++j) {
        const long jj = j < (n + 1) / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n);
        k[j] = dk * static_cast<double>(jj);
    }
    return k;
}

}  // namespace decoh
