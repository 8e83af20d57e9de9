#include "decoh/faddeeva.hpp"

#include "decoh/fft.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace decoh {

namespace {

constexpr int kN = 40;

struct Weideman {
    double L;
    std::array<double, kN> a;  // highest degree first
    Weideman() {
        const int M = 2 * kN, M2 = 2 * M;
        L = std::sqrt(kN / std::sqrt(2.0));
        std::vector<cplx> f(M2, 0.0);
        for (int k = -M + 1; k <= M - 1; ++k) {
            const double t = L * std::tan(k * std::numbers::pi / (2.0 * M));
            f[k + M] = std::exp(-t * t) * (L * L + t * t);  // f[0] stays 0
        }
        std::vector<cplx> s(M2);
        for (int i = 0; i < M2; ++i) s[i] = f[(i + M) % M2];
        fft_forward(s);
        for (int j = 0; j < kN; ++j) a[kN - 1 - j] = s[j + 1].real() / M2;
    }
};

const Weideman& weideman() {
    static const Weideman w;
    return w;
}

std::complex<double> w_upper(std::complex<double> z) {
    const std::complex<double> I(0.0, 1.0);
    if (std::abs(z) < 10.0) {
        const auto& W = weideman();
        const std::complex<double> d = W.L - I * z;
        const std::complex<double> Z = (W.L + I * z) / d;
        std::complex<double> p = 0.0;
        for (double c : W.a) p = p * Z + c;
        return 2.0 * p / (d * d) + (1.0 / std::sqrt(std::numbers::pi)) / d;
    }
    // w(z) = (i/sqrt(pi)) / (z - (1/2)/(z - 1/(z - (3/2)/(z - ...))))
    std::complex<double> tail = z;
    for (int k = 60; k >= 1; --k) tail = z - (0.5 * k) / tail;
    return (I / std::sqrt(std::numbers::pi)) / tail;
}

}  // namespace

std::complex<double> faddeeva_w(std::complex<double> z) {
    if (z.imag() >= 0.0) return w_upper(z);
    return 2.0 * std::exp(-z * z) - w_upper(-z);
}

}  // namespace decoh
