#pragma once

#include "decoh/core.hpp"

namespace decoh {

struct ScatteringCoefficients {
    double gamma = 0.0;
    double k = 0.0;
    cplx R;
    cplx T;
};

// R_gamma(k) = -gamma / (gamma - i|k|); gamma must be positive.
cplx reflection_coeff(double gamma, double k);
// T_gamma(k) = -i k / (gamma - i k).
cplx transmission_coeff(double gamma, double k);
ScatteringCoefficients scattering_coefficients(double gamma, double k);
// Reflection amplitude with gamma = 0 allowed (returns 0); used where the free case is legitimate.
cplx reflection_or_zero(double gamma, double k);

// Distorted Fourier transform of a sampled field, centered at x0:
//   (2 pi)^{-1/2} int dx h(x) (e^{-ikx} + R(k) e^{-i x0 k} e^{i|k||x-x0|}).
// Output lives on the symmetric DFT k-grid (ascending, k = 0 at index n/2). The plane-wave part is
// an FFT; the two half-line integrals split at x0 are integrated exactly for the band-limited
// interpolant of h.
ComplexField1D w_plus_transform(const ComplexField1D& h, double gamma, double x0);

// The same transform applied to the light packet g_delta of an initial state, for many centers y and a
// fixed list of wavenumbers. Transforms of g_delta are computed once by Gauss-Legendre quadrature;
// centers outside supp g_delta need no further work.
class WPlusEvaluator {
public:
    WPlusEvaluator(const InitialStateSpec& spec, double hbar, double gamma, std::vector<double> ks);
    // W(y, k_j) for all j.
    void row(double y, std::vector<cplx>& out) const;
    std::vector<cplx> row(double y) const;
    const std::vector<double>& ks() const { return ks_; }
    double gamma() const { return gamma_; }

private:
    InitialStateSpec spec_;
    double hbar_;
    double gamma_;
    std::vector<double> ks_;
    std::vector<cplx> full_k_;    // int g e^{-ikx}
    std::vector<cplx> full_neg_;  // int g e^{-i|k|x}
    std::vector<cplx> full_pos_;  // int g e^{+i|k|x}
    std::vector<cplx> refl_;
    double lo_, hi_, panel_;
};

}  // namespace decoh
