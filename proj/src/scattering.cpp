#include "decoh/scattering.hpp"

#include "decoh/errors.hpp"
#include "decoh/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace decoh {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

// int_a^b e^{iqx} dx, stable near q = 0.
cplx segment_exp(double q, double a, double b) {
    const double L = b - a;
    const double u = 0.5 * q * L;
    const double sinc = std::abs(u) < 1e-8 ? 1.0 - u * u / 6.0 : std::sin(u) / u;
    return std::polar(L * sinc, 0.5 * q * (a + b));
}

}  // namespace

cplx reflection_coeff(double gamma, double k) {
    if (!(gamma > 0.0)) throw ValidationError("reflection_coeff: gamma must be positive (repulsive model)");
    return -gamma / cplx(gamma, -std::abs(k));
}

cplx transmission_coeff(double gamma, double k) {
    if (!(gamma > 0.0)) throw ValidationError("transmission_coeff: gamma must be positive (repulsive model)");
    return cplx(0.0, -k) / cplx(gamma, -k);
}

ScatteringCoefficients scattering_coefficients(double gamma, double k) {
    return {gamma, k, reflection_coeff(gamma, k), transmission_coeff(gamma, k)};
}

cplx reflection_or_zero(double gamma, double k) { return gamma == 0.0 ? cplx(0.0) : reflection_coeff(gamma, k); }

ComplexField1D w_plus_transform(const ComplexField1D& h, double gamma, double x0) {
    if (gamma < 0.0) throw ValidationError("w_plus_transform: gamma must be nonnegative");
    const Grid1D& g = h.grid;
    const std::size_t n = g.n;
    const double d = g.spacing;

    double hmax = 0.0;
    for (const auto& v : h.values) hmax = std::max(hmax, std::abs(v));
    double reach = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        if (std::abs(h.values[j]) > 1e-12 * hmax) reach = std::max(reach, std::abs(g.x(j) - x0));
    if (reach > 0.5 * n * d) {
        std::ostringstream os;
        os << "w_plus_transform: k-grid spacing " << 2.0 * kPi / (n * d) << " cannot resolve the phase |k||x - x0| for |x - x0| up to "
           << reach << "; enlarge the x-domain to at least " << 2.0 * reach;
        throw ResolutionError(os.str());
    }

    std::vector<cplx> H(h.values);
    fft_forward(H);
    const auto q = fft_wavenumbers(n, d);
    const double dk = 2.0 * kPi / (n * d);

    // Interpolant coefficients c_m with h(x) = sum_m c_m e^{i q_m x}; the Nyquist bin is split evenly.
    std::vector<double> qs;
    std::vector<cplx> cs;
    for (std::size_t m = 0; m < n; ++m) {
        const cplx c = H[m] * std::polar(1.0 / n, -q[m] * g.min);
        if (n % 2 == 0 && m == n / 2) {
            qs.push_back(q[m]);
            cs.push_back(0.5 * c);
            qs.push_back(-q[m]);
            cs.push_back(0.5 * H[m] * std::polar(1.0 / n, q[m] * g.min));
        } else {
            qs.push_back(q[m]);
            cs.push_back(c);
        }
    }

    Grid1D kg;
    kg.n = n;
    kg.spacing = dk;
    kg.min = -dk * static_cast<double>(n / 2);
    ComplexField1D out(kg);
    const double norm_ft = 1.0 / std::sqrt(2.0 * kPi);
    parallel_for(n, [&](std::size_t j) {
        const double k = kg.x(j);
        // plane-wave part from the DFT bin of k
        const std::size_t bin = (j + n - n / 2) % n;
        cplx plane = H[bin] * std::polar(d, -k * g.min);
        cplx scat = 0.0;
        if (gamma > 0.0) {
            const double ka = std::abs(k);
            cplx lower = 0.0, upper = 0.0;
            for (std::size_t m = 0; m < qs.size(); ++m) {
                lower += cs[m] * segment_exp(qs[m] - ka, g.min, x0);
                upper += cs[m] * segment_exp(qs[m] + ka, x0, g.max());
            }
            scat = reflection_coeff(gamma, k) *
                   (std::polar(1.0, (ka - k) * x0) * lower + std::polar(1.0, -(ka + k) * x0) * upper);
        }
        out.values[j] = norm_ft * (plane + scat);
    });
    return out;
}

WPlusEvaluator::WPlusEvaluator(const InitialStateSpec& spec, double hbar, double gamma, std::vector<double> ks)
    : spec_(spec), hbar_(hbar), gamma_(gamma), ks_(std::move(ks)) {
    if (gamma < 0.0) throw ValidationError("W+ evaluator: gamma must be nonnegative");
    // amplitude below ~1e-11 at the cut
    const double ext = std::min(spec.g.extent(1e-22), spec.g.half_width()) * spec.delta;
    lo_ = spec.r0 - ext;
    hi_ = spec.r0 + ext;
    double kmax = 0.0;
    for (double k : ks_) kmax = std::max(kmax, std::abs(k));
    kmax += std::abs(spec.k0(hbar));
    panel_ = std::min(0.25 * spec.delta, 8.0 / std::max(1e-300, kmax));
    const QuadratureRule rule = gauss_legendre_width(lo_, hi_, panel_);
    std::vector<cplx> wg(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) wg[i] = rule.w[i] * spec.g_delta(rule.x[i], hbar);
    full_k_.resize(ks_.size());
    full_neg_.resize(ks_.size());
    full_pos_.resize(ks_.size());
    refl_.resize(ks_.size());
    parallel_for(ks_.size(), [&](std::size_t j) {
        const double k = ks_[j];
        cplx neg = 0.0, pos = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const cplx e = std::polar(1.0, -std::abs(k) * rule.x[i]);
            neg += wg[i] * e;
            pos += wg[i] * std::conj(e);
        }
        full_neg_[j] = neg;
        full_pos_[j] = pos;
        full_k_[j] = k >= 0.0 ? neg : pos;
        refl_[j] = reflection_or_zero(gamma_, k);
    });
}

void WPlusEvaluator::row(double y, std::vector<cplx>& out) const {
    const double nf = 1.0 / std::sqrt(2.0 * kPi);
    out.resize(ks_.size());
    if (gamma_ == 0.0) {
        for (std::size_t j = 0; j < ks_.size(); ++j) out[j] = nf * full_k_[j];
        return;
    }
    if (y >= hi_ || y <= lo_) {
        // Whole packet on one side of y: one half-line integral is a full transform, the other vanishes.
        const bool left = y >= hi_;
        for (std::size_t j = 0; j < ks_.size(); ++j) {
            const double k = ks_[j], ka = std::abs(k);
            const cplx part = left ? std::polar(1.0, (ka - k) * y) * full_neg_[j]
                                   : std::polar(1.0, -(ka + k) * y) * full_pos_[j];
            out[j] = nf * (full_k_[j] + refl_[j] * part);
        }
        return;
    }
    const QuadratureRule lower = gauss_legendre_width(lo_, y, panel_);
    const QuadratureRule upper = gauss_legendre_width(y, hi_, panel_);
    std::vector<cplx> gl(lower.size()), gu(upper.size());
    for (std::size_t i = 0; i < lower.size(); ++i) gl[i] = lower.w[i] * spec_.g_delta(lower.x[i], hbar_);
    for (std::size_t i = 0; i < upper.size(); ++i) gu[i] = upper.w[i] * spec_.g_delta(upper.x[i], hbar_);
    for (std::size_t j = 0; j < ks_.size(); ++j) {
        const double k = ks_[j], ka = std::abs(k);
        cplx pl = 0.0, pu = 0.0;
        for (std::size_t i = 0; i < lower.size(); ++i) pl += gl[i] * std::polar(1.0, -ka * lower.x[i]);
        for (std::size_t i = 0; i < upper.size(); ++i) pu += gu[i] * std::polar(1.0, ka * upper.x[i]);
        out[j] = nf * (full_k_[j] + refl_[j] * (std::polar(1.0, (ka - k) * y) * pl + std::polar(1.0, -(ka + k) * y) * pu));
    }
}

std::vector<cplx> WPlusEvaluator::row(double y) const {
    std::vector<cplx> out;
    row(y, out);
    return out;
}

}  // namespace decoh
