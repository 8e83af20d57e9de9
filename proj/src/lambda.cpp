#include "decoh/density.hpp"
#include "decoh/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace decoh {

namespace {

const cplx I(0.0, 1.0);

// Adaptive Gauss-Kronrod over consecutive breakpoints.
template <class F>
cplx integrate_pieces(F&& f, std::vector<double> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    cplx s = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        auto re = [&](double x) { return f(x).real(); };
        auto im = [&](double x) { return f(x).imag(); };
        using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
        s += cplx(GK::integrate(re, pts[i], pts[i + 1], 15, 1e-13), GK::integrate(im, pts[i], pts[i + 1], 15, 1e-13));
    }
    return s;
}

// Breakpoints on [a, b]: the ends plus c and c +- j*scale for the near-pole region.
std::vector<double> breaks(double a, double b, double c, double scale) {
    std::vector<double> p{a, b};
    for (double j : {0.0, 1.0, -1.0, 4.0, -4.0, 16.0, -16.0}) {
        const double x = c + j * scale;
        if (x > a && x < b) p.push_back(x);
    }
    return p;
}

double g_band(const Envelope& g) { return g.bandwidth(1e-14); }

}  // namespace

std::string lambda_method_name(LambdaMethod m) {
    switch (m) {
        case LambdaMethod::definition_integral: return "definition-integral";
        case LambdaMethod::rescaled: return "rescaled";
        case LambdaMethod::low_k0: return "low-k0-limit";
    }
    return "?";
}

LambdaMethod parse_lambda_method(const std::string& s) {
    if (s == "definition-integral") return LambdaMethod::definition_integral;
    if (s == "rescaled") return LambdaMethod::rescaled;
    if (s == "low-k0-limit") return LambdaMethod::low_k0;
    throw ValidationError("unknown lambda method '" + s + "'");
}

cplx lambda_scaled(const Envelope& g, double beta, double k0delta, LambdaMethod method) {
    if (beta < 0.0 || !std::isfinite(beta)) throw ValidationError("lambda: beta must be nonnegative");
    if (beta == 0.0) return 1.0;
    const double Z = g_band(g);
    switch (method) {
        case LambdaMethod::rescaled: {
            auto f = [&](double z) { return std::norm(g.ft(z)) * beta / (beta - I * (z + k0delta)); };
            return 1.0 - integrate_pieces(f, breaks(-Z, Z, -k0delta, beta));
        }
        case LambdaMethod::low_k0: {
            auto f = [&](double z) { return cplx(std::norm(g.ft(z)) * beta * beta / (beta * beta + z * z)); };
            return 1.0 - integrate_pieces(f, breaks(-Z, Z, 0.0, beta));
        }
        case LambdaMethod::definition_integral: {
            // unscaled with delta = 1: |g~(k - k0)|^2 T_beta(k)
            auto f = [&](double k) { return std::norm(g.ft(k - k0delta)) * (-I * k) / (beta - I * k); };
            return integrate_pieces(f, breaks(k0delta - Z, k0delta + Z, 0.0, beta));
        }
    }
    return 1.0;
}

LambdaResult lambda_param(const InitialStateSpec& spec, const PhysicalParams& params, LambdaMethod method) {
    LambdaResult r;
    r.method = method;
    const double alpha = params.alpha(), hb = params.hbar;
    if (alpha == 0.0) return r;
    if (method == LambdaMethod::definition_integral) {
        const double k0 = spec.k0(hb), K = g_band(spec.g) / spec.delta;
        auto f = [&](double k) { return std::norm(spec.g_delta_ft(k, hb)) * (-I * k) / (alpha - I * k); };
        r.Lambda = integrate_pieces(f, breaks(k0 - K, k0 + K, 0.0, alpha));
    } else {
        r.Lambda = lambda_scaled(spec.g, alpha * spec.delta, spec.k0(hb) * spec.delta, method);
    }
    r.modulus = std::abs(r.Lambda);
    r.phase = std::arg(r.Lambda);
    if (!(r.modulus <= 1.0 + 1e-8)) {
        std::ostringstream os;
        os << "lambda quadrature failure: |Lambda| = " << r.modulus << " (" << lambda_method_name(method) << ")";
        throw AccuracyError(os.str());
    }
    return r;
}

cplx cross_coherence(const LambdaResult& lam) { return std::conj(lam.Lambda); }

}  // namespace decoh
