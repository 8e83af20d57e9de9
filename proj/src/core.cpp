#include "decoh/core.hpp"

#include "decoh/errors.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace decoh {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------- PhysicalParams

PhysicalParams PhysicalParams::from_ratio(double M, double epsilon, double hbar, double alpha) {
    PhysicalParams p;
    p.M = M;
    p.m = epsilon * M;
    p.hbar = hbar;
    p.alpha0 = alpha * hbar * hbar / p.m;
    return p;
}

void PhysicalParams::validate() const {
    if (!(M > 0.0) || !std::isfinite(M)) throw ValidationError("physical.M must be positive");
    if (!(m > 0.0) || !std::isfinite(m)) throw ValidationError("physical.m must be positive");
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ValidationError("physical.hbar must be positive");
    if (!(alpha0 >= 0.0) || !std::isfinite(alpha0))
        throw ValidationError("physical.alpha0 must be nonnegative (repulsive interaction only)");
}

// ---------------------------------------------------------------- Envelope

struct Envelope::Impl {
    Kind kind;
    double L;
    double c = 1.0;
    std::optional<boost::math::interpolators::cardinal_cubic_b_spline<double>> spline;
    QuadratureRule rule;
    std::vector<double> wg;   // w_i g(x_i)
    std::vector<double> wxg;  // w_i x_i g(x_i)
    double bw12 = 0.0;

    double raw(double x) const {
        if (std::abs(x) >= L) return 0.0;
        switch (kind) {
            case Kind::gaussian_truncated: return std::exp(-0.5 * x * x);
            case Kind::smooth_bump: return std::exp(-1.0 / (1.0 - x * x));
            case Kind::tabulated: return (*spline)(x);
        }
        return 0.0;
    }
    double raw_prime(double x) const {
        if (std::abs(x) >= L) return 0.0;
        switch (kind) {
            case Kind::gaussian_truncated: return -x * std::exp(-0.5 * x * x);
            case Kind::smooth_bump: {
                const double s = 1.0 - x * x;
                return std::exp(-1.0 / s) * (-2.0 * x / (s * s));
            }
            case Kind::tabulated: return spline->prime(x);
        }
        return 0.0;
    }

    cplx ft(double kappa) const {
        if (kind == Kind::gaussian_truncated) return cplx(std::pow(kPi, -0.25) * std::exp(-0.5 * kappa * kappa), 0.0);
        cplx s = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) s += wg[i] * std::polar(1.0, -kappa * rule.x[i]);
        return s / std::sqrt(2.0 * kPi);
    }
    cplx ft_prime(double kappa) const {
        if (kind == Kind::gaussian_truncated)
            return cplx(-kappa * std::pow(kPi, -0.25) * std::exp(-0.5 * kappa * kappa), 0.0);
        cplx s = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) s += wxg[i] * std::polar(1.0, -kappa * rule.x[i]);
        return cplx(0.0, -1.0) * s / std::sqrt(2.0 * kPi);
    }

    double bandwidth(double tail) const {
        double kmax = 8.0;
        while (kmax < 2e4 && std::norm(ft(kmax)) * kmax > 1e-4 * tail) kmax *= 1.5;
        const double h = std::min(0.02, kmax / 4000.0);
        double acc = 0.0;
        double prev = std::norm(ft(kmax));
        for (double k = kmax - h; k > 0.0; k -= h) {
            const double cur = std::norm(ft(k));
            acc += h * (cur + prev);  // both signs of kappa
            prev = cur;
            if (acc > tail) return k + h;
        }
        return 0.0;
    }

    void finish() {
        rule = gauss_legendre_panels(-L, L, 128);
        double n2 = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) n2 += rule.w[i] * raw(rule.x[i]) * raw(rule.x[i]);
        if (!(n2 > 0.0)) throw ValidationError("envelope has zero norm");
        c = 1.0 / std::sqrt(n2);
        wg.resize(rule.size());
        wxg.resize(rule.size());
        for (std::size_t i = 0; i < rule.size(); ++i) {
            wg[i] = rule.w[i] * c * raw(rule.x[i]);
            wxg[i] = wg[i] * rule.x[i];
        }
        bw12 = bandwidth(1e-12);
    }
};

Envelope Envelope::gaussian(double half_width) {
    if (!(half_width > 0.0)) throw ValidationError("envelope half_width must be positive");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::gaussian_truncated;
    impl->L = half_width;
    impl->finish();
    Envelope e;
    e.impl_ = impl;
    return e;
}

Envelope Envelope::bump() {
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::smooth_bump;
    impl->L = 1.0;
    impl->finish();
    Envelope e;
    e.impl_ = impl;
    return e;
}

Envelope Envelope::tabulated(std::vector<double> samples, double half_width) {
    if (samples.size() < 5) throw ValidationError("tabulated envelope needs at least 5 samples");
    if (!(half_width > 0.0)) throw ValidationError("envelope half_width must be positive");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::tabulated;
    impl->L = half_width;
    const double h = 2.0 * half_width / static_cast<double>(samples.size() - 1);
    impl->spline.emplace(samples.begin(), samples.end(), -half_width, h, 0.0, 0.0);
    impl->finish();
    Envelope e;
    e.impl_ = impl;
    return e;
}

Envelope::Kind Envelope::kind() const { return impl_->kind; }
std::string Envelope::kind_name() const {
    switch (impl_->kind) {
        case Kind::gaussian_truncated: return "gaussian-truncated";
        case Kind::smooth_bump: return "smooth-bump";
        case Kind::tabulated: return "tabulated";
    }
    return "?";
}
double Envelope::half_width() const { return impl_->L; }
double Envelope::norm_constant() const { return impl_->c; }
double Envelope::operator()(double x) const { return impl_->c * impl_->raw(x); }
double Envelope::derivative(double x) const { return impl_->c * impl_->raw_prime(x); }
cplx Envelope::ft(double kappa) const { return impl_->ft(kappa); }
cplx Envelope::ft_derivative(double kappa) const { return impl_->ft_prime(kappa); }
double Envelope::bandwidth(double tail) const { return tail == 1e-12 ? impl_->bw12 : impl_->bandwidth(tail); }
const QuadratureRule& Envelope::rule() const { return impl_->rule; }

double Envelope::extent(double tail) const {
    const double L = impl_->L;
    const int n = 20000;
    const double h = L / n;
    double acc = 0.0;
    double prev = 0.0;
    for (int i = n - 1; i >= 0; --i) {
        const double x = h * i;
        const double cur = (*this)(x) * (*this)(x) + (*this)(-x) * (*this)(-x);
        acc += 0.5 * h * (cur + prev);
        prev = cur;
        if (acc > tail) return std::min(L, x + h);
    }
    return 0.0;
}

double Envelope::evenness_defect() const {
    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double x = impl_->L * (i / 1000.0 - 1.0);
        worst = std::max(worst, std::abs((*this)(x) - (*this)(-x)));
    }
    return worst;
}

// ---------------------------------------------------------------- InitialStateSpec

cplx InitialStateSpec::f_plus(double R, double hbar) const {
    return f((R + R0) / sigma) / std::sqrt(sigma) * std::polar(1.0, P0 * R / hbar);
}
cplx InitialStateSpec::f_minus(double R, double hbar) const {
    return f((R - R0) / sigma) / std::sqrt(sigma) * std::polar(1.0, -P0 * R / hbar);
}
cplx InitialStateSpec::f_sigma(double R, double hbar) const {
    if (single_packet()) return f_plus(R, hbar);
    return (f_plus(R, hbar) + f_minus(R, hbar)) / std::sqrt(2.0);
}
cplx InitialStateSpec::df_sigma(double R, double hbar) const {
    const cplx I(0.0, 1.0);
    const double k = P0 / hbar;
    const double s32 = sigma * std::sqrt(sigma);
    const cplx dp = (f.derivative((R + R0) / sigma) / s32 + I * k * f((R + R0) / sigma) / std::sqrt(sigma)) *
                    std::polar(1.0, k * R);
    if (single_packet()) return dp;
    const cplx dm = (f.derivative((R - R0) / sigma) / s32 - I * k * f((R - R0) / sigma) / std::sqrt(sigma)) *
                    std::polar(1.0, -k * R);
    return (dp + dm) / std::sqrt(2.0);
}
cplx InitialStateSpec::g_delta(double r, double hbar) const {
    return g((r - r0) / delta) / std::sqrt(delta) * std::polar(1.0, q0 * r / hbar);
}
cplx InitialStateSpec::dg_delta(double r, double hbar) const {
    const cplx I(0.0, 1.0);
    const double k = q0 / hbar;
    return (g.derivative((r - r0) / delta) / (delta * std::sqrt(delta)) + I * k * g((r - r0) / delta) / std::sqrt(delta)) *
           std::polar(1.0, k * r);
}
cplx InitialStateSpec::f_plus_ft(double k, double hbar) const {
    const double kc = k - P0 / hbar;
    return std::sqrt(sigma) * std::polar(1.0, kc * R0) * f.ft(sigma * kc);
}
cplx InitialStateSpec::f_minus_ft(double k, double hbar) const {
    const double kc = k + P0 / hbar;
    return std::sqrt(sigma) * std::polar(1.0, -kc * R0) * f.ft(sigma * kc);
}
cplx InitialStateSpec::g_delta_ft(double k, double hbar) const {
    const double kc = k - k0(hbar);
    return std::sqrt(delta) * std::polar(1.0, -kc * r0) * g.ft(delta * kc);
}

SupportIntervals InitialStateSpec::intervals() const {
    return {R0 - sigma, R0 + sigma, -R0 - sigma, -R0 + sigma};
}

std::vector<std::pair<double, double>> InitialStateSpec::f_support() const {
    const double h = f_support_half();
    if (single_packet()) return {{-h, h}};
    if (R0 - h <= -R0 + h) return {{-R0 - h, R0 + h}};
    return {{-R0 - h, -R0 + h}, {R0 - h, R0 + h}};
}

std::vector<std::string> InitialStateSpec::validate(bool require_even_g) const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string("initial_state.") + name + " must be positive");
    };
    auto nonneg = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ValidationError(std::string("initial_state.") + name + " must be nonnegative");
    };
    positive(sigma, "sigma");
    positive(delta, "delta");
    nonneg(R0, "R0");
    nonneg(P0, "P0");
    nonneg(q0, "q0");
    if (!std::isfinite(r0)) throw ValidationError("initial_state.r0 must be finite");
    if (require_even_g && g.evenness_defect() > 1e-12)
        throw ValidationError("initial_state.g: light envelope must be even (max |g(x)-g(-x)| = " +
                              fmt(g.evenness_defect()) + ")");
    std::vector<std::string> warnings;
    if (!(R0 > sigma + delta + std::abs(r0)))
        warnings.push_back("geometric condition R0 > sigma + delta + |r0| violated (R0 = " + fmt(R0) +
                           ", sigma + delta + |r0| = " + fmt(sigma + delta + std::abs(r0)) + ")");
    return warnings;
}

// ---------------------------------------------------------------- grids and fields

Grid1D Grid1D::symmetric(std::size_t n, double half_width) {
    if (n < 2 || !(half_width > 0.0)) throw ValidationError("grid needs n >= 2 and positive half_width");
    Grid1D g;
    g.n = n;
    g.spacing = 2.0 * half_width / static_cast<double>(n);
    g.min = -g.spacing * static_cast<double>(n / 2);
    return g;
}

std::vector<double> Grid1D::points() const {
    std::vector<double> p(n);
    for (std::size_t j = 0; j < n; ++j) p[j] = x(j);
    return p;
}

double norm(const ComplexField1D& a) {
    double s = 0.0;
    for (const auto& v : a.values) s += std::norm(v);
    return std::sqrt(s * a.grid.spacing);
}

double norm(const ComplexField2D& a) {
    double s = 0.0;
    for (const auto& v : a.values) s += std::norm(v);
    return std::sqrt(s * a.grid_r.spacing * a.grid_R.spacing);
}

cplx inner(const ComplexField1D& a, const ComplexField1D& b) {
    if (a.grid != b.grid) throw DimensionError("inner: grid mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += std::conj(a.values[i]) * b.values[i];
    return s * a.grid.spacing;
}

cplx inner(const ComplexField2D& a, const ComplexField2D& b) {
    if (a.grid_r != b.grid_r || a.grid_R != b.grid_R) throw DimensionError("inner: grid mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += std::conj(a.values[i]) * b.values[i];
    return s * a.grid_r.spacing * a.grid_R.spacing;
}

double distance(const ComplexField2D& a, const ComplexField2D& b) {
    if (a.grid_r != b.grid_r || a.grid_R != b.grid_R) throw DimensionError("distance: grid mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += std::norm(a.values[i] - b.values[i]);
    return std::sqrt(s * a.grid_r.spacing * a.grid_R.spacing);
}

ComplexField1D sample(const Grid1D& grid, const std::function<cplx(double)>& fn) {
    ComplexField1D out(grid);
    for (std::size_t j = 0; j < grid.n; ++j) out.values[j] = fn(grid.x(j));
    return out;
}

void check_initial_resolution(const InitialStateSpec& spec, const PhysicalParams& params, const Grid1D& grid_r,
                              const Grid1D& grid_R) {
    struct AxisCheck {
        std::string axis;
        double ratio;  // > 1 means violated
        std::string detail;
    };
    std::vector<AxisCheck> bad;
    const double hbar = params.hbar;

    auto coverage = [&](const std::string& axis, const Grid1D& g, double lo, double hi) {
        if (lo < g.min + g.spacing || hi > g.max() - g.spacing)
            bad.push_back({axis, 1e300,
                           "grid [" + fmt(g.min) + ", " + fmt(g.max()) + ") does not cover support [" + fmt(lo) + ", " +
                               fmt(hi) + "]"});
    };
    for (auto [lo, hi] : spec.f_support()) coverage("R", grid_R, lo, hi);
    coverage("r", grid_r, spec.g_support().first, spec.g_support().second);

    auto phase = [&](const std::string& axis, const Grid1D& g, double p, const char* name) {
        if (p <= 0.0) return;
        const double per_period = 2.0 * kPi * hbar / (p * g.spacing);
        if (per_period < 8.0)
            bad.push_back({axis, 8.0 / per_period,
                           std::string("phase ") + name + " has " + fmt(per_period) +
                               " points per period, need >= 8 (spacing <= " + fmt(2.0 * kPi * hbar / (8.0 * p)) + ")"});
    };
    phase("R", grid_R, spec.P0, "P0 R/hbar");
    phase("r", grid_r, spec.q0, "q0 r/hbar");

    auto band = [&](const std::string& axis, const Grid1D& g, double kmax) {
        const double nyq = kPi / g.spacing;
        if (kmax > nyq)
            bad.push_back({axis, kmax / nyq,
                           "spectral content up to k = " + fmt(kmax) + " exceeds Nyquist " + fmt(nyq) +
                               " (spacing <= " + fmt(kPi / kmax) + ")"});
    };
    band("R", grid_R, spec.P0 / hbar + spec.f.bandwidth(1e-10) / spec.sigma);
    band("r", grid_r, spec.k0(hbar) + spec.g.bandwidth(1e-10) / spec.delta);

    if (bad.empty()) return;
    auto worst = std::max_element(bad.begin(), bad.end(), [](auto& a, auto& b) { return a.ratio < b.ratio; });
    throw ResolutionError("under-resolved axis " + worst->axis + ": " + worst->detail);
}

ComplexField2D build_initial_state(const InitialStateSpec& spec, const PhysicalParams& params, const Grid1D& grid_r,
                                   const Grid1D& grid_R) {
    params.validate();
    spec.validate(true);
    check_initial_resolution(spec, params, grid_r, grid_R);
    ComplexField2D psi(grid_r, grid_R);
    std::vector<cplx> fR(grid_R.n), gr(grid_r.n);
    for (std::size_t j = 0; j < grid_R.n; ++j) fR[j] = spec.f_sigma(grid_R.x(j), params.hbar);
    for (std::size_t i = 0; i < grid_r.n; ++i) gr[i] = spec.g_delta(grid_r.x(i), params.hbar);
    for (std::size_t i = 0; i < grid_r.n; ++i)
        for (std::size_t j = 0; j < grid_R.n; ++j) psi.at(i, j) = gr[i] * fR[j];
    return psi;
}

}  // namespace decoh
