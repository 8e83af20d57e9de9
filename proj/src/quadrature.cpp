#include "decoh/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/laguerre.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace decoh {

void QuadratureRule::append(const QuadratureRule& other) {
    x.insert(x.end(), other.x.begin(), other.x.end());
    w.insert(w.end(), other.w.begin(), other.w.end());
}

namespace {

// Nodes/weights of the 16-point rule on [-1, 1], ascending.
const QuadratureRule& gl16() {
    static const QuadratureRule rule = [] {
        using G = boost::math::quadrature::gauss<double, 16>;
        QuadratureRule r;
        const auto& a = G::abscissa();
        const auto& wt = G::weights();
        for (std::size_t i = a.size(); i-- > 0;) {
            r.x.push_back(-a[i]);
            r.w.push_back(wt[i]);
        }
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0.0) continue;
            r.x.push_back(a[i]);
            r.w.push_back(wt[i]);
        }
        return r;
    }();
    return rule;
}

}  // namespace

QuadratureRule gauss_legendre_panels(double a, double b, std::size_t panels) {
    if (panels == 0) throw std::invalid_argument("gauss_legendre_panels: zero panels");
    const auto& base = gl16();
    QuadratureRule out;
    out.x.reserve(panels * base.size());
    out.w.reserve(panels * base.size());
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + h * static_cast<double>(p);
        const double c = lo + 0.5 * h;
        for (std::size_t i = 0; i < base.size(); ++i) {
            out.x.push_back(c + 0.5 * h * base.x[i]);
            out.w.push_back(0.5 * h * base.w[i]);
        }
    }
    return out;
}

QuadratureRule gauss_legendre_width(double a, double b, double max_width) {
    if (b <= a) return {};
    const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / max_width)));
    return gauss_legendre_panels(a, b, panels);
}

QuadratureRule gauss_laguerre(int n) {
    static std::mutex mtx;
    static std::map<int, QuadratureRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    if (auto it = cache.find(n); it != cache.end()) return it->second;

    // Golub-Welsch: Jacobi matrix with diagonal 2i+1 and off-diagonal i+1.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        J(i, i) = 2.0 * i + 1.0;
        if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = i + 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    QuadratureRule r;
    for (int i = 0; i < n; ++i) {
        double x = es.eigenvalues()(i);
        // Newton polish on L_n using L_n' = n (L_n - L_{n-1}) / x.
        for (int it = 0; it < 3; ++it) {
            const double ln = boost::math::laguerre(n, x);
            const double lm = boost::math::laguerre(n - 1, x);
            const double dl = n * (ln - lm) / x;
            x -= ln / dl;
        }
        const double lp = boost::math::laguerre(n + 1, x);
        r.x.push_back(x);
        r.w.push_back(x / ((n + 1.0) * (n + 1.0) * lp * lp));
    }
    cache.emplace(n, r);
    return r;
}

}  // namespace decoh
