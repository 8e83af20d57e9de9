#pragma once

#include <cstddef>
#include <vector>

namespace decoh {

struct QuadratureRule {
    std::vector<double> x;
    std::vector<double> w;
    std::size_t size() const { return x.size(); }
    void append(const QuadratureRule& other);
};

// 16-point Gauss-Legendre on each of `panels` equal panels of [a, b].
QuadratureRule gauss_legendre_panels(double a, double b, std::size_t panels);

// Composite rule with panels no wider than max_width.
QuadratureRule gauss_legendre_width(double a, double b, double max_width);

// n-point Gauss-Laguerre rule for integral_0^inf e^{-x} h(x) dx.
QuadratureRule gauss_laguerre(int n);

}  // namespace decoh
