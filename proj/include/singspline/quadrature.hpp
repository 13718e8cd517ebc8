#pragma once

#include <vector>

namespace singspline {

// Gauss-Legendre rule mapped to [0,1]; exact for polynomials of degree
// <= 2*order - 1.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int order);

}  // namespace singspline
