#pragma once

#include <cmath>

#include "singspline/fields.hpp"
#include "singspline/hier_mesh.hpp"
#include "singspline/quadrature.hpp"

namespace singspline {

// Integral of f over one element: pullback to the parameter rectangle with
// Jacobian factor s, tensor Gauss of the given order per direction. For the
// apex triangle the rectangle collapses the vertex (a Duffy-type transform),
// so all nodes stay interior and the 1/s factors of derivative integrands
// never blow up.
template <class F>
double integrate_element(const HierElement& e, F&& f, int gauss_order) {
    const GaussRule& rule = gauss_legendre(gauss_order);
    const double s0 = e.s0.value(), s1 = e.s1.value();
    const double t0 = e.t0.value(), t1 = e.t1.value();
    const double jac = (s1 - s0) * (t1 - t0);
    double sum = 0.0;
    for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
        const double s = s0 + (s1 - s0) * rule.nodes[a];
        double inner = 0.0;
        for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
            const double t = t0 + (t1 - t0) * rule.nodes[b];
            inner += rule.weights[b] * f(s, s * t);
        }
        sum += rule.weights[a] * s * inner;
    }
    return jac * sum;
}

template <class F>
double integrate_mesh(const HierMesh& mesh, F&& f, int gauss_order) {
    double sum = 0.0;
    for (const HierElement& e : mesh.elements()) sum += integrate_element(e, f, gauss_order);
    return sum;
}

// Squared H^q seminorm contribution of one element (q in {0,1,2}; each
// multi-index |alpha| = q counted once).
double sobolev_seminorm_sq_element(const HierElement& e, const ScalarField& f, int q,
                                   int gauss_order);

inline double sobolev_seminorm_element(const HierElement& e, const ScalarField& f, int q,
                                       int gauss_order) {
    return std::sqrt(sobolev_seminorm_sq_element(e, f, q, gauss_order));
}

double sobolev_seminorm(const HierMesh& mesh, const ScalarField& f, int q, int gauss_order);

// Full H^k norm: sqrt of the sum of squared seminorms of order 0..k.
double sobolev_norm(const HierMesh& mesh, const ScalarField& f, int k, int gauss_order);

}  // namespace singspline
