#include "singspline/norms.hpp"

#include <stdexcept>

namespace singspline {

double sobolev_seminorm_sq_element(const HierElement& e, const ScalarField& f, int q,
                                   int gauss_order) {
    switch (q) {
        case 0:
            return integrate_element(
                e, [&](double u, double v) { double w = f.value(u, v); return w * w; },
                gauss_order);
        case 1:
            return integrate_element(
                e,
                [&](double u, double v) {
                    Jet2 j = f.jet(u, v);
                    return j.du * j.du + j.dv * j.dv;
                },
                gauss_order);
        case 2:
            return integrate_element(
                e,
                [&](double u, double v) {
                    Jet2 j = f.jet(u, v);
                    return j.duu * j.duu + j.duv * j.duv + j.dvv * j.dvv;
                },
                gauss_order);
        default:
            throw std::invalid_argument("sobolev_seminorm: order q must be in {0,1,2}");
    }
}

double sobolev_seminorm(const HierMesh& mesh, const ScalarField& f, int q, int gauss_order) {
    double sum = 0.0;
    for (const HierElement& e : mesh.elements())
        sum += sobolev_seminorm_sq_element(e, f, q, gauss_order);
    return std::sqrt(sum);
}

double sobolev_norm(const HierMesh& mesh, const ScalarField& f, int k, int gauss_order) {
    double sum = 0.0;
    for (int q = 0; q <= k; ++q) {
        double s = sobolev_seminorm(mesh, f, q, gauss_order);
        sum += s * s;
    }
    return std::sqrt(sum);
}

}  // namespace singspline
