#pragma once

#include <array>
#include <stdexcept>

#include "singspline/common.hpp"
#include "singspline/dyadic.hpp"

namespace singspline {

// The fixed singular map u(s,t) = (s, s*t), collapsing the edge s = 0 of the
// unit square onto the vertex (0,0) of the triangle
// Delta = { (u,v) : 0 < u < 1, 0 < v < u }.

inline std::array<double, 2> map_u(double s, double t) { return {s, s * t}; }

inline std::array<double, 2> inverse_u(double u, double v) {
    if (u <= 0.0) throw std::invalid_argument("inverse_u: singular point, u must be > 0");
    return {u, v / u};
}

inline double jacobian_det_u(double s) { return s; }

// Delta_gamma = { (u,v) : 0 < u < gamma, 0 < v < u }.
struct TriangleDomain {
    Dyadic gamma{1, 0};

    bool contains_open(Dyadic u, Dyadic v) const {
        return Dyadic{0, 0} < u && u < gamma && Dyadic{0, 0} < v && v < u;
    }
    bool contains(double u, double v) const {
        return 0.0 < u && u < gamma.value() && 0.0 < v && v < u;
    }
};

}  // namespace singspline
