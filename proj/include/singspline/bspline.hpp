#pragma once

#include <array>
#include <vector>

#include "singspline/common.hpp"
#include "singspline/dyadic.hpp"

namespace singspline {

// Univariate uniform B-spline space of degree p on [0,1] at dyadic level n:
// open knot vector, interior knots at i * 2^-n, dimension 2^n + p.
// Basis indices are 1-based throughout, matching the mathematical convention.
class SplineSpace {
public:
    SplineSpace(int degree, int level);

    int degree() const { return degree_; }
    int level() const { return level_; }
    int dim() const { return num_spans_ + degree_; }
    int num_spans() const { return num_spans_; }
    double mesh_size() const { return 1.0 / num_spans_; }
    Dyadic mesh_size_dyadic() const { return {1, level_}; }

    // Value of the deriv_order-th derivative of b_i at s. Breakpoint values
    // are right-sided limits, except at s = 1 (left-sided).
    double eval(int i, double s, int deriv_order) const;

    // All p+1 basis functions that are nonzero on the knot span containing s,
    // with derivatives up to max_deriv (<= 2 on this path).
    // ders[k][r] holds the k-th derivative of b_{first_index + r}.
    struct ActiveValues {
        int first_index = 1;  // 1-based
        std::array<std::array<double, kMaxDegree + 1>, 3> ders{};
    };
    void eval_active(double s, int max_deriv, ActiveValues& out) const;

    // Knot span index in [0, num_spans), right-sided at breakpoints.
    int find_span(double s) const;

    // [max(0,(i-p-1))h, min(2^n, i)h]
    DyadicInterval support(int i) const;

    // Greville abscissa of b_i (average of p interior knots of its support).
    double greville(int i) const;

    const std::vector<double>& knots() const { return knots_; }

private:
    int degree_;
    int level_;
    int num_spans_;
    std::vector<double> knots_;
};

// Bernstein polynomials of degree d on [0,1]; the j-th function (1-based,
// j = 1..d+1) is C(d,j-1) t^{j-1} (1-t)^{d-j+1}.
class BernsteinBasis {
public:
    explicit BernsteinBasis(int degree);

    int degree() const { return degree_; }
    int dim() const { return degree_ + 1; }

    double eval(int j, double t, int deriv_order) const;

    // All d+1 values with derivatives up to max_deriv; ders[k][j-1].
    void eval_all(double t, int max_deriv,
                  std::array<std::array<double, kMaxDegree + 1>, 3>& ders) const;

private:
    int degree_;
};

// Locally supported L^2 dual functional for one B-spline: the Gram matrix of
// the p+1 splines active on a single knot span inside supp(b_k) is inverted,
// giving lambda_k(b_i) = delta_ki. The span is the middle one of supp(b_k),
// ties broken toward the left.
class UnivariateDual {
public:
    UnivariateDual(const SplineSpace& space, int k);

    int index() const { return k_; }
    DyadicInterval support_interval() const { return support_; }
    int span() const { return span_; }

    // Weight function (a combination of the active B-splines on the span).
    double weight(double s) const;
    const std::vector<double>& weight_coefficients() const { return coeffs_; }

    template <class F>
    double apply(F&& f, int gauss_order) const;

private:
    SplineSpace space_;
    int k_;
    int span_;  // knot span index in [0, num_spans)
    DyadicInterval support_;
    std::vector<double> coeffs_;  // over b_{span+1} .. b_{span+p+1}
};

}  // namespace singspline

#include "singspline/quadrature.hpp"

namespace singspline {

template <class F>
double UnivariateDual::apply(F&& f, int gauss_order) const {
    const GaussRule& rule = gauss_legendre(gauss_order);
    const double a = support_.lo.value();
    const double len = support_.length();
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double s = a + len * rule.nodes[q];
        sum += rule.weights[q] * weight(s) * f(s);
    }
    return len * sum;
}

}  // namespace singspline
