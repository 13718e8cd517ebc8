#include "singspline/bspline.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace singspline {

namespace {

// Basis functions and derivatives on one knot span (Cox-de Boor, the
// standard derivative table algorithm). span_knot is the index i with
// U[i] <= s < U[i+1]. ders[k][r] = k-th derivative of N_{i-p+r}.
void ders_basis_funs(int span_knot, double s, int p, int nders,
                     const std::vector<double>& U,
                     double ders[][kMaxDegree + 1]) {
    double ndu[kMaxDegree + 1][kMaxDegree + 1];
    double a[2][kMaxDegree + 1];
    double left[kMaxDegree + 1], right[kMaxDegree + 1];

    ndu[0][0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = s - U[span_knot + 1 - j];
        right[j] = U[span_knot + j] - s;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            double temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }
    for (int j = 0; j <= p; ++j) ders[0][j] = ndu[j][p];

    const int kmax = std::min(nders, p);
    for (int k = 1; k <= nders; ++k)
        for (int j = 0; j <= p; ++j) ders[k][j] = 0.0;

    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a[0][0] = 1.0;
        for (int k = 1; k <= kmax; ++k) {
            double d = 0.0;
            const int rk = r - k, pk = p - k;
            if (r >= k) {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                d = a[s2][0] * ndu[rk][pk];
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                d += a[s2][j] * ndu[rk + j][pk];
            }
            if (r <= pk) {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                d += a[s2][k] * ndu[r][pk];
            }
            ders[k][r] = d;
            std::swap(s1, s2);
        }
    }
    double factor = p;
    for (int k = 1; k <= kmax; ++k) {
        for (int j = 0; j <= p; ++j) ders[k][j] *= factor;
        factor *= (p - k);
    }
}

}  // namespace

SplineSpace::SplineSpace(int degree, int level) : degree_(degree), level_(level) {
    if (degree < 1 || degree > kMaxDegree)
        throw std::invalid_argument("SplineSpace: degree must be in [1, " +
                                    std::to_string(kMaxDegree) + "]");
    if (level < 0 || level > 30) throw std::invalid_argument("SplineSpace: bad level");
    num_spans_ = 1 << level;
    const double h = mesh_size();
    knots_.resize(dim() + degree_ + 1);
    for (std::size_t j = 0; j < knots_.size(); ++j) {
        int clamped = std::clamp<int>(static_cast<int>(j) - degree_, 0, num_spans_);
        knots_[j] = clamped * h;
    }
}

int SplineSpace::find_span(double s) const {
    int j = static_cast<int>(std::floor(s * num_spans_));
    return std::clamp(j, 0, num_spans_ - 1);
}

void SplineSpace::eval_active(double s, int max_deriv, ActiveValues& out) const {
    double ders[3][kMaxDegree + 1];
    const int span = find_span(s);
    ders_basis_funs(span + degree_, s, degree_, max_deriv, knots_, ders);
    out.first_index = span + 1;
    for (int k = 0; k <= max_deriv; ++k)
        for (int r = 0; r <= degree_; ++r) out.ders[k][r] = ders[k][r];
}

double SplineSpace::eval(int i, double s, int deriv_order) const {
    if (i < 1 || i > dim()) throw std::out_of_range("SplineSpace::eval: index out of range");
    if (deriv_order < 0 || deriv_order > degree_)
        throw std::invalid_argument("SplineSpace::eval: deriv_order must be in [0, degree]");
    double ders[kMaxDegree + 1][kMaxDegree + 1];
    const int span = find_span(s);
    ders_basis_funs(span + degree_, s, degree_, deriv_order, knots_, ders);
    const int r = (i - 1) - span;
    if (r < 0 || r > degree_) return 0.0;
    return ders[deriv_order][r];
}

DyadicInterval SplineSpace::support(int i) const {
    if (i < 1 || i > dim()) throw std::out_of_range("SplineSpace::support: index out of range");
    const std::int64_t lo = std::max<std::int64_t>(0, i - degree_ - 1);
    const std::int64_t hi = std::min<std::int64_t>(num_spans_, i);
    return {Dyadic{lo, level_}, Dyadic{hi, level_}};
}

double SplineSpace::greville(int i) const {
    double sum = 0.0;
    for (int k = 0; k < degree_; ++k) sum += knots_[i + k];
    return sum / degree_;
}

BernsteinBasis::BernsteinBasis(int degree) : degree_(degree) {
    if (degree < 0 || degree > kMaxDegree)
        throw std::invalid_argument("BernsteinBasis: degree must be in [0, " +
                                    std::to_string(kMaxDegree) + "]");
}

void BernsteinBasis::eval_all(double t, int max_deriv,
                              std::array<std::array<double, kMaxDegree + 1>, 3>& ders) const {
    // Values of all Bernstein polynomials of degrees d, d-1, d-2 at t; the
    // derivative of degree-d functions is a difference of degree-(d-1) ones.
    const int d = degree_;
    double rows[3][kMaxDegree + 1];  // rows[q] = degree (d - q) values
    const int qmax = std::min(max_deriv, 2);
    for (int q = qmax; q >= 0; --q) {
        const int deg = d - q;
        double* row = rows[q];
        if (deg < 0) {
            for (int j = 0; j <= kMaxDegree; ++j) row[j] = 0.0;
            continue;
        }
        row[0] = 1.0;
        for (int k = 1; k <= deg; ++k) {
            double saved = 0.0;
            for (int j = 0; j < k; ++j) {
                double tmp = row[j];
                row[j] = saved + (1.0 - t) * tmp;
                saved = t * tmp;
            }
            row[k] = saved;
        }
    }
    for (int j = 0; j <= d; ++j) ders[0][j] = rows[0][j];
    if (max_deriv >= 1) {
        for (int j = 0; j <= d; ++j) {
            double lo = (j >= 1 && d >= 1) ? rows[1][j - 1] : 0.0;
            double hi = (j <= d - 1 && d >= 1) ? rows[1][j] : 0.0;
            ders[1][j] = d * (lo - hi);
        }
    }
    if (max_deriv >= 2) {
        for (int j = 0; j <= d; ++j) {
            double m2 = (j >= 2 && d >= 2) ? rows[2][j - 2] : 0.0;
            double m1 = (j >= 1 && j <= d - 1 && d >= 2) ? rows[2][j - 1] : 0.0;
            double m0 = (j <= d - 2 && d >= 2) ? rows[2][j] : 0.0;
            ders[2][j] = d * (d - 1) * (m2 - 2 * m1 + m0);
        }
    }
}

double BernsteinBasis::eval(int j, double t, int deriv_order) const {
    if (j < 1 || j > dim()) throw std::out_of_range("BernsteinBasis::eval: index out of range");
    if (deriv_order < 0) throw std::invalid_argument("BernsteinBasis::eval: bad deriv_order");
    if (deriv_order > degree_) return 0.0;
    if (deriv_order > 2)
        throw std::invalid_argument("BernsteinBasis::eval: derivatives above order 2 unsupported");
    std::array<std::array<double, kMaxDegree + 1>, 3> ders;
    eval_all(t, deriv_order, ders);
    return ders[deriv_order][j - 1];
}

UnivariateDual::UnivariateDual(const SplineSpace& space, int k) : space_(space), k_(k) {
    const int p = space.degree();
    if (k < 1 || k > space.dim())
        throw std::out_of_range("UnivariateDual: index out of range");
    const int jmin = std::max(0, k - 1 - p);
    const int jmax = std::min(space.num_spans() - 1, k - 1);
    span_ = jmin + (jmax - jmin) / 2;  // middle span, ties toward the left
    support_ = {Dyadic{span_, space.level()}, Dyadic{span_ + 1, space.level()}};

    // Local Gram of the p+1 active splines on the span, by quadrature exact
    // for degree 2p.
    const GaussRule& rule = gauss_legendre(p + 1);
    const double a = support_.lo.value();
    const double len = support_.length();
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p + 1, p + 1);
    SplineSpace::ActiveValues av;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double s = a + len * rule.nodes[q];
        space.eval_active(s, 0, av);
        for (int r = 0; r <= p; ++r)
            for (int c = 0; c <= p; ++c)
                gram(r, c) += len * rule.weights[q] * av.ders[0][r] * av.ders[0][c];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (!lu.isInvertible())
        throw numerical_error("UnivariateDual: singular local Gram matrix");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p + 1);
    rhs((k - 1) - span_) = 1.0;
    Eigen::VectorXd c = lu.solve(rhs);
    coeffs_.assign(c.data(), c.data() + p + 1);
}

double UnivariateDual::weight(double s) const {
    SplineSpace::ActiveValues av;
    space_.eval_active(s, 0, av);
    // On the dual's span the active splines are b_{span+1}..b_{span+p+1}.
    double w = 0.0;
    for (int r = 0; r <= space_.degree(); ++r) w += coeffs_[r] * av.ders[0][r];
    return w;
}

}  // namespace singspline
