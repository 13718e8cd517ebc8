#include "singspline/hier_space.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "singspline/common.hpp"
#include "singspline/singular_map.hpp"

namespace singspline {

HierSpace::HierSpace(int degree, int level)
    : degree_(degree), level_(level), s_space_(degree, level) {
    for (int m = 1; m <= level; ++m) t_spaces_.emplace_back(degree, m);
    for (int d = 0; d <= degree; ++d) bernsteins_.emplace_back(d);
}

HierSpace HierSpace::build(int degree, int level) {
    if (level < 0) throw std::invalid_argument("HierSpace::build: level must be >= 0");
    HierSpace sp(degree, level);
    const int p = degree;
    // singular block: Bernstein degree i-1 in t, j = 1..i
    for (int i = 1; i <= p + 1; ++i) {
        for (int j = 1; j <= i; ++j) {
            HierBasisFunction fn;
            fn.i = i;
            fn.j = j;
            fn.block = BasisBlock::singular;
            fn.s_support = sp.s_space_.support(i);
            fn.t_support = {Dyadic{0, 0}, Dyadic{1, 0}};
            sp.basis_.push_back(fn);
        }
    }
    // regular blocks: level m covers i in [p + 2^{m-1} + 1, p + 2^m]
    for (int m = 1; m <= level; ++m) {
        sp.block_offset_.push_back(static_cast<int>(sp.basis_.size()));
        const SplineSpace& ts = sp.t_space(m);
        const int i_lo = p + (1 << (m - 1)) + 1;
        const int i_hi = p + (1 << m);
        for (int i = i_lo; i <= i_hi; ++i) {
            for (int j = 1; j <= ts.dim(); ++j) {
                HierBasisFunction fn;
                fn.i = i;
                fn.j = j;
                fn.block = BasisBlock::regular;
                fn.t_level = m;
                fn.s_support = sp.s_space_.support(i);
                fn.t_support = ts.support(j);
                sp.basis_.push_back(fn);
            }
        }
    }
    return sp;
}

int HierSpace::block_level_of(int i) const {
    if (i < degree_ + 2 || i > s_space_.dim())
        throw std::out_of_range("HierSpace::block_level_of: index not in a regular block");
    return std::bit_width(static_cast<unsigned>(i - degree_ - 1));
}

int HierSpace::index_of(int i, int j) const {
    if (i <= degree_ + 1) return i * (i - 1) / 2 + (j - 1);
    const int m = block_level_of(i);
    const int i_lo = degree_ + (1 << (m - 1)) + 1;
    const int t_dim = (1 << m) + degree_;
    return block_offset_.at(m - 1) + (i - i_lo) * t_dim + (j - 1);
}

Jet2 HierSpace::combine(const double* f, const double* g, double s, double t, int max_deriv) {
    // beta(u,v) = f(u) g(v/u) at s = u, t = v/u; chain rule for u^{-1}.
    Jet2 r;
    r.v = f[0] * g[0];
    if (max_deriv >= 1) {
        r.du = f[1] * g[0] - (t / s) * f[0] * g[1];
        r.dv = f[0] * g[1] / s;
    }
    if (max_deriv >= 2) {
        const double ts = t / s;
        r.duu = f[2] * g[0] - 2 * ts * f[1] * g[1] + ts * ts * f[0] * g[2]
                + 2 * (t / (s * s)) * f[0] * g[1];
        r.duv = (f[1] * g[1] - ts * f[0] * g[2] - f[0] * g[1] / s) / s;
        r.dvv = f[0] * g[2] / (s * s);
    }
    return r;
}

Jet2 HierSpace::singular_vertex_jet(const HierBasisFunction& fn, double u) const {
    // Limits at the collapsed vertex; only beta_{1,1} has a nonzero value.
    Jet2 r;
    if (fn.block != BasisBlock::singular) return r;
    if (fn.i == 1) {
        r.v = s_space_.eval(1, u, 0);
        r.du = s_space_.eval(1, u, 1);
        if (degree_ >= 2) r.duu = s_space_.eval(1, u, 2);
        return r;
    }
    if (fn.i == 2) {
        // d/dv limit: b_2'(0) * d/dt B^1_j, ray-independent
        const double c = s_space_.eval(2, 0.0, 1);
        r.dv = c * (fn.j == 1 ? -1.0 : 1.0);
    }
    return r;
}

Jet2 HierSpace::eval(int fn_index, double u, double v, int max_deriv) const {
    const HierBasisFunction& fn = basis_.at(fn_index);
    if (u < kSingularGuard) return singular_vertex_jet(fn, u);
    const double t = std::clamp(v / u, 0.0, 1.0);
    const int p = degree_;
    SplineSpace::ActiveValues sv;
    s_space_.eval_active(u, max_deriv, sv);
    double f[3] = {0, 0, 0};
    const int r = (fn.i - 1) - (sv.first_index - 1);
    if (r >= 0 && r <= p)
        for (int k = 0; k <= max_deriv; ++k) f[k] = sv.ders[k][r];

    double g[3] = {0, 0, 0};
    if (fn.block == BasisBlock::singular) {
        std::array<std::array<double, kMaxDegree + 1>, 3> bv;
        bernsteins_[fn.i - 1].eval_all(t, max_deriv, bv);
        for (int k = 0; k <= max_deriv; ++k) g[k] = bv[k][fn.j - 1];
    } else {
        SplineSpace::ActiveValues tv;
        t_space(fn.t_level).eval_active(t, max_deriv, tv);
        const int rt = (fn.j - 1) - (tv.first_index - 1);
        if (rt >= 0 && rt <= p)
            for (int k = 0; k <= max_deriv; ++k) g[k] = tv.ders[k][rt];
    }
    return combine(f, g, u, t, max_deriv);
}

double HierSpace::eval_value(int fn_index, double u, double v) const {
    return eval(fn_index, u, v, 0).v;
}

void HierSpace::eval_point_all(double u, double v, int max_deriv,
                               std::vector<ActiveJet>& out) const {
    out.clear();
    const int p = degree_;
    if (u < kSingularGuard) {
        for (int idx = 0; idx < singular_block_dim(p); ++idx)
            out.push_back({idx, singular_vertex_jet(basis_[idx], u)});
        return;
    }
    const double t = std::clamp(v / u, 0.0, 1.0);
    SplineSpace::ActiveValues sv;
    s_space_.eval_active(u, max_deriv, sv);

    std::array<std::array<double, kMaxDegree + 1>, 3> bern_vals;
    int bern_deg = -1;
    SplineSpace::ActiveValues tv;
    int tv_level = -1;

    for (int r = 0; r <= p; ++r) {
        const int i = sv.first_index + r;
        double f[3] = {0, 0, 0};
        for (int k = 0; k <= max_deriv; ++k) f[k] = sv.ders[k][r];
        if (i <= p + 1) {
            const int d = i - 1;
            if (bern_deg != d) {
                bernsteins_[d].eval_all(t, max_deriv, bern_vals);
                bern_deg = d;
            }
            for (int j = 1; j <= i; ++j) {
                double g[3] = {0, 0, 0};
                for (int k = 0; k <= max_deriv; ++k) g[k] = bern_vals[k][j - 1];
                out.push_back({index_of(i, j), combine(f, g, u, t, max_deriv)});
            }
        } else {
            const int m = block_level_of(i);
            if (tv_level != m) {
                t_space(m).eval_active(t, max_deriv, tv);
                tv_level = m;
            }
            for (int rt = 0; rt <= p; ++rt) {
                const int j = tv.first_index + rt;
                double g[3] = {0, 0, 0};
                for (int k = 0; k <= max_deriv; ++k) g[k] = tv.ders[k][rt];
                out.push_back({index_of(i, j), combine(f, g, u, t, max_deriv)});
            }
        }
    }
}

std::vector<int> support_extension(const HierMesh& mesh, int elem, const HierSpace& space) {
    const HierElement& e = mesh.elements().at(elem);
    std::vector<int> region;
    std::vector<int> tmp;
    for (const HierBasisFunction& fn : space.basis()) {
        if (!fn.s_support.overlaps_open(e.s_interval())) continue;
        if (!fn.t_support.overlaps_open(e.t_interval())) continue;
        tmp.clear();
        mesh.elements_overlapping(fn.s_support, fn.t_support, tmp);
        region.insert(region.end(), tmp.begin(), tmp.end());
    }
    std::sort(region.begin(), region.end());
    region.erase(std::unique(region.begin(), region.end()), region.end());
    return region;
}

double self_similarity_mismatch(const HierSpace& fine, const HierSpace& coarse,
                                const std::vector<std::array<double, 2>>& samples) {
    if (fine.level() != coarse.level() + 1 || fine.degree() != coarse.degree())
        throw std::invalid_argument("self_similarity_mismatch: spaces must be consecutive levels");
    const int i_max = 1 << (fine.level() - 1);
    double worst = 0.0;
    for (int idx = 0; idx < fine.dim(); ++idx) {
        const HierBasisFunction& fn = fine.fn(idx);
        if (fn.i > i_max) continue;
        const int cidx = coarse.index_of(fn.i, fn.j);
        for (const auto& pt : samples) {
            const double a = fine.eval_value(idx, pt[0], pt[1]);
            const double b = coarse.eval_value(cidx, 2 * pt[0], 2 * pt[1]);
            worst = std::max(worst, std::abs(a - b));
        }
    }
    return worst;
}

double polynomial_embedding_residual(const HierSpace& space, const HierMesh& mesh, int elem) {
    const HierElement& e = mesh.elements().at(elem);
    // active basis functions on the element
    std::vector<int> active;
    for (int idx = 0; idx < space.dim(); ++idx) {
        const HierBasisFunction& fn = space.fn(idx);
        if (fn.s_support.overlaps_open(e.s_interval()) &&
            fn.t_support.overlaps_open(e.t_interval()))
            active.push_back(idx);
    }
    const int grid = 6;
    const int nsamples = grid * grid;
    const double s0 = e.s0.value(), s1 = e.s1.value();
    const double t0 = e.t0.value(), t1 = e.t1.value();
    std::vector<std::array<double, 2>> pts;
    pts.reserve(nsamples);
    for (int a = 0; a < grid; ++a)
        for (int b = 0; b < grid; ++b) {
            const double s = s0 + (s1 - s0) * (a + 0.5) / grid;
            const double t = t0 + (t1 - t0) * (b + 0.5) / grid;
            pts.push_back({s, s * t});
        }
    Eigen::MatrixXd A(nsamples, static_cast<int>(active.size()));
    for (int r = 0; r < nsamples; ++r)
        for (std::size_t c = 0; c < active.size(); ++c)
            A(r, static_cast<int>(c)) = space.eval_value(active[c], pts[r][0], pts[r][1]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);

    const int p = space.degree();
    double worst = 0.0;
    for (int a = 0; a <= p; ++a) {
        for (int b = 0; a + b <= p; ++b) {
            Eigen::VectorXd rhs(nsamples);
            for (int r = 0; r < nsamples; ++r)
                rhs(r) = std::pow(pts[r][0], a) * std::pow(pts[r][1], b);
            Eigen::VectorXd x = qr.solve(rhs);
            worst = std::max(worst, (A * x - rhs).lpNorm<Eigen::Infinity>());
        }
    }
    return worst;
}

}  // namespace singspline
