#include "singspline/projector.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "singspline/common.hpp"
#include "singspline/quadrature.hpp"

namespace singspline {

int initial_level(int degree) {
    if (degree < 1) throw std::invalid_argument("initial_level: degree must be >= 1");
    // ceil(log2(8p)) = 3 + ceil(log2(p))
    return 3 + static_cast<int>(std::bit_width(static_cast<unsigned>(degree - 1)));
}

int m_of_k(int k, int degree, bool paper_literal) {
    if (k < degree + 2)
        throw std::invalid_argument("m_of_k: the singular block has no t-level");
    const unsigned d = static_cast<unsigned>(k - degree);
    if (paper_literal) return static_cast<int>(std::bit_width(d));  // ceil(log2(k-p+1))
    return static_cast<int>(std::bit_width(d - 1));                 // ceil(log2(k-p))
}

SingularDualSet::SingularDualSet(int degree, int gauss_order)
    : degree_(degree),
      n0_(initial_level(degree)),
      gauss_order_(gauss_order),
      space0_(HierSpace::build(degree, n0_)) {
    const int nd = dim();
    const GaussRule& rule = gauss_legendre(gauss_order);
    const int nq = gauss_order;
    const double h = h0();

    nodes_.reserve(static_cast<std::size_t>(nq) * nq);
    for (int a = 0; a < nq; ++a)
        for (int b = 0; b < nq; ++b) {
            Node n;
            n.s = h * rule.nodes[a];
            n.t = rule.nodes[b];
            n.w = h * rule.weights[a] * rule.weights[b] * n.s;  // Jacobian det = s
            nodes_.push_back(n);
        }

    // Basis values at the nodes (singular-block functions only; the regular
    // ones vanish on Delta_{h0}).
    Eigen::MatrixXd vals(nd, static_cast<int>(nodes_.size()));
    for (std::size_t q = 0; q < nodes_.size(); ++q) {
        const double u = nodes_[q].s, v = nodes_[q].s * nodes_[q].t;
        for (int idx = 0; idx < nd; ++idx) vals(idx, static_cast<int>(q)) = space0_.eval_value(idx, u, v);
    }
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(nd, nd);
    for (std::size_t q = 0; q < nodes_.size(); ++q)
        gram += nodes_[q].w * (vals.col(static_cast<int>(q)) * vals.col(static_cast<int>(q)).transpose());

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smin = svd.singularValues()(nd - 1);
    const double smax = svd.singularValues()(0);
    cond_ = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(cond_ < 1e12))
        throw numerical_error("SingularDualSet: Gram matrix of restricted singular block is "
                              "numerically singular (cond = " + std::to_string(cond_) + ")");
    Eigen::MatrixXd gram_inv = svd.solve(Eigen::MatrixXd::Identity(nd, nd));
    // weight function of dual (k,l) at the nodes: row of G^{-1} times values
    weights_ = gram_inv * vals;
}

double SingularDualSet::apply(int k, int l, const ScalarField& phi) const {
    const int idx = space0_.index_of(k, l);
    double sum = 0.0;
    for (std::size_t q = 0; q < nodes_.size(); ++q)
        sum += nodes_[q].w * weights_(idx, static_cast<int>(q)) *
               phi.value(nodes_[q].s, nodes_[q].s * nodes_[q].t);
    return sum;
}

std::vector<double> SingularDualSet::apply_all(const ScalarField& phi) const {
    const int nd = dim();
    std::vector<double> out(nd, 0.0);
    for (std::size_t q = 0; q < nodes_.size(); ++q) {
        const double f = nodes_[q].w * phi.value(nodes_[q].s, nodes_[q].s * nodes_[q].t);
        for (int idx = 0; idx < nd; ++idx) out[idx] += f * weights_(idx, static_cast<int>(q));
    }
    return out;
}

GlobalDualSet::GlobalDualSet(HierSpace space, int gauss_order, bool paper_literal_mk)
    : space_(std::move(space)),
      gauss_order_(gauss_order),
      paper_literal_mk_(paper_literal_mk),
      singular_(space_.degree(), gauss_order) {
    const int p = space_.degree();
    const int n = space_.level();
    const int n0 = singular_.n0();
    if (n < n0)
        throw std::invalid_argument("GlobalDualSet: level must be >= n0 = " + std::to_string(n0));

    nodes_.resize(space_.dim());
    s_support_.resize(space_.dim());
    t_support_.resize(space_.dim());

    const double c = std::ldexp(1.0, n0 - n);  // 2^(n0-n)
    const GaussRule& rule = gauss_legendre(gauss_order);

    // univariate duals, cached per index / per (level, index)
    std::vector<UnivariateDual> s_duals;  // for k = p+2..dim of the s-space
    s_duals.reserve(space_.s_space().dim());
    std::vector<std::vector<UnivariateDual>> t_duals(n + 1);  // per level m

    for (int idx = 0; idx < space_.dim(); ++idx) {
        const HierBasisFunction& fn = space_.fn(idx);
        auto& out = nodes_[idx];
        if (fn.block == BasisBlock::singular) {
            const int sidx = singular_.space0().index_of(fn.i, fn.j);
            out.reserve(singular_.nodes().size());
            for (std::size_t q = 0; q < singular_.nodes().size(); ++q) {
                const auto& nd = singular_.nodes()[q];
                DualNode dn;
                dn.u = c * nd.s;
                dn.v = c * nd.s * nd.t;
                dn.w = nd.w * singular_.weight_at_node(sidx, static_cast<int>(q));
                out.push_back(dn);
            }
            s_support_[idx] = {Dyadic{0, 0}, Dyadic{1, n}};
            t_support_[idx] = {Dyadic{0, 0}, Dyadic{1, 0}};
        } else {
            const int m = m_of_k(fn.i, p, paper_literal_mk_);
            if (t_duals[m].empty()) {
                const SplineSpace& ts = space_.t_space(m);
                t_duals[m].reserve(ts.dim());
                for (int l = 1; l <= ts.dim(); ++l) t_duals[m].emplace_back(ts, l);
            }
            while (static_cast<int>(s_duals.size()) < fn.i - p - 1)
                s_duals.emplace_back(space_.s_space(), p + 2 + static_cast<int>(s_duals.size()));
            const UnivariateDual& lam_s = s_duals[fn.i - p - 2];
            const UnivariateDual& lam_t = t_duals[m][fn.j - 1];

            const DyadicInterval ss = lam_s.support_interval();
            const DyadicInterval tt = lam_t.support_interval();
            const double sa = ss.lo.value(), slen = ss.length();
            const double ta = tt.lo.value(), tlen = tt.length();
            out.reserve(rule.nodes.size() * rule.nodes.size());
            for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
                const double s = sa + slen * rule.nodes[a];
                const double ws = slen * rule.weights[a] * lam_s.weight(s);
                for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
                    const double t = ta + tlen * rule.nodes[b];
                    DualNode dn;
                    dn.u = s;
                    dn.v = s * t;
                    dn.w = ws * tlen * rule.weights[b] * lam_t.weight(t);
                    out.push_back(dn);
                }
            }
            s_support_[idx] = ss;
            t_support_[idx] = tt;
        }
    }
}

double GlobalDualSet::apply(int fn_index, const ScalarField& phi) const {
    double sum = 0.0;
    for (const DualNode& nd : nodes_.at(fn_index)) sum += nd.w * phi.value(nd.u, nd.v);
    return sum;
}

std::vector<double> GlobalDualSet::project(const ScalarField& phi) const {
    std::vector<double> coeffs(space_.dim());
    for (int idx = 0; idx < space_.dim(); ++idx) coeffs[idx] = apply(idx, phi);
    return coeffs;
}

Eigen::MatrixXd GlobalDualSet::duality_matrix() const {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(space_.dim(), space_.dim());
    std::vector<HierSpace::ActiveJet> active;
    for (int row = 0; row < space_.dim(); ++row) {
        for (const DualNode& nd : nodes_[row]) {
            space_.eval_point_all(nd.u, nd.v, 0, active);
            for (const auto& a : active) M(row, a.fn) += nd.w * a.jet.v;
        }
    }
    return M;
}

HierSplineFn::HierSplineFn(const HierSpace& space, std::vector<double> coeffs)
    : space_(&space), coeffs_(std::move(coeffs)) {
    if (static_cast<int>(coeffs_.size()) != space.dim())
        throw std::invalid_argument("HierSplineFn: coefficient count does not match space dim");
}

Jet2 HierSplineFn::jet(double u, double v) const {
    static thread_local std::vector<HierSpace::ActiveJet> active;
    space_->eval_point_all(u, v, 2, active);
    Jet2 sum;
    for (const auto& a : active) sum += coeffs_[a.fn] * a.jet;
    return sum;
}

double HierSplineFn::value(double u, double v) const {
    static thread_local std::vector<HierSpace::ActiveJet> active;
    space_->eval_point_all(u, v, 0, active);
    double sum = 0.0;
    for (const auto& a : active) sum += coeffs_[a.fn] * a.jet.v;
    return sum;
}

double stability_ratio(const HierMesh& mesh, const ScalarField& projection,
                       const ScalarField& phi, int elem, std::span<const int> extension,
                       int gauss_order) {
    double denom_sq = 0.0;
    for (int e : extension)
        denom_sq += sobolev_seminorm_sq_element(mesh.elements().at(e), phi, 0, gauss_order);
    if (denom_sq < 1e-300) return 0.0;
    const double num_sq =
        sobolev_seminorm_sq_element(mesh.elements().at(elem), projection, 0, gauss_order);
    return std::sqrt(num_sq / denom_sq);
}

}  // namespace singspline
