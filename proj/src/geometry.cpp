#include "singspline/geometry.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "singspline/common.hpp"

namespace singspline {

namespace {

Jet2 jet_u(double u, double) { return {u, 1, 0, 0, 0, 0}; }
Jet2 jet_v(double, double v) { return {v, 0, 1, 0, 0, 0}; }

std::vector<double> check_size(std::vector<double> c, int dim, const char* what) {
    if (static_cast<int>(c.size()) != dim)
        throw std::invalid_argument(std::string("RationalGeometry: ") + what +
                                    " has wrong coefficient count");
    return c;
}

}  // namespace

RationalGeometry::RationalGeometry(int degree, int coarse_level, std::vector<double> f0,
                                   std::vector<double> f1, std::vector<double> f2)
    : degree_(degree),
      coarse_level_(coarse_level),
      space_(HierSpace::build(degree, coarse_level)),
      f0_(check_size(std::move(f0), space_.dim(), "F0")),
      f1_(check_size(std::move(f1), space_.dim(), "F1")),
      f2_(check_size(std::move(f2), space_.dim(), "F2")) {}

RationalGeometry RationalGeometry::identity(int degree, int coarse_level) {
    HierSpace space = HierSpace::build(degree, coarse_level);
    GlobalDualSet duals(std::move(space), degree + 3);
    std::vector<double> ones(duals.dim(), 1.0);  // partition of unity
    CallableField fu(jet_u), fv(jet_v);
    return RationalGeometry(degree, coarse_level, std::move(ones), duals.project(fu),
                            duals.project(fv));
}

RationalGeometry RationalGeometry::curved(int degree, int coarse_level, double a, double b) {
    if (degree < 2 && (a != 0.0 || b != 0.0))
        throw std::invalid_argument(
            "RationalGeometry::curved: the u*v term needs degree >= 2 for exact membership");
    HierSpace space = HierSpace::build(degree, coarse_level);
    GlobalDualSet duals(std::move(space), degree + 3);
    std::vector<double> ones(duals.dim(), 1.0);
    CallableField fx([a](double u, double v) {
        Jet2 r = jet_u(u, v);
        r.v += a * u * v; r.du += a * v; r.dv += a * u; r.duv += a;
        return r;
    });
    CallableField fy([b](double u, double v) {
        Jet2 r = jet_v(u, v);
        r.v += b * u * v; r.du += b * v; r.dv += b * u; r.duv += b;
        return r;
    });
    return RationalGeometry(degree, coarse_level, std::move(ones), duals.project(fx),
                            duals.project(fy));
}

std::string RationalGeometry::to_json() const {
    nlohmann::json j;
    j["degree"] = degree_;
    j["coarse_level"] = coarse_level_;
    j["F0"] = f0_;
    j["F1"] = f1_;
    j["F2"] = f2_;
    return j.dump(2) + "\n";
}

RationalGeometry RationalGeometry::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    return RationalGeometry(j.at("degree").get<int>(), j.at("coarse_level").get<int>(),
                            j.at("F0").get<std::vector<double>>(),
                            j.at("F1").get<std::vector<double>>(),
                            j.at("F2").get<std::vector<double>>());
}

void RationalGeometry::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("RationalGeometry::save: cannot open " + path);
    out << to_json();
}

RationalGeometry RationalGeometry::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("RationalGeometry::load: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

RationalGeometry::GeoJet RationalGeometry::jet(double u, double v) const {
    static thread_local std::vector<HierSpace::ActiveJet> active;
    space_.eval_point_all(u, v, 2, active);
    Jet2 j0, j1, j2;
    for (const auto& a : active) {
        j0 += f0_[a.fn] * a.jet;
        j1 += f1_[a.fn] * a.jet;
        j2 += f2_[a.fn] * a.jet;
    }
    if (!(j0.v > 0.0))
        throw numerical_error("RationalGeometry: weight function non-positive at sample point");
    GeoJet g;
    g.f0 = j0;
    g.x = j1 / j0;
    g.y = j2 / j0;
    g.det = g.x.du * g.y.dv - g.x.dv * g.y.du;
    return g;
}

std::array<double, 2> RationalGeometry::eval(double u, double v) const {
    GeoJet g = jet(u, v);
    return {g.x.v, g.y.v};
}

std::array<std::array<double, 2>, 2> RationalGeometry::jacobian(double u, double v) const {
    GeoJet g = jet(u, v);
    return {{{g.x.du, g.x.dv}, {g.y.du, g.y.dv}}};
}

RationalGeometry::CheckReport RationalGeometry::check(int sample_level, int gauss_order) const {
    HierMesh mesh = HierMesh::build(degree_, sample_level);
    const GaussRule& rule = gauss_legendre(gauss_order);
    CheckReport rep;
    rep.min_f0 = std::numeric_limits<double>::infinity();
    rep.min_det = std::numeric_limits<double>::infinity();
    auto visit = [&](double u, double v) {
        GeoJet g = jet(u, v);
        rep.min_f0 = std::min(rep.min_f0, g.f0.v);
        rep.min_det = std::min(rep.min_det, g.det);
        ++rep.samples;
    };
    for (const HierElement& e : mesh.elements()) {
        const double s0 = e.s0.value(), s1 = e.s1.value();
        const double t0 = e.t0.value(), t1 = e.t1.value();
        for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
            const double s = s0 + (s1 - s0) * rule.nodes[a];
            for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
                const double t = t0 + (t1 - t0) * rule.nodes[b];
                visit(s, s * t);
            }
        }
        // corners, skipping the singular vertex itself
        for (const auto& c : e.vertices())
            if (c[0] > 0.0) visit(c[0], c[1]);
    }
    return rep;
}

double membership_residual(const GlobalDualSet& duals, const ScalarField& candidate, int grid) {
    HierSplineFn fit(duals.space(), duals.project(candidate));
    double worst = 0.0;
    for (int a = 1; a <= grid; ++a) {
        const double u = static_cast<double>(a) / grid;
        for (int b = 0; b <= grid; ++b) {
            const double v = u * static_cast<double>(b) / grid;
            worst = std::max(worst, std::abs(candidate.value(u, v) - fit.value(u, v)));
        }
    }
    return worst;
}

Jet2 PullbackField::jet(double u, double v) const {
    RationalGeometry::GeoJet g = geom_.jet(u, v);
    return compose(phi_.jet(g.x.v, g.y.v), g.x, g.y);
}

double PullbackField::value(double u, double v) const {
    auto p = geom_.eval(u, v);
    return phi_.value(p[0], p[1]);
}

double omega_seminorm_sq_element(const HierElement& e, const RationalGeometry& geom,
                                 const ScalarField& pullback, int q, int gauss_order) {
    if (q != 0 && q != 1)
        throw std::invalid_argument("omega_seminorm: order q must be in {0,1}");
    return integrate_element(
        e,
        [&](double u, double v) {
            RationalGeometry::GeoJet g = geom.jet(u, v);
            if (q == 0) {
                const double w = pullback.value(u, v);
                return w * w * g.det;
            }
            Jet2 j = pullback.jet(u, v);
            // grad on Omega = J^{-T} grad on the triangle
            const double gx = (g.y.dv * j.du - g.y.du * j.dv) / g.det;
            const double gy = (-g.x.dv * j.du + g.x.du * j.dv) / g.det;
            return (gx * gx + gy * gy) * g.det;
        },
        gauss_order);
}

double omega_seminorm(const HierMesh& mesh, const RationalGeometry& geom,
                      const ScalarField& pullback, int q, int gauss_order) {
    double sum = 0.0;
    for (const HierElement& e : mesh.elements())
        sum += omega_seminorm_sq_element(e, geom, pullback, q, gauss_order);
    return std::sqrt(sum);
}

double omega_norm(const HierMesh& mesh, const RationalGeometry& geom,
                  const ScalarField& pullback, int k, int gauss_order) {
    double sum = 0.0;
    for (int q = 0; q <= k; ++q) {
        const double s = omega_seminorm(mesh, geom, pullback, q, gauss_order);
        sum += s * s;
    }
    return std::sqrt(sum);
}

std::vector<double> project_omega(const RationalGeometry& geom, const GlobalDualSet& duals,
                                  const ScalarField& phi_omega) {
    CallableField weighted([&](double u, double v) {
        RationalGeometry::GeoJet g = geom.jet(u, v);
        return compose(phi_omega.jet(g.x.v, g.y.v), g.x, g.y) * g.f0;
    });
    return duals.project(weighted);
}

Jet2 OmegaErrorField::jet(double u, double v) const {
    RationalGeometry::GeoJet g = geom_.jet(u, v);
    Jet2 pull = compose(phi_.jet(g.x.v, g.y.v), g.x, g.y);
    return pull - recon_.jet(u, v) / g.f0;
}

double OmegaErrorField::value(double u, double v) const {
    RationalGeometry::GeoJet g = geom_.jet(u, v);
    return phi_.value(g.x.v, g.y.v) - recon_.value(u, v) / g.f0.v;
}

NormEquivalenceProbe probe_norm_equivalence(const RationalGeometry& geom,
                                            const std::vector<const ScalarField*>& samples,
                                            int k, int mesh_level, int gauss_order) {
    HierMesh mesh = HierMesh::build(geom.degree(), mesh_level);
    NormEquivalenceProbe probe;
    probe.min_ratio = std::numeric_limits<double>::infinity();
    probe.max_ratio = 0.0;
    for (const ScalarField* phi : samples) {
        PullbackField psi(geom, *phi);
        const double on_omega = omega_norm(mesh, geom, psi, k, gauss_order);
        const double on_delta = sobolev_norm(mesh, psi, k, gauss_order);
        const double ratio = on_omega / on_delta;
        probe.min_ratio = std::min(probe.min_ratio, ratio);
        probe.max_ratio = std::max(probe.max_ratio, ratio);
    }
    return probe;
}

}  // namespace singspline
