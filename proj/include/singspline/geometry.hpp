#pragma once

#include <array>
#include <string>
#include <vector>

#include "singspline/projector.hpp"

namespace singspline {

// Regular rational map F = (F1/F0, F2/F0) on the triangle, with all three
// components given by coefficients over the hierarchical space at a coarse
// level n*. The composite geometry G = F o u is evaluated through the
// coefficients, never from a closed form, so spline membership of F holds by
// construction.
class RationalGeometry {
public:
    RationalGeometry(int degree, int coarse_level, std::vector<double> f0,
                     std::vector<double> f1, std::vector<double> f2);

    // F = id: F0 = 1 (unit coefficients), F1, F2 projections of u and v.
    static RationalGeometry identity(int degree, int coarse_level);
    // F = (u + a*u*v, v + b*u*v); requires degree >= 2 for exact membership.
    static RationalGeometry curved(int degree, int coarse_level, double a, double b);

    static RationalGeometry load(const std::string& path);
    void save(const std::string& path) const;
    std::string to_json() const;
    static RationalGeometry from_json(const std::string& text);

    int degree() const { return degree_; }
    int coarse_level() const { return coarse_level_; }
    const HierSpace& space() const { return space_; }
    const std::vector<double>& f0() const { return f0_; }
    const std::vector<double>& f1() const { return f1_; }
    const std::vector<double>& f2() const { return f2_; }

    struct GeoJet {
        Jet2 x, y;   // components of F as functions of (u,v)
        Jet2 f0;     // the weight function
        double det;  // det of the Jacobian of F
    };
    GeoJet jet(double u, double v) const;
    std::array<double, 2> eval(double u, double v) const;
    std::array<std::array<double, 2>, 2> jacobian(double u, double v) const;

    struct CheckReport {
        double min_f0 = 0.0;
        double min_det = 0.0;  // empirical lower bound on det(grad F)
        int samples = 0;
        bool valid() const { return min_f0 > 0.0 && min_det > 0.0; }
    };
    // Sampling check at quadrature nodes of the given level plus element
    // corners; a positivity certificate for the samples, not a proof.
    CheckReport check(int sample_level, int gauss_order) const;

private:
    int degree_;
    int coarse_level_;
    HierSpace space_;
    std::vector<double> f0_, f1_, f2_;
};

// L-inf residual of phi - P(phi) on a parameter sample grid; a residual
// below ~1e-9 certifies that phi is representable in the hierarchical space
// of the dual set.
double membership_residual(const GlobalDualSet& duals, const ScalarField& candidate,
                           int grid = 24);

// psi = phi o F for phi given on Omega (jets in the Omega variables).
class PullbackField : public ScalarField {
public:
    PullbackField(const RationalGeometry& geom, const ScalarField& phi_omega)
        : geom_(geom), phi_(phi_omega) {}
    Jet2 jet(double u, double v) const override;
    double value(double u, double v) const override;

private:
    const RationalGeometry& geom_;
    const ScalarField& phi_;
};

// Squared H^q(Omega) seminorm contribution of the image of one element,
// computed entirely on the triangle: chain-ruled derivatives and the
// Jacobian factor det(grad F); F^{-1} is never evaluated. q in {0,1}.
double omega_seminorm_sq_element(const HierElement& e, const RationalGeometry& geom,
                                 const ScalarField& pullback, int q, int gauss_order);
double omega_seminorm(const HierMesh& mesh, const RationalGeometry& geom,
                      const ScalarField& pullback, int q, int gauss_order);
double omega_norm(const HierMesh& mesh, const RationalGeometry& geom,
                  const ScalarField& pullback, int k, int gauss_order);

// Coefficients of the mapped quasi-interpolant: project (phi o F) * F0.
std::vector<double> project_omega(const RationalGeometry& geom, const GlobalDualSet& duals,
                                  const ScalarField& phi_omega);

// Pullback of phi - P_V(phi): (phi o F) - R / F0, with R the spline
// reconstruction of the project_omega coefficients.
class OmegaErrorField : public ScalarField {
public:
    OmegaErrorField(const RationalGeometry& geom, const ScalarField& phi_omega,
                    const HierSpace& space, std::vector<double> coeffs)
        : geom_(geom), phi_(phi_omega), recon_(space, std::move(coeffs)) {}
    Jet2 jet(double u, double v) const override;
    double value(double u, double v) const override;

private:
    const RationalGeometry& geom_;
    const ScalarField& phi_;
    HierSplineFn recon_;
};

// min/max of ||phi||_{H^k(Omega)} / ||phi o F||_{H^k(Delta)} over the given
// sample functions; an empirical bound for the norm-equivalence constant.
struct NormEquivalenceProbe {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
};
NormEquivalenceProbe probe_norm_equivalence(const RationalGeometry& geom,
                                            const std::vector<const ScalarField*>& samples,
                                            int k, int mesh_level, int gauss_order);

}  // namespace singspline
