#pragma once

#include <memory>
#include <vector>

#include "singspline/bspline.hpp"
#include "singspline/dyadic.hpp"
#include "singspline/hier_mesh.hpp"
#include "singspline/jet.hpp"

namespace singspline {

enum class BasisBlock { singular, regular };

// One basis function beta_{i,j}(u,v) = b^n_i(u) * T(v/u), where T is a
// Bernstein polynomial of degree i-1 (singular block, i <= p+1, j <= i) or a
// level-m B-spline b^m_j (regular block, p+2^{m-1}+1 <= i <= p+2^m).
struct HierBasisFunction {
    int i = 1, j = 1;
    BasisBlock block = BasisBlock::singular;
    int t_level = 0;  // m for the regular block; unused for the singular one
    DyadicInterval s_support, t_support;
};

class HierSpace {
public:
    static HierSpace build(int degree, int level);

    int degree() const { return degree_; }
    int level() const { return level_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<HierBasisFunction>& basis() const { return basis_; }
    const HierBasisFunction& fn(int idx) const { return basis_.at(idx); }

    static int singular_block_dim(int p) { return (p + 1) * (p + 2) / 2; }
    // Level of the regular block containing s-index i (i >= p+2).
    int block_level_of(int i) const;
    // Position in the canonical enumeration: singular block by (i,j) lex,
    // then regular blocks by level, then (i,j) lex.
    int index_of(int i, int j) const;

    // Value and derivatives up to max_deriv (<= 2) at (u,v) in the closed
    // triangle; the singular vertex is handled by the limit branch.
    Jet2 eval(int fn_index, double u, double v, int max_deriv = 2) const;
    double eval_value(int fn_index, double u, double v) const;

    // All basis functions not vanishing at (u,v), with their jets.
    struct ActiveJet {
        int fn;
        Jet2 jet;
    };
    void eval_point_all(double u, double v, int max_deriv, std::vector<ActiveJet>& out) const;

    const SplineSpace& s_space() const { return s_space_; }
    const SplineSpace& t_space(int m) const { return t_spaces_.at(m - 1); }
    const BernsteinBasis& bernstein(int deg) const { return bernsteins_.at(deg); }

private:
    HierSpace(int degree, int level);

    // Assembles the (u,v) jet of f(s) * g(v/s) from the factor derivatives.
    static Jet2 combine(const double* f, const double* g, double s, double t, int max_deriv);
    Jet2 singular_vertex_jet(const HierBasisFunction& fn, double u) const;

    int degree_;
    int level_;
    SplineSpace s_space_;
    std::vector<SplineSpace> t_spaces_;    // level 1..level_
    std::vector<BernsteinBasis> bernsteins_;  // degree 0..p
    std::vector<HierBasisFunction> basis_;
    std::vector<int> block_offset_;  // enumeration offset per regular level
};

// Union of the supports of all basis functions whose support meets the
// element, as a sorted list of element indices (the support extension).
std::vector<int> support_extension(const HierMesh& mesh, int elem, const HierSpace& space);

// Structural diagnostics, used by the verification suites.
// Max mismatch of beta^n(u,v) vs beta^{n-1}(2u,2v) over sample points in
// Delta_{1/2}, over all shared indices i <= 2^{n-1}.
double self_similarity_mismatch(const HierSpace& fine, const HierSpace& coarse,
                                const std::vector<std::array<double, 2>>& samples);

// Max L-inf residual of least-squares fits of all total-degree <= p
// monomials by the basis restricted to one element.
double polynomial_embedding_residual(const HierSpace& space, const HierMesh& mesh, int elem);

}  // namespace singspline
