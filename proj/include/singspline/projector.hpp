#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "singspline/fields.hpp"
#include "singspline/hier_space.hpp"
#include "singspline/norms.hpp"

namespace singspline {

// Coarsest level at which the projector is defined: n0 = ceil(log2(8p)).
int initial_level(int degree);

// t-direction level of the regular block containing s-index k (k >= p+2).
// The paper-literal variant uses ceil(log2(k-p+1)); the default
// ceil(log2(k-p)) reproduces the block ranges of the basis definition.
int m_of_k(int k, int degree, bool paper_literal = false);

// Dual functionals mu_{k,l} for the singular block, biorthogonal to the
// restrictions of beta^{n0}_{i,j} to Delta_{h0}. Realized by inverting the
// Gram matrix of those restrictions, assembled by quadrature.
class SingularDualSet {
public:
    SingularDualSet(int degree, int gauss_order);

    int degree() const { return degree_; }
    int n0() const { return n0_; }
    double h0() const { return 1.0 / (1 << n0_); }
    int dim() const { return HierSpace::singular_block_dim(degree_); }
    double condition_number() const { return cond_; }
    const HierSpace& space0() const { return space0_; }
    int gauss_order() const { return gauss_order_; }

    // Quadrature nodes covering Delta_{h0} in parameter form; the physical
    // point is (s, s*t) and w includes the Jacobian factor.
    struct Node {
        double s, t, w;
    };
    const std::vector<Node>& nodes() const { return nodes_; }

    // Value of the (k,l) dual weight function at node q.
    double weight_at_node(int dual_index, int node) const {
        return weights_(dual_index, node);
    }

    double apply(int k, int l, const ScalarField& phi) const;
    // mu_{k,l}(phi) for every singular (k,l), in enumeration order.
    std::vector<double> apply_all(const ScalarField& phi) const;

private:
    int degree_;
    int n0_;
    int gauss_order_;
    HierSpace space0_;
    double cond_ = 0.0;
    std::vector<Node> nodes_;
    Eigen::MatrixXd weights_;  // dual index x node
};

// The full dual basis Lambda^n_{k,l} at level n >= n0: scaled singular duals
// for k <= p+1, tensor-product B-spline duals for k >= p+2. Every functional
// is realized as a fixed quadrature sum sum_q w_q phi(pt_q), precomputed at
// construction.
class GlobalDualSet {
public:
    GlobalDualSet(HierSpace space, int gauss_order, bool paper_literal_mk = false);

    const HierSpace& space() const { return space_; }
    int dim() const { return space_.dim(); }
    int gauss_order() const { return gauss_order_; }
    bool paper_literal_mk() const { return paper_literal_mk_; }
    const SingularDualSet& singular_duals() const { return singular_; }

    struct DualNode {
        double u, v, w;
    };
    const std::vector<DualNode>& nodes(int fn_index) const { return nodes_.at(fn_index); }

    DyadicInterval dual_s_support(int fn_index) const { return s_support_.at(fn_index); }
    DyadicInterval dual_t_support(int fn_index) const { return t_support_.at(fn_index); }

    double apply(int fn_index, const ScalarField& phi) const;
    std::vector<double> project(const ScalarField& phi) const;

    // [Lambda_{k,l}(beta_{i,j})]; rows are duals, columns basis functions,
    // both in enumeration order.
    Eigen::MatrixXd duality_matrix() const;

private:
    HierSpace space_;
    int gauss_order_;
    bool paper_literal_mk_;
    SingularDualSet singular_;
    std::vector<std::vector<DualNode>> nodes_;
    std::vector<DyadicInterval> s_support_, t_support_;
};

// Spline function in the hierarchical space, evaluated from coefficients.
// The referenced space must outlive the function object.
class HierSplineFn : public ScalarField {
public:
    HierSplineFn(const HierSpace& space, std::vector<double> coeffs);

    Jet2 jet(double u, double v) const override;
    double value(double u, double v) const override;
    const std::vector<double>& coeffs() const { return coeffs_; }

private:
    const HierSpace* space_;
    std::vector<double> coeffs_;
};

// ||P phi||_{L2(elem)} / ||phi||_{L2(extension)}; returns 0 when the
// denominator vanishes (the projection is locally determined).
double stability_ratio(const HierMesh& mesh, const ScalarField& projection,
                       const ScalarField& phi, int elem, std::span<const int> extension,
                       int gauss_order);

}  // namespace singspline
