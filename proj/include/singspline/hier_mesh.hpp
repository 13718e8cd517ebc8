#pragma once

#include <array>
#include <vector>

#include "singspline/dyadic.hpp"

namespace singspline {

enum class ElementKind { trapezoid, apex_triangle };

// Classification used in the three-case stability argument.
enum class RegionClass { right_of_3_8, scalable, singular_core };

// One element of the hierarchical mesh on the triangle: the u-image of a
// dyadic parameter rectangle [s0,s1] x [t0,t1]. The innermost element
// (s0 = 0, t-range [0,1]) degenerates into the apex triangle.
struct HierElement {
    ElementKind kind = ElementKind::trapezoid;
    Dyadic s0, s1, t0, t1;
    int level_of_origin = 0;

    DyadicInterval s_interval() const { return {s0, s1}; }
    DyadicInterval t_interval() const { return {t0, t1}; }

    // Trapezoid vertices (s0,s0*t0),(s1,s1*t0),(s1,s1*t1),(s0,s0*t1); for the
    // apex triangle the first two coincide at the origin side.
    std::array<std::array<double, 2>, 4> vertices() const;

    double area() const;       // exact dyadic formula, returned as double
    Dyadic area_dyadic() const;
    double diameter() const;
    double inradius() const;   // largest inscribed circle (Chebyshev radius)
};

// The hierarchical mesh on Delta at level n: columns of trapezoids whose
// t-subdivision level matches the dyadic scale of their s-position, plus the
// apex triangle. Element 0 is the apex; column a (a = 1..2^n - 1) holds its
// cells contiguously, bottom to top.
class HierMesh {
public:
    static HierMesh build(int degree, int level);

    int degree() const { return degree_; }
    int level() const { return level_; }
    const std::vector<HierElement>& elements() const { return elements_; }
    int size() const { return static_cast<int>(elements_.size()); }

    static int apex_index() { return 0; }
    int column_cell_level(int a) const;     // t-subdivision level of column a
    int cell_index(int a, int b) const { return column_base_[a] + b; }

    // Elements whose interior meets the open parameter box s_iv x t_iv.
    std::vector<int> elements_overlapping(const DyadicInterval& s_iv,
                                          const DyadicInterval& t_iv) const;
    void elements_overlapping(const DyadicInterval& s_iv, const DyadicInterval& t_iv,
                              std::vector<int>& out) const;

    RegionClass classify(int elem, int n0, int* witness_m = nullptr) const;

private:
    int degree_ = 1;
    int level_ = 0;
    std::vector<HierElement> elements_;
    std::vector<int> column_base_;  // index of cell b = 0 per column
};

}  // namespace singspline
