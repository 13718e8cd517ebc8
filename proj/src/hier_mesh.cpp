#include "singspline/hier_mesh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace singspline {

namespace {

constexpr Dyadic kThreeEighths{3, 3};
constexpr Dyadic kThreeQuarters{3, 2};

// t-subdivision level of column a: a in [2^(k-1), 2^k).
int cell_level_of_column(std::int64_t a) { return std::bit_width(static_cast<std::uint64_t>(a)); }

}  // namespace

std::array<std::array<double, 2>, 4> HierElement::vertices() const {
    const double a = s0.value(), b = s1.value();
    const double c = t0.value(), d = t1.value();
    return {{{a, a * c}, {b, b * c}, {b, b * d}, {a, a * d}}};
}

Dyadic HierElement::area_dyadic() const {
    // integral of s over the parameter rectangle
    return ((t1 - t0) * (s1 * s1 - s0 * s0)).half();
}

double HierElement::area() const { return area_dyadic().value(); }

double HierElement::diameter() const {
    auto vs = vertices();
    double d2 = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            double dx = vs[i][0] - vs[j][0], dy = vs[i][1] - vs[j][1];
            d2 = std::max(d2, dx * dx + dy * dy);
        }
    return std::sqrt(d2);
}

double HierElement::inradius() const {
    const double a = s0.value(), b = s1.value();
    const double c = t0.value(), d = t1.value();
    if (kind == ElementKind::apex_triangle || a == 0.0) {
        // triangle (0,0), (b, b*c), (b, b*d): inradius = area / semiperimeter
        const double area2 = b * b * (d - c);  // twice the area
        const double e1 = b * std::sqrt(1 + c * c);
        const double e2 = b * std::sqrt(1 + d * d);
        const double e3 = b * (d - c);
        return area2 / (e1 + e2 + e3);
    }
    // Chebyshev center of the trapezoid a<=u<=b, c*u<=v<=d*u: maximize r
    // subject to n_i . (u,v) + b_i >= r for the four edges. The optimum is
    // attained with three active constraints; enumerate the triples.
    const double nc = std::sqrt(1 + c * c), nd = std::sqrt(1 + d * d);
    // constraint rows: n_u * u + n_v * v + rhs >= r
    const double rows[4][3] = {
        {1.0, 0.0, -a},            // u - a >= r
        {-1.0, 0.0, b},            // b - u >= r
        {-c / nc, 1.0 / nc, 0.0},  // (v - c u)/|..| >= r
        {d / nd, -1.0 / nd, 0.0},  // (d u - v)/|..| >= r
    };
    double best = 0.0;
    for (int skip = 0; skip < 4; ++skip) {
        // Solve the 3x3 system rows[i] . (u,v) + rhs = r for the kept triple.
        double m[3][4];
        int rr = 0;
        for (int i = 0; i < 4; ++i) {
            if (i == skip) continue;
            m[rr][0] = rows[i][0];
            m[rr][1] = rows[i][1];
            m[rr][2] = -1.0;
            m[rr][3] = -rows[i][2];
            ++rr;
        }
        // Gaussian elimination with partial pivoting
        bool singular = false;
        for (int col = 0; col < 3 && !singular; ++col) {
            int piv = col;
            for (int r2 = col + 1; r2 < 3; ++r2)
                if (std::abs(m[r2][col]) > std::abs(m[piv][col])) piv = r2;
            if (std::abs(m[piv][col]) < 1e-14) { singular = true; break; }
            std::swap(m[col], m[piv]);
            for (int r2 = 0; r2 < 3; ++r2) {
                if (r2 == col) continue;
                double f = m[r2][col] / m[col][col];
                for (int c2 = col; c2 < 4; ++c2) m[r2][c2] -= f * m[col][c2];
            }
        }
        if (singular) continue;
        const double u = m[0][3] / m[0][0];
        const double v = m[1][3] / m[1][1];
        const double r = m[2][3] / m[2][2];
        if (r <= best) continue;
        // feasibility against the skipped constraint
        if (rows[skip][0] * u + rows[skip][1] * v + rows[skip][2] >= r - 1e-13) best = r;
    }
    return best;
}

HierMesh HierMesh::build(int degree, int level) {
    if (level < 0) throw std::invalid_argument("HierMesh::build: level must be >= 0");
    HierMesh mesh;
    mesh.degree_ = degree;
    mesh.level_ = level;
    const std::int64_t cols = (std::int64_t(1) << level);
    mesh.column_base_.assign(cols, -1);

    HierElement apex;
    apex.kind = ElementKind::apex_triangle;
    apex.s0 = {0, 0};
    apex.s1 = {1, level};
    apex.t0 = {0, 0};
    apex.t1 = {1, 0};
    apex.level_of_origin = 0;
    mesh.elements_.push_back(apex);

    for (std::int64_t a = 1; a < cols; ++a) {
        const int k = cell_level_of_column(a);
        mesh.column_base_[a] = static_cast<int>(mesh.elements_.size());
        for (std::int64_t b = 0; b < (std::int64_t(1) << k); ++b) {
            HierElement e;
            e.kind = ElementKind::trapezoid;
            e.s0 = {a, level};
            e.s1 = {a + 1, level};
            e.t0 = {b, k};
            e.t1 = {b + 1, k};
            e.level_of_origin = k;
            mesh.elements_.push_back(e);
        }
    }
    return mesh;
}

int HierMesh::column_cell_level(int a) const { return cell_level_of_column(a); }

void HierMesh::elements_overlapping(const DyadicInterval& s_iv, const DyadicInterval& t_iv,
                                    std::vector<int>& out) const {
    if (!(s_iv.lo < s_iv.hi) || !(t_iv.lo < t_iv.hi)) return;
    const std::int64_t cols = (std::int64_t(1) << level_);
    const HierElement& apex = elements_[0];
    if (s_iv.overlaps_open(apex.s_interval()) && t_iv.overlaps_open(apex.t_interval()))
        out.push_back(0);
    const double scale = static_cast<double>(cols);
    std::int64_t a_lo = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::floor(s_iv.lo.value() * scale)) - 1);
    std::int64_t a_hi = std::min<std::int64_t>(
        cols - 1, static_cast<std::int64_t>(std::ceil(s_iv.hi.value() * scale)) + 1);
    for (std::int64_t a = a_lo; a <= a_hi; ++a) {
        DyadicInterval col_s{{a, level_}, {a + 1, level_}};
        if (!s_iv.overlaps_open(col_s)) continue;
        const int k = cell_level_of_column(a);
        const double tscale = static_cast<double>(std::int64_t(1) << k);
        std::int64_t b_lo = std::max<std::int64_t>(
            0, static_cast<std::int64_t>(std::floor(t_iv.lo.value() * tscale)) - 1);
        std::int64_t b_hi = std::min<std::int64_t>(
            (std::int64_t(1) << k) - 1,
            static_cast<std::int64_t>(std::ceil(t_iv.hi.value() * tscale)) + 1);
        for (std::int64_t b = b_lo; b <= b_hi; ++b) {
            DyadicInterval cell_t{{b, k}, {b + 1, k}};
            if (t_iv.overlaps_open(cell_t)) out.push_back(cell_index(static_cast<int>(a), static_cast<int>(b)));
        }
    }
}

std::vector<int> HierMesh::elements_overlapping(const DyadicInterval& s_iv,
                                                const DyadicInterval& t_iv) const {
    std::vector<int> out;
    elements_overlapping(s_iv, t_iv, out);
    return out;
}

RegionClass HierMesh::classify(int elem, int n0, int* witness_m) const {
    const HierElement& e = elements_.at(elem);
    if (witness_m) *witness_m = 0;
    if (e.s0 >= kThreeEighths) return RegionClass::right_of_3_8;
    for (int m = 1; m <= level_ - n0; ++m) {
        if (e.s0.times_pow2(m) >= kThreeEighths && e.s1.times_pow2(m) <= kThreeQuarters) {
            if (witness_m) *witness_m = m;
            return RegionClass::scalable;
        }
    }
    return RegionClass::singular_core;
}

}  // namespace singspline
