#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <tuple>

#include "singspline/hier_mesh.hpp"
#include "singspline/singular_map.hpp"

using namespace singspline;

namespace {

using Key = std::tuple<std::int64_t, int, std::int64_t, int, std::int64_t, int, std::int64_t, int>;

Key key_of(const HierElement& e) {
    const Dyadic s0 = e.s0.normalized(), s1 = e.s1.normalized();
    const Dyadic t0 = e.t0.normalized(), t1 = e.t1.normalized();
    return {s0.num, s0.level, s1.num, s1.level, t0.num, t0.level, t1.num, t1.level};
}

}  // namespace

TEST_CASE("element counts: 3, 11, 43, and the closed form") {
    CHECK(HierMesh::build(2, 1).size() == 3);
    CHECK(HierMesh::build(2, 2).size() == 11);
    CHECK(HierMesh::build(2, 3).size() == 43);
    for (int n = 0; n <= 8; ++n) {
        const std::int64_t expect = 1 + 2 * ((std::int64_t(1) << (2 * n)) - 1) / 3;
        CHECK(HierMesh::build(1, n).size() == expect);
    }
}

TEST_CASE("mesh at level n is the half-scaled previous mesh plus new columns") {
    for (int n = 1; n <= 6; ++n) {
        HierMesh fine = HierMesh::build(1, n);
        HierMesh coarse = HierMesh::build(1, n - 1);
        std::set<Key> expected;
        for (const HierElement& e : coarse.elements()) {
            HierElement scaled = e;
            scaled.s0 = e.s0.half();
            scaled.s1 = e.s1.half();
            expected.insert(key_of(scaled));
        }
        for (std::int64_t a = std::int64_t(1) << (n - 1); a < (std::int64_t(1) << n); ++a)
            for (std::int64_t b = 0; b < (std::int64_t(1) << n); ++b) {
                HierElement e;
                e.s0 = {a, n};
                e.s1 = {a + 1, n};
                e.t0 = {b, n};
                e.t1 = {b + 1, n};
                expected.insert(key_of(e));
            }
        std::set<Key> actual;
        for (const HierElement& e : fine.elements()) actual.insert(key_of(e));
        CHECK(actual == expected);
    }
}

TEST_CASE("areas sum exactly to the triangle area") {
    for (int n = 1; n <= 7; ++n) {
        HierMesh mesh = HierMesh::build(2, n);
        Dyadic total{0, 0};
        for (const HierElement& e : mesh.elements()) total = total + e.area_dyadic();
        CHECK(total == Dyadic{1, 1});
    }
}

TEST_CASE("elements tile: every interior point lies in exactly one element") {
    HierMesh mesh = HierMesh::build(1, 3);
    TriangleDomain delta;
    for (double u : {0.06, 0.2, 0.55, 0.9})
        for (double frac : {0.3, 0.7}) {
            const double v = frac * u;
            REQUIRE(delta.contains(u, v));
            int hits = 0;
            for (const HierElement& e : mesh.elements()) {
                const double s0 = e.s0.value(), s1 = e.s1.value();
                const double t0 = e.t0.value(), t1 = e.t1.value();
                const double t = v / u;
                if (u > s0 && u < s1 && t > t0 && t < t1) ++hits;
            }
            CHECK(hits == 1);
        }
}

TEST_CASE("shape regularity stays bounded under refinement") {
    // the worst diameter/inradius ratio creeps up over the first few levels
    // but saturates; check a uniform bound plus saturation at the fine end
    double prev = 0.0;
    for (int n = 1; n <= 8; ++n) {
        HierMesh mesh = HierMesh::build(1, n);
        double worst = 0.0;
        for (const HierElement& e : mesh.elements()) {
            const double rho = e.inradius();
            REQUIRE(rho > 0.0);
            worst = std::max(worst, e.diameter() / rho);
        }
        CHECK(worst < 12.0);
        if (n == 8) CHECK(worst <= prev * 1.01);
        prev = worst;
    }
}

TEST_CASE("column bookkeeping") {
    HierMesh mesh = HierMesh::build(2, 3);
    CHECK(mesh.column_cell_level(1) == 1);
    CHECK(mesh.column_cell_level(2) == 2);
    CHECK(mesh.column_cell_level(3) == 2);
    CHECK(mesh.column_cell_level(4) == 3);
    CHECK(mesh.column_cell_level(7) == 3);
    const HierElement& c = mesh.elements()[mesh.cell_index(4, 5)];
    CHECK(c.s0 == Dyadic{4, 3});
    CHECK(c.t0 == Dyadic{5, 3});
}

TEST_CASE("overlap queries agree with brute force") {
    HierMesh mesh = HierMesh::build(1, 4);
    auto brute = [&](const DyadicInterval& si, const DyadicInterval& ti) {
        std::vector<int> out;
        for (int e = 0; e < mesh.size(); ++e) {
            const HierElement& el = mesh.elements()[e];
            if (si.overlaps_open(el.s_interval()) && ti.overlaps_open(el.t_interval()))
                out.push_back(e);
        }
        return out;
    };
    const DyadicInterval cases[][2] = {
        {{{0, 0}, {1, 2}}, {{0, 0}, {1, 0}}},
        {{{3, 4}, {5, 4}}, {{1, 2}, {3, 2}}},
        {{{1, 1}, {1, 0}}, {{0, 0}, {1, 3}}},
        {{{7, 4}, {9, 4}}, {{7, 3}, {1, 0}}},
    };
    for (const auto& c : cases) {
        auto got = mesh.elements_overlapping(c[0], c[1]);
        std::sort(got.begin(), got.end());
        CHECK(got == brute(c[0], c[1]));
    }
    // touching intervals select nothing extra
    CHECK(mesh.elements_overlapping({{1, 1}, {1, 1}}, {{0, 0}, {1, 0}}).empty());
}

TEST_CASE("region classification") {
    const int n0 = 4;
    {
        HierMesh mesh = HierMesh::build(2, n0);
        CHECK(mesh.classify(HierMesh::apex_index(), n0) == RegionClass::singular_core);
        // first column can never be scaled into [3/8, 3/4]
        CHECK(mesh.classify(mesh.cell_index(1, 0), n0) == RegionClass::singular_core);
        // s0 = 3/8 boundary counts as the right region
        CHECK(mesh.classify(mesh.cell_index(6, 0), n0) == RegionClass::right_of_3_8);
        CHECK(mesh.classify(mesh.cell_index(5, 0), n0) == RegionClass::singular_core);
    }
    {
        HierMesh mesh = HierMesh::build(2, n0 + 1);
        // [6/32, 7/32] doubles into [3/8, 7/16] with witness m = 1
        int m = -1;
        CHECK(mesh.classify(mesh.cell_index(6, 0), n0, &m) == RegionClass::scalable);
        CHECK(m == 1);
        // [3/32, 4/32] would need m = 2, which exceeds n - n0 here
        CHECK(mesh.classify(mesh.cell_index(3, 0), n0, &m) == RegionClass::singular_core);
        CHECK(mesh.classify(mesh.cell_index(12, 0), n0) == RegionClass::right_of_3_8);
    }
    {
        HierMesh mesh = HierMesh::build(2, n0 + 2);
        int m = -1;
        // [6/64, 7/64] scales by 4 into [3/8, 7/16]
        CHECK(mesh.classify(mesh.cell_index(6, 0), n0, &m) == RegionClass::scalable);
        CHECK(m == 2);
        // [12/64, 13/64] already works with m = 1
        CHECK(mesh.classify(mesh.cell_index(12, 0), n0, &m) == RegionClass::scalable);
        CHECK(m == 1);
    }
    // every element gets exactly one class, and witnesses stay within range
    for (int n : {n0, n0 + 2}) {
        HierMesh mesh = HierMesh::build(2, n);
        for (int e = 0; e < mesh.size(); ++e) {
            int m = -1;
            RegionClass c = mesh.classify(e, n0, &m);
            if (c == RegionClass::scalable) {
                CHECK(m >= 1);
                CHECK(m <= n - n0);
            } else {
                CHECK(m == 0);
            }
        }
    }
}

TEST_CASE("apex geometry degenerates to a triangle") {
    HierMesh mesh = HierMesh::build(2, 3);
    const HierElement& apex = mesh.elements()[0];
    CHECK(apex.kind == ElementKind::apex_triangle);
    auto vs = apex.vertices();
    CHECK(vs[0][0] == 0.0);
    CHECK(vs[0][1] == 0.0);
    CHECK(apex.area() == doctest::Approx(1.0 / 128.0).epsilon(1e-15).scale(1.0));
    CHECK(apex.inradius() > 0.0);
    CHECK(apex.diameter() > 0.0);
}
