#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "singspline/fields.hpp"
#include "singspline/hier_mesh.hpp"
#include "singspline/norms.hpp"
#include "singspline/quadrature.hpp"

using namespace singspline;

TEST_CASE("Gauss rule integrates monomials exactly up to degree 2q-1") {
    for (int order = 1; order <= 10; ++order) {
        const GaussRule& rule = gauss_legendre(order);
        REQUIRE(rule.nodes.size() == static_cast<std::size_t>(order));
        for (int d = 0; d <= 2 * order - 1; ++d) {
            double sum = 0.0;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q)
                sum += rule.weights[q] * std::pow(rule.nodes[q], d);
            CHECK(sum == doctest::Approx(1.0 / (d + 1)).epsilon(1e-13));
        }
    }
}

TEST_CASE("nodes are interior and weights positive") {
    const GaussRule& rule = gauss_legendre(7);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        CHECK(rule.nodes[q] > 0.0);
        CHECK(rule.nodes[q] < 1.0);
        CHECK(rule.weights[q] > 0.0);
    }
}

TEST_CASE("triangle integrals via element pullback") {
    HierMesh mesh = HierMesh::build(2, 3);
    auto one = [](double, double) { return 1.0; };
    auto ufn = [](double u, double) { return u; };
    CHECK(integrate_mesh(mesh, one, 5) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(integrate_mesh(mesh, ufn, 5) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    // the collapsed-rectangle (apex) path agrees with the exact value too
    const HierElement& apex = mesh.elements()[0];
    const double h = apex.s1.value();
    CHECK(integrate_element(apex, one, 5) == doctest::Approx(h * h / 2).epsilon(1e-13));
}

TEST_CASE("element sums are additive by construction") {
    HierMesh mesh = HierMesh::build(1, 4);
    auto f = [](double u, double v) { return std::sin(3 * u) + v * v; };
    double total = 0.0;
    for (const HierElement& e : mesh.elements()) total += integrate_element(e, f, 6);
    CHECK(total == doctest::Approx(integrate_mesh(mesh, f, 6)).epsilon(1e-15).scale(1.0));
}

TEST_CASE("Sobolev seminorms of simple fields") {
    HierMesh mesh = HierMesh::build(2, 4);
    ConstantField one(1.0);
    CallableField ufield([](double u, double) { return Jet2{u, 1, 0, 0, 0, 0}; });
    CHECK(sobolev_seminorm(mesh, one, 1, 5) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(sobolev_seminorm(mesh, ufield, 1, 5) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
    // q = 0 agrees with the direct integral of the square
    const double direct =
        std::sqrt(integrate_mesh(mesh, [](double u, double) { return u * u; }, 5));
    CHECK(sobolev_seminorm(mesh, ufield, 0, 5) == doctest::Approx(direct).epsilon(1e-12));
    // full norm combines the seminorms
    const double h1 = sobolev_norm(mesh, ufield, 1, 5);
    CHECK(h1 == doctest::Approx(std::sqrt(direct * direct + 0.5)).epsilon(1e-10));
    CHECK_THROWS_AS(sobolev_seminorm(mesh, one, 3, 5), std::invalid_argument);
}

TEST_CASE("self-convergence under order refinement") {
    HierMesh mesh = HierMesh::build(2, 3);
    CallableField trig([](double u, double v) {
        const double pi = 3.14159265358979323846;
        const double su = std::sin(pi * u), cu = std::cos(pi * u);
        const double sv = std::sin(pi * v), cv = std::cos(pi * v);
        return Jet2{su * sv, pi * cu * sv, pi * su * cv,
                    -pi * pi * su * sv, pi * pi * cu * cv, -pi * pi * su * sv};
    });
    for (int q : {0, 1}) {
        const double coarse = sobolev_seminorm(mesh, trig, q, 5);
        const double fine = sobolev_seminorm(mesh, trig, q, 9);
        CHECK(std::abs(coarse - fine) / fine < 1e-8);
    }
}
