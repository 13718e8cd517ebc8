#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "singspline/bspline.hpp"
#include "singspline/quadrature.hpp"

using namespace singspline;

TEST_CASE("dimension and knot layout") {
    SplineSpace s(2, 3);
    CHECK(s.dim() == 10);
    CHECK(s.num_spans() == 8);
    CHECK(s.knots().front() == 0.0);
    CHECK(s.knots().back() == 1.0);
    CHECK(s.mesh_size() == doctest::Approx(0.125).epsilon(1e-15).scale(1.0));
}

TEST_CASE("degree-1 hats peak at 1 and interpolate the endpoints") {
    SplineSpace s(1, 2);
    CHECK(s.eval(1, 0.0, 0) == doctest::Approx(1.0).epsilon(1e-15).scale(1.0));
    CHECK(s.eval(s.dim(), 1.0, 0) == doctest::Approx(1.0).epsilon(1e-15).scale(1.0));
    for (int i = 2; i < s.dim(); ++i)
        CHECK(s.eval(i, s.greville(i), 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("partition of unity at random points for all degrees and levels") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int p = 1; p <= 4; ++p) {
        for (int n = 0; n <= 6; n += 2) {
            SplineSpace s(p, n);
            SplineSpace::ActiveValues av;
            for (int trial = 0; trial < 1000 / (p * 3); ++trial) {
                const double x = unif(rng);
                s.eval_active(x, 1, av);
                double sum = 0.0, dsum = 0.0;
                for (int r = 0; r <= p; ++r) {
                    sum += av.ders[0][r];
                    dsum += av.ders[1][r];
                }
                CHECK(std::abs(sum - 1.0) < 1e-12);
                CHECK(std::abs(dsum) < 1e-9);
            }
        }
    }
}

TEST_CASE("local support") {
    SplineSpace s(3, 3);
    for (int i = 1; i <= s.dim(); ++i) {
        DyadicInterval supp = s.support(i);
        const double lo = supp.lo.value(), hi = supp.hi.value();
        if (lo > 0.0) CHECK(s.eval(i, lo - 1e-4, 0) == doctest::Approx(0.0).epsilon(1e-15).scale(1.0));
        if (hi < 1.0) CHECK(s.eval(i, hi + 1e-4, 0) == doctest::Approx(0.0).epsilon(1e-15).scale(1.0));
        CHECK(s.eval(i, 0.5 * (lo + hi), 0) > 0.0);
    }
}

TEST_CASE("derivatives agree with central differences") {
    SplineSpace s(3, 2);
    const double eps = 1e-6;
    for (int i = 1; i <= s.dim(); ++i) {
        for (double x : {0.11, 0.37, 0.52, 0.81}) {
            const double fd1 = (s.eval(i, x + eps, 0) - s.eval(i, x - eps, 0)) / (2 * eps);
            CHECK(s.eval(i, x, 1) == doctest::Approx(fd1).epsilon(1e-6));
            const double fd2 = (s.eval(i, x + eps, 1) - s.eval(i, x - eps, 1)) / (2 * eps);
            CHECK(s.eval(i, x, 2) == doctest::Approx(fd2).epsilon(1e-5));
        }
    }
}

TEST_CASE("eval matches eval_active") {
    SplineSpace s(2, 4);
    SplineSpace::ActiveValues av;
    for (double x : {0.03, 0.4, 0.77, 0.99}) {
        s.eval_active(x, 2, av);
        for (int r = 0; r <= 2; ++r) {
            const int i = av.first_index + r;
            for (int k = 0; k <= 2; ++k)
                CHECK(s.eval(i, x, k) == doctest::Approx(av.ders[k][r]).epsilon(1e-13));
        }
    }
}

TEST_CASE("Bernstein basis values, derivatives, and unity") {
    BernsteinBasis b(3);
    auto binom = [](int n, int k) {
        double r = 1;
        for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    };
    for (double t : {0.0, 0.2, 0.6, 1.0}) {
        double sum = 0.0;
        for (int j = 1; j <= 4; ++j) {
            const double expect =
                binom(3, j - 1) * std::pow(t, j - 1) * std::pow(1 - t, 4 - j);
            CHECK(b.eval(j, t, 0) == doctest::Approx(expect).epsilon(1e-13));
            sum += b.eval(j, t, 0);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    }
    const double eps = 1e-6;
    for (int j = 1; j <= 4; ++j)
        for (double t : {0.2, 0.45, 0.8}) {
            const double fd = (b.eval(j, t + eps, 0) - b.eval(j, t - eps, 0)) / (2 * eps);
            CHECK(b.eval(j, t, 1) == doctest::Approx(fd).epsilon(1e-6));
            const double fd2 = (b.eval(j, t + eps, 1) - b.eval(j, t - eps, 1)) / (2 * eps);
            CHECK(b.eval(j, t, 2) == doctest::Approx(fd2).epsilon(1e-5));
        }
}

TEST_CASE("local dual functionals are biorthogonal") {
    for (int p : {1, 2, 3}) {
        SplineSpace s(p, 3);
        for (int k = 1; k <= s.dim(); ++k) {
            UnivariateDual lam(s, k);
            // the span is inside the support of b_k
            CHECK(s.support(k).contains(lam.support_interval()));
            for (int i = 1; i <= s.dim(); ++i) {
                const double val = lam.apply([&](double x) { return s.eval(i, x, 0); }, p + 1);
                CHECK(std::abs(val - (i == k ? 1.0 : 0.0)) < 1e-9);
            }
        }
    }
}

TEST_CASE("duals reproduce spline coefficients of a constant") {
    SplineSpace s(2, 3);
    // 1 = sum_k b_k, so every dual maps the constant to 1
    for (int k = 1; k <= s.dim(); ++k) {
        UnivariateDual lam(s, k);
        CHECK(lam.apply([](double) { return 1.0; }, 3) == doctest::Approx(1.0).epsilon(1e-12));
    }
}
