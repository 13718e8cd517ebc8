#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "singspline/study.hpp"

using namespace singspline;

TEST_CASE("registry lookup and jets") {
    CHECK(test_registry().size() == 6);
    const TestFunction& trig = find_test_function("trig");
    Jet2 j = trig.jet(0.3, 0.1);
    CHECK(j.v == doctest::Approx(std::sin(M_PI * 0.3) * std::sin(M_PI * 0.1)).epsilon(1e-14));
    CHECK_THROWS_AS(find_test_function("nope"), std::invalid_argument);
    // registry jets agree with finite differences
    const double eps = 1e-6;
    for (const TestFunction& fn : test_registry()) {
        const double u = 0.4, v = 0.2;
        const double du = (fn.jet(u + eps, v).v - fn.jet(u - eps, v).v) / (2 * eps);
        const double dv = (fn.jet(u, v + eps).v - fn.jet(u, v - eps).v) / (2 * eps);
        CHECK(fn.jet(u, v).du == doctest::Approx(du).epsilon(1e-6));
        CHECK(fn.jet(u, v).dv == doctest::Approx(dv).epsilon(1e-6));
        const double duv = (fn.jet(u, v + eps).du - fn.jet(u, v - eps).du) / (2 * eps);
        CHECK(fn.jet(u, v).duv == doctest::Approx(duv).epsilon(1e-5).scale(1.0));
    }
}

TEST_CASE("rate fitting") {
    RateFit fit = fit_rate({1e-2, 1.25e-3}, {1.0 / 8, 1.0 / 16});
    CHECK_FALSE(fit.reproduced);
    CHECK(fit.slope == doctest::Approx(3.0).epsilon(1e-12));
    REQUIRE(fit.ratios.size() == 1);
    CHECK(fit.ratios[0] == doctest::Approx(3.0).epsilon(1e-12));

    RateFit flat = fit_rate({0.5, 0.5, 0.5}, {0.25, 0.125, 0.0625});
    CHECK(flat.slope == doctest::Approx(0.0).epsilon(1e-12));

    RateFit rep = fit_rate({1e-15, 1e-14}, {0.25, 0.125});
    CHECK(rep.reproduced);

    CHECK_THROWS_AS(fit_rate({1.0}, {0.5}), std::invalid_argument);
}

TEST_CASE("convergence study: errors decrease and rates land in the window") {
    const TestFunction& trig = find_test_function("trig");
    ErrorTable table = run_convergence_study(1, 3, 6, trig, nullptr, 4);
    REQUIRE(table.rows.size() == 4);
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        CHECK(table.rows[i].err_l2 < table.rows[i - 1].err_l2);
        CHECK(table.rows[i].h == doctest::Approx(table.rows[i - 1].h / 2).epsilon(1e-15).scale(1.0));
    }
    CHECK_FALSE(table.l2_fit.reproduced);
    CHECK(table.l2_fit.slope > 1.8);
    CHECK(table.l2_fit.slope < 2.2);
    CHECK(table.h1_fit.slope > 0.8);
    CHECK(table.h1_fit.slope < 1.2);
}

TEST_CASE("matching-degree polynomials are flagged as reproduced") {
    const TestFunction& poly = find_test_function("poly_2");
    ErrorTable table = run_convergence_study(2, 4, 6, poly, nullptr, 5);
    for (const ErrorRow& r : table.rows) {
        CHECK(r.err_l2 < 1e-8);
        CHECK(r.err_h1 < 1e-8);
    }
    CHECK(table.l2_fit.reproduced);
    CHECK(table.h1_fit.reproduced);
}

TEST_CASE("CSV schema and determinism") {
    const TestFunction& expf = find_test_function("expf");
    ErrorTable a = run_convergence_study(1, 3, 5, expf, nullptr, 4);
    ErrorTable b = run_convergence_study(1, 3, 5, expf, nullptr, 4);
    const std::string csv_a = error_table_csv(a), csv_b = error_table_csv(b);
    CHECK(csv_a == csv_b);
    CHECK(error_table_json(a) == error_table_json(b));
    std::istringstream in(csv_a);
    std::string header;
    std::getline(in, header);
    CHECK(header == "level,h,err_L2,err_H1,ratio_L2,ratio_H1");
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("stability scan aggregates and determinism") {
    StabilityReport a = run_stability_scan(1, 3, 4, 8, 42, 4);
    StabilityReport b = run_stability_scan(1, 3, 4, 8, 42, 4);
    CHECK(stability_report_json(a) == stability_report_json(b));
    REQUIRE(a.levels.size() == 2);
    for (const StabilityLevel& lvl : a.levels) {
        CHECK(lvl.max_ratio > 0.0);
        CHECK(std::isfinite(lvl.max_ratio));
        CHECK(lvl.mean_ratio > 0.0);
        CHECK(lvl.mean_ratio <= lvl.max_ratio);
        CHECK(lvl.control_max_ratio <= 1.0 + 1e-12);
        CHECK(lvl.scaled_identity_mismatch < 1e-9);
        std::int64_t total = 0;
        for (int k = 0; k < 3; ++k) {
            total += lvl.per_class[k].count;
            CHECK(lvl.per_class[k].max_ratio <= lvl.max_ratio + 1e-15);
        }
        CHECK(total > 0);
    }
    CHECK(a.cs_estimate ==
          doctest::Approx(std::max(a.levels[0].max_ratio, a.levels[1].max_ratio)).epsilon(1e-15).scale(1.0));
    // different seed gives a different (but valid) report
    StabilityReport c = run_stability_scan(1, 3, 4, 8, 43, 4);
    CHECK(stability_report_json(a) != stability_report_json(c));
    CHECK_THROWS_AS(run_stability_scan(1, 2, 4, 8, 42, 4), std::invalid_argument);
}

TEST_CASE("image-domain study with the identity geometry matches the triangle study") {
    RationalGeometry ident = RationalGeometry::identity(2, 4);
    const TestFunction& expf = find_test_function("expf");
    ErrorTable flat = run_convergence_study(2, 4, 5, expf, nullptr, 5);
    ErrorTable mapped = run_convergence_study(2, 4, 5, expf, &ident, 5);
    REQUIRE(flat.rows.size() == mapped.rows.size());
    for (std::size_t i = 0; i < flat.rows.size(); ++i) {
        CHECK(std::abs(flat.rows[i].err_l2 - mapped.rows[i].err_l2) <
              1e-12 * std::max(1.0, flat.rows[i].err_l2));
        CHECK(std::abs(flat.rows[i].err_h1 - mapped.rows[i].err_h1) <
              1e-12 * std::max(1.0, flat.rows[i].err_h1));
    }
}
