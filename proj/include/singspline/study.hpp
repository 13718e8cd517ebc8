#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "singspline/geometry.hpp"
#include "singspline/projector.hpp"

namespace singspline {

inline constexpr const char* kVersion = "singspline-1.0.0";

// Smooth test functions with analytic jets; "poly_k" is a total-degree-k
// polynomial, used for exact-reproduction checks at matching spline degree.
struct TestFunction {
    std::string name;
    int poly_degree = -1;  // -1 for non-polynomial members
    Jet2 (*jet)(double u, double v) = nullptr;
};

const std::vector<TestFunction>& test_registry();
const TestFunction& find_test_function(const std::string& name);  // throws invalid_argument

class TestField : public ScalarField {
public:
    explicit TestField(const TestFunction& fn) : fn_(&fn) {}
    Jet2 jet(double u, double v) const override { return fn_->jet(u, v); }

private:
    const TestFunction* fn_;
};

// Least-squares slope of log(err) against log(h), with pairwise log2 ratios.
// Any error below the reproduction threshold 1e-13 flips the sentinel and
// suppresses the slope (the data measures roundoff, not a rate).
struct RateFit {
    bool reproduced = false;
    double slope = 0.0;
    std::vector<double> ratios;  // log2(e_i / e_{i+1})
};
RateFit fit_rate(const std::vector<double>& errors, const std::vector<double>& hs);

struct ErrorRow {
    int level = 0;
    double h = 0.0;
    double err_l2 = 0.0;
    double err_h1 = 0.0;
};

struct ErrorTable {
    int degree = 0;
    int n0 = 0;
    int gauss_order = 0;
    std::string function;
    std::string geometry;  // "" for a triangle study
    std::vector<ErrorRow> rows;
    RateFit l2_fit, h1_fit;  // fitted over the finest three levels
};

// Projects the test function at each level and records global L2 and H1
// errors. With a geometry, the study runs on the image domain via the mapped
// projector; without one, directly on the triangle.
ErrorTable run_convergence_study(int degree, int level_lo, int level_hi,
                                 const TestFunction& fn, const RationalGeometry* geom,
                                 int gauss_order, bool paper_literal_mk = false);

std::string error_table_csv(const ErrorTable& table);
std::string error_table_json(const ErrorTable& table);

struct RegionStats {
    double max_ratio = 0.0;
    double sum_ratio = 0.0;
    std::int64_t count = 0;
    double mean() const { return count ? sum_ratio / count : 0.0; }
};

struct StabilityLevel {
    int level = 0;
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
    RegionStats per_class[3];  // indexed by RegionClass
    double control_max_ratio = 0.0;     // phi = 1
    double scaled_identity_mismatch = 0.0;  // singular-core cross-level check
};

struct StabilityReport {
    int degree = 0;
    int n0 = 0;
    int gauss_order = 0;
    int n_samples = 0;
    std::uint64_t seed = 0;
    std::vector<StabilityLevel> levels;
    double cs_estimate = 0.0;  // max ratio over all levels and samples
};

// Samples seeded random smooth functions (trig modes plus a random tensor
// spline on a fixed coarse space), projects each, and measures the
// element-local ratio ||P phi||_{L2(elem)} / ||phi||_{L2(extension)} on every
// element. Also cross-checks singular-core elements against the rescaled
// coarsest-level projection.
StabilityReport run_stability_scan(int degree, int level_lo, int level_hi, int n_samples,
                                   std::uint64_t seed, int gauss_order);

std::string stability_report_json(const StabilityReport& report);

}  // namespace singspline
