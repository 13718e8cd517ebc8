// Command-line front end: mesh dumps, basis queries, projection,
// convergence studies, stability scans, and geometry checks.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "singspline/geometry.hpp"
#include "singspline/study.hpp"

using namespace singspline;
using nlohmann::json;

namespace {

struct LevelRange {
    int lo = -1, hi = -1;
};

LevelRange parse_levels(const std::string& text) {
    LevelRange r;
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            r.lo = r.hi = std::stoi(text);
        } else {
            r.lo = std::stoi(text.substr(0, colon));
            r.hi = std::stoi(text.substr(colon + 1));
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("levels must be an integer or a range a:b, got '" + text + "'");
    }
    if (r.lo < 0 || r.hi < r.lo)
        throw std::invalid_argument("invalid level range '" + text + "'");
    return r;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw std::invalid_argument("cannot open output file '" + out_path + "'");
    f << text;
}

// "identity", "curved", or a JSON file path.
RationalGeometry make_geometry(const std::string& spec, int degree, int coarse_level) {
    if (spec == "identity") return RationalGeometry::identity(degree, coarse_level);
    if (spec == "curved") return RationalGeometry::curved(degree, coarse_level, 0.1, 0.1);
    return RationalGeometry::load(spec);
}

json config_echo(const json& extra) {
    json j = extra;
    j["version"] = kVersion;
    return j;
}

const char* region_name(RegionClass c) {
    switch (c) {
        case RegionClass::right_of_3_8: return "right_of_3_8";
        case RegionClass::scalable: return "scalable";
        default: return "singular_core";
    }
}

int run(int argc, char** argv) {
    CLI::App app{"hierarchical spline spaces and projection studies on a collapsed-edge "
                 "triangular patch"};
    app.require_subcommand(1);

    int degree = 2;
    int level = -1;
    std::string levels_text;
    std::string function_name = "trig";
    std::string geometry_spec;
    int geom_level = -1;
    std::string out_path;
    std::string format = "json";
    std::uint64_t seed = 42;
    int n_samples = 50;
    int quad_order = -1;
    bool paper_literal_mk = false;
    int basis_index = -1;
    int grid = 16;
    int sample_level = -1;

    auto add_common = [&](CLI::App* sub, bool with_level) {
        sub->add_option("--degree", degree, "spline degree p")->check(CLI::Range(1, 8));
        if (with_level) sub->add_option("--level", level, "refinement level n (default n0)");
        sub->add_option("--quad-order", quad_order, "Gauss points per direction (default p+3)");
        sub->add_option("--out", out_path, "output file (default stdout)");
        return sub;
    };

    CLI::App* mesh_cmd = add_common(app.add_subcommand("mesh", "dump the hierarchical mesh"), true);
    CLI::App* basis_cmd =
        add_common(app.add_subcommand("basis", "enumerate the basis or sample one function"), true);
    basis_cmd->add_option("--index", basis_index, "basis function to sample (CSV u,v,value)");
    basis_cmd->add_option("--grid", grid, "sample grid resolution")->check(CLI::Range(2, 2048));
    CLI::App* project_cmd =
        add_common(app.add_subcommand("project", "project a test function"), true);
    project_cmd->add_option("--function", function_name, "test function name");
    project_cmd->add_flag("--paper-literal-mk", paper_literal_mk,
                          "use the alternative t-level formula ceil(log2(k-p+1))");
    CLI::App* study_cmd = add_common(app.add_subcommand("study", "convergence study"), false);
    study_cmd->add_option("--levels", levels_text, "level range a:b")->required();
    study_cmd->add_option("--function", function_name, "test function name");
    study_cmd->add_option("--geometry", geometry_spec,
                          "identity | curved | geometry JSON file (omit for triangle study)");
    study_cmd->add_option("--geom-level", geom_level, "coarse level of built-in geometries");
    study_cmd->add_option("--format", format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    study_cmd->add_flag("--paper-literal-mk", paper_literal_mk,
                        "use the alternative t-level formula ceil(log2(k-p+1))");
    CLI::App* stab_cmd = add_common(app.add_subcommand("stability", "stability ratio scan"), false);
    stab_cmd->add_option("--levels", levels_text, "level range a:b")->required();
    stab_cmd->add_option("--samples", n_samples, "random sample functions")->check(CLI::Range(1, 10000));
    stab_cmd->add_option("--seed", seed, "RNG seed");
    CLI::App* geo_cmd =
        add_common(app.add_subcommand("geometry-check", "validate a rational geometry"), false);
    geo_cmd->add_option("--geometry", geometry_spec, "identity | curved | geometry JSON file")
        ->required();
    geo_cmd->add_option("--geom-level", geom_level, "coarse level of built-in geometries");
    geo_cmd->add_option("--sample-level", sample_level, "mesh level for positivity sampling");

    CLI11_PARSE(app, argc, argv);

    const int n0 = initial_level(degree);
    if (level < 0) level = n0;
    if (geom_level < 0) geom_level = n0;
    if (quad_order < 0) quad_order = degree + 3;
    if (sample_level < 0) sample_level = n0;

    if (mesh_cmd->parsed()) {
        HierMesh mesh = HierMesh::build(degree, level);
        json elems = json::array();
        for (int e = 0; e < mesh.size(); ++e) {
            const HierElement& el = mesh.elements()[e];
            json v = json::array();
            for (const auto& pt : el.vertices()) v.push_back({pt[0], pt[1]});
            elems.push_back({{"index", e},
                             {"kind", el.kind == ElementKind::apex_triangle ? "apex_triangle"
                                                                            : "trapezoid"},
                             {"s", {el.s0.str(), el.s1.str()}},
                             {"t", {el.t0.str(), el.t1.str()}},
                             {"t_level", el.level_of_origin},
                             {"region", region_name(mesh.classify(e, n0))},
                             {"vertices", v}});
        }
        json j;
        j["config"] = config_echo({{"degree", degree}, {"level", level}, {"n0", n0}});
        j["element_count"] = mesh.size();
        j["elements"] = elems;
        emit(out_path, j.dump(2) + "\n");
        return 0;
    }

    if (basis_cmd->parsed()) {
        HierSpace space = HierSpace::build(degree, level);
        if (basis_index < 0) {
            json fns = json::array();
            for (int idx = 0; idx < space.dim(); ++idx) {
                const HierBasisFunction& fn = space.fn(idx);
                fns.push_back({{"index", idx},
                               {"i", fn.i},
                               {"j", fn.j},
                               {"block", fn.block == BasisBlock::singular ? "singular" : "regular"},
                               {"t_level", fn.t_level},
                               {"s_support", {fn.s_support.lo.str(), fn.s_support.hi.str()}},
                               {"t_support", {fn.t_support.lo.str(), fn.t_support.hi.str()}}});
            }
            json j;
            j["config"] = config_echo({{"degree", degree}, {"level", level}});
            j["dim"] = space.dim();
            j["basis"] = fns;
            emit(out_path, j.dump(2) + "\n");
            return 0;
        }
        if (basis_index >= space.dim())
            throw std::invalid_argument("basis index out of range (dim = " +
                                        std::to_string(space.dim()) + ")");
        std::ostringstream csv;
        csv << "u,v,value\n";
        for (int a = 0; a <= grid; ++a) {
            const double u = static_cast<double>(a) / grid;
            for (int b = 0; b <= grid; ++b) {
                const double v = u * static_cast<double>(b) / grid;
                char buf[128];
                std::snprintf(buf, sizeof(buf), "%.12e,%.12e,%.12e\n", u, v,
                              space.eval_value(basis_index, u, v));
                csv << buf;
            }
        }
        emit(out_path, csv.str());
        return 0;
    }

    if (project_cmd->parsed()) {
        const TestFunction& fn = find_test_function(function_name);
        GlobalDualSet duals(HierSpace::build(degree, level), quad_order, paper_literal_mk);
        TestField phi(fn);
        json j;
        j["config"] = config_echo({{"degree", degree},
                                   {"level", level},
                                   {"function", function_name},
                                   {"quad_order", quad_order},
                                   {"paper_literal_mk", paper_literal_mk}});
        j["dim"] = duals.dim();
        j["coefficients"] = duals.project(phi);
        emit(out_path, j.dump(2) + "\n");
        return 0;
    }

    if (study_cmd->parsed()) {
        const LevelRange lr = parse_levels(levels_text);
        if (lr.lo < n0)
            throw std::invalid_argument("study levels must start at or above n0 = " +
                                        std::to_string(n0));
        const TestFunction& fn = find_test_function(function_name);
        std::optional<RationalGeometry> geom;
        if (!geometry_spec.empty()) geom.emplace(make_geometry(geometry_spec, degree, geom_level));
        ErrorTable table = run_convergence_study(degree, lr.lo, lr.hi, fn,
                                                 geom ? &*geom : nullptr, quad_order,
                                                 paper_literal_mk);
        table.geometry = geometry_spec;
        emit(out_path, format == "csv" ? error_table_csv(table) : error_table_json(table));
        return 0;
    }

    if (stab_cmd->parsed()) {
        const LevelRange lr = parse_levels(levels_text);
        StabilityReport report =
            run_stability_scan(degree, lr.lo, lr.hi, n_samples, seed, quad_order);
        emit(out_path, stability_report_json(report));
        return 0;
    }

    if (geo_cmd->parsed()) {
        RationalGeometry geom = make_geometry(geometry_spec, degree, geom_level);
        RationalGeometry::CheckReport rep = geom.check(sample_level, quad_order);
        json j;
        j["config"] = config_echo({{"geometry", geometry_spec},
                                   {"degree", geom.degree()},
                                   {"coarse_level", geom.coarse_level()},
                                   {"sample_level", sample_level},
                                   {"quad_order", quad_order}});
        j["min_weight"] = rep.min_f0;
        j["min_jacobian_det"] = rep.min_det;
        j["samples"] = rep.samples;
        j["valid"] = rep.valid();
        emit(out_path, j.dump(2) + "\n");
        return rep.valid() ? 0 : 2;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
