#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "blochlat/census.hpp"
#include "blochlat/dilog.hpp"
#include "blochlat/report.hpp"
#include "blochlat/triangulation.hpp"

namespace py = pybind11;
using namespace blochlat;

namespace {

PrecisionContext make_ctx(unsigned digits) {
    return digits < 20 ? PrecisionContext::low_precision(digits)
                       : PrecisionContext::standard(digits);
}

// Values cross the boundary as decimal strings so no precision is lost to
// doubles; Python callers keep mpmath-style control.
std::string py_dilog(const std::string& z, unsigned digits) {
    auto ctx = make_ctx(digits);
    return format_real(dilog_D(parse_complex(z, ctx), ctx), ctx);
}

std::string py_dilog_quadrature(const std::string& z, unsigned digits) {
    auto ctx = make_ctx(digits);
    return format_real(dilog_D_quadrature(parse_complex(z, ctx), ctx), ctx);
}

std::vector<std::string> py_roots(const std::vector<long>& coeffs, unsigned digits) {
    auto ctx = make_ctx(digits);
    IntPolynomial p(std::vector<Integer>(coeffs.begin(), coeffs.end()));
    RootSet rs = roots(p, ctx);
    std::vector<std::string> out;
    for (const auto& r : rs.roots)
        out.push_back(format_complex(r, ctx));
    return out;
}

int py_places(const std::vector<long>& coeffs, unsigned digits) {
    auto ctx = make_ctx(digits);
    return count_complex_places(IntPolynomial(std::vector<Integer>(coeffs.begin(), coeffs.end())),
                                ctx);
}

std::optional<std::vector<long>> py_lindep(const std::vector<std::string>& values,
                                           unsigned digits, long coeff_bound) {
    auto ctx = make_ctx(digits);
    ScopedPrecision guard(ctx);
    std::vector<Real> xs;
    for (const auto& v : values)
        xs.push_back(parse_real(v, ctx));
    RelationResult dep = lindep(xs, ctx, coeff_bound);
    if (!dep.is_relation())
        return std::nullopt;
    std::vector<long> out;
    for (const auto& c : dep.coefficients)
        out.push_back(static_cast<long>(c));
    return out;
}

py::dict py_fit(const std::vector<std::tuple<std::string, std::string, std::string>>& samples,
                int dimension, unsigned digits) {
    auto ctx = make_ctx(digits);
    ScopedPrecision guard(ctx);
    std::vector<VolumeSample> vs;
    for (const auto& [name, vol, kind] : samples)
        vs.emplace_back(name, parse_real(vol, ctx), kind_from_name(kind));
    FitReport report = fit_field(vs, dimension, ctx);
    py::dict out;
    out["fit_ratio"] = format_rational(report.fit.fit_ratio);
    out["best_det"] = format_rational(report.fit.best_det);
    out["det_gcd"] = format_rational(report.fit.det_gcd);
    py::list basis;
    for (const auto& b : report.fit.basis)
        basis.append(b.manifold_name);
    out["basis"] = basis;
    py::list exprs;
    for (const auto& ex : report.expressions) {
        py::dict e;
        e["name"] = ex.sample.manifold_name;
        py::list coords;
        for (const auto& c : ex.coords)
            coords.append(format_rational(c));
        e["coords"] = coords;
        e["violation"] = ex.lattice_violation;
        exprs.append(e);
    }
    out["expressions"] = exprs;
    out["underdetermined"] = report.diagnostics.underdetermined;
    return out;
}

py::dict py_solve(const std::string& triangulation_path,
                  const std::vector<std::string>& seed_shapes, unsigned digits) {
    auto ctx = make_ctx(digits);
    Triangulation t = load_triangulation_json(triangulation_path, ctx);
    ShapeAssignment seed;
    for (const auto& s : seed_shapes)
        seed.shapes.push_back(parse_complex(s, ctx));
    SolveResult result = solve_shapes_newton(t, seed, ctx);
    py::dict out;
    py::list shapes;
    for (const auto& z : result.shapes.shapes)
        shapes.append(format_complex(z, ctx));
    out["shapes"] = shapes;
    out["geometric"] = result.geometric;
    out["iterations"] = result.iterations;
    out["volume"] = format_real(triangulation_volume(result.shapes, ctx), ctx);
    return out;
}

std::string py_fractional_gcd(const std::string& a, const std::string& b) {
    return format_rational(fractional_gcd(parse_rational(a), parse_rational(b)));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "multiprecision hyperbolic-volume lattice toolkit";

    py::register_exception<Error>(m, "BlochlatError");

    m.def("dilog", &py_dilog, py::arg("z"), py::arg("digits") = 64,
          "Ideal-tetrahedron volume D(z); z is a complex literal like '0.5+0.8i'.");
    m.def("dilog_quadrature", &py_dilog_quadrature, py::arg("z"), py::arg("digits") = 64,
          "Independent tanh-sinh evaluation of D(z).");
    m.def("roots", &py_roots, py::arg("coefficients"), py::arg("digits") = 64,
          "Complex roots of an integer polynomial (ascending coefficients).");
    m.def("count_complex_places", &py_places, py::arg("coefficients"), py::arg("digits") = 64);
    m.def("lindep", &py_lindep, py::arg("values"), py::arg("digits") = 64,
          py::arg("coeff_bound") = 0,
          "Integer relation for decimal values, or None when independent.");
    m.def("fit_field", &py_fit, py::arg("samples"), py::arg("dimension"),
          py::arg("digits") = 64,
          "Best-fit volume lattice: samples are (name, volume, 'geometric'|'exotic').");
    m.def("solve_triangulation", &py_solve, py::arg("path"), py::arg("seed_shapes"),
          py::arg("digits") = 64, "Newton-solve the gluing equations of a fixture file.");
    m.def("fractional_gcd", &py_fractional_gcd, py::arg("a"), py::arg("b"));
}
