#pragma once

#include <array>
#include <string>
#include <vector>

#include "blochlat/complex.hpp"
#include "blochlat/precision.hpp"

namespace blochlat {

/// Cross-ratio (c-a)(d-b) / ((d-a)(c-b)) of four pairwise-distinct sphere
/// points, at most one of which may be the point at infinity (handled by
/// cancelling the two factors that contain it).
BigComplex cross_ratio(const BigComplex& a, const BigComplex& b, const BigComplex& c,
                       const BigComplex& d);

/// The three dihedral-angle parameters of a simplex with shape z:
/// (z, (z-1)/z, 1/(1-z)). Their product is -1 identically.
enum class AngleSlot { Z, ZPRIME, ZPRIMEPRIME };
std::array<BigComplex, 3> shape_parameters(const BigComplex& z);
BigComplex shape_parameter(const BigComplex& z, AngleSlot slot);

const char* slot_name(AngleSlot slot);
AngleSlot slot_from_name(const std::string& name);

struct PathStep {
    int simplex;
    AngleSlot slot;
};

/// A transverse closed path, recorded as the angle parameters it picks up.
struct Path {
    std::vector<PathStep> steps;
};

struct CuspPaths {
    Path meridian;
    Path longitude;
};

/// A simplex edge: simplex index and vertex pair (v0 < v1).
struct EdgeRef {
    int simplex;
    int v0, v1;
    bool operator==(const EdgeRef& o) const {
        return simplex == o.simplex && v0 == o.v0 && v1 == o.v1;
    }
};

/// Triangulation data as shipped in the JSON fixture format: simplices, the
/// partition of their 6n edges into classes, one path around each edge class,
/// and meridian/longitude paths per cusp.
struct Triangulation {
    std::string name;
    int num_simplices = 0;
    std::vector<std::vector<EdgeRef>> edge_classes;
    std::vector<Path> edge_paths;
    std::vector<CuspPaths> cusps;

    /// Enforces the structural invariants; throws FormatError/InvalidPathError.
    void validate() const;
};

/// Shapes, one per simplex; geometric iff every imaginary part is positive.
struct ShapeAssignment {
    std::vector<BigComplex> shapes;

    bool is_geometric() const;
    void check_nondegenerate() const; // 0/1/inf shapes throw DegenerateSimplexError
};

/// Product of the selected angle parameters along the path.
BigComplex path_monodromy(const Triangulation& t, const Path& path, const ShapeAssignment& s);

/// M(path) - 1 for every cusp path (meridian, longitude per cusp, in order)
/// and for every edge path; all zero exactly when the gluing equations hold.
std::vector<BigComplex> cusp_residuals(const Triangulation& t, const ShapeAssignment& s);
std::vector<BigComplex> edge_residuals(const Triangulation& t, const ShapeAssignment& s);

struct SolveResult {
    ShapeAssignment shapes;
    int iterations = 0;
    Real final_residual;
    bool geometric = false;
};

/// Newton iteration on the logarithmic gluing system. Integer branch offsets
/// are frozen from the initial point, redundant equations are dropped by
/// rank-revealing row selection at the initial point, and the iteration runs
/// until every multiplicative residual clears 10^(5-digits) (precision is
/// escalated once if the first pass stalls). Already-solved input returns
/// after the residual check with zero iterations.
SolveResult solve_shapes_newton(const Triangulation& t, const ShapeAssignment& initial,
                                const PrecisionContext& ctx);

/// Sum of D over the shapes.
Real triangulation_volume(const ShapeAssignment& s, const PrecisionContext& ctx);

/// Ptolemy assignment on a triangulation: one value per edge class (identified
/// edges carry equal values), an obstruction sign per simplex, antisymmetry
/// c_{kj} = -c_{jk} realized at query time.
struct PtolemyAssignment {
    int num_simplices = 0;
    /// Per simplex, the class of edges (01, 02, 03, 12, 13, 23) in that order.
    std::vector<std::array<int, 6>> edge_class_of;
    std::vector<BigComplex> class_values;  // nonzero
    std::vector<int> obstruction_sign;     // +1 / -1 per simplex

    /// Single free simplex whose six edges are distinct classes.
    static PtolemyAssignment single(const std::array<BigComplex, 6>& values, int sign);

    void validate() const;
    /// c^{simplex}_{jk} with antisymmetry under j<->k.
    BigComplex c(int simplex, int j, int k) const;
};

/// Per simplex: c03 c12 + c01 c23 - c02 c13.
std::vector<BigComplex> ptolemy_residuals(const PtolemyAssignment& pa);

/// Shape recovery: obstruction_sign * (c03 c12) / (c02 c13).
BigComplex cross_ratio_from_ptolemy(const PtolemyAssignment& pa, int simplex);

// JSON fixture formats (versioned, documented in the README).
Triangulation load_triangulation_json(const std::string& path, const PrecisionContext& ctx);
Triangulation parse_triangulation_json(const std::string& text, const PrecisionContext& ctx);
ShapeAssignment load_shapes_json(const std::string& path, const PrecisionContext& ctx);
ShapeAssignment parse_shapes_json(const std::string& text, const PrecisionContext& ctx);
std::string shapes_to_json(const ShapeAssignment& s, const PrecisionContext& ctx);
PtolemyAssignment load_ptolemy_json(const std::string& path, const PrecisionContext& ctx);
PtolemyAssignment parse_ptolemy_json(const std::string& text, const PrecisionContext& ctx);

} // namespace blochlat
