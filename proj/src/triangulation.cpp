#include "blochlat/triangulation.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "blochlat/dilog.hpp"

namespace blochlat {

using nlohmann::json;

BigComplex cross_ratio(const BigComplex& a, const BigComplex& b, const BigComplex& c,
                       const BigComplex& d) {
    const BigComplex* pts[4] = {&a, &b, &c, &d};
    int infinite = -1;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j)
            if (*pts[i] == *pts[j])
                throw DegenerateSimplexError("cross_ratio: repeated points");
        if (pts[i]->is_infinity())
            infinite = i;
    }
    switch (infinite) {
    case 0: return (d - b) / (c - b);
    case 1: return (c - a) / (d - a);
    case 2: return (d - b) / (d - a);
    case 3: return (c - a) / (c - b);
    default: return ((c - a) * (d - b)) / ((d - a) * (c - b));
    }
}

namespace {

void check_shape(const BigComplex& z) {
    if (z.is_infinity() || z.is_zero() || (z.im() == 0 && z.re() == 1))
        throw DegenerateSimplexError("shape must avoid 0, 1, inf");
}

} // namespace

std::array<BigComplex, 3> shape_parameters(const BigComplex& z) {
    check_shape(z);
    BigComplex one(Real(1), Real(0));
    return {z, (z - one) / z, one / (one - z)};
}

BigComplex shape_parameter(const BigComplex& z, AngleSlot slot) {
    check_shape(z);
    BigComplex one(Real(1), Real(0));
    switch (slot) {
    case AngleSlot::Z: return z;
    case AngleSlot::ZPRIME: return (z - one) / z;
    default: return one / (one - z);
    }
}

const char* slot_name(AngleSlot slot) {
    switch (slot) {
    case AngleSlot::Z: return "Z";
    case AngleSlot::ZPRIME: return "ZPRIME";
    default: return "ZPRIMEPRIME";
    }
}

AngleSlot slot_from_name(const std::string& name) {
    if (name == "Z")
        return AngleSlot::Z;
    if (name == "ZPRIME")
        return AngleSlot::ZPRIME;
    if (name == "ZPRIMEPRIME")
        return AngleSlot::ZPRIMEPRIME;
    throw FormatError("unknown angle slot '" + name + "'");
}

void Triangulation::validate() const {
    if (num_simplices < 1)
        throw FormatError("triangulation '" + name + "': needs at least one simplex");
    // Every simplex edge in exactly one class.
    std::set<std::tuple<int, int, int>> seen;
    for (const auto& cls : edge_classes) {
        for (const auto& e : cls) {
            if (e.simplex < 0 || e.simplex >= num_simplices || e.v0 < 0 || e.v1 > 3 ||
                e.v0 >= e.v1)
                throw FormatError("triangulation '" + name + "': bad edge reference");
            if (!seen.insert({e.simplex, e.v0, e.v1}).second)
                throw FormatError("triangulation '" + name + "': edge listed twice");
        }
    }
    if (seen.size() != static_cast<std::size_t>(6 * num_simplices))
        throw FormatError("triangulation '" + name + "': edge classes must cover all 6n edges");
    if (edge_paths.size() != edge_classes.size())
        throw FormatError("triangulation '" + name + "': one path per edge class required");
    auto check_path = [&](const Path& p) {
        if (p.steps.empty())
            throw InvalidPathError("triangulation '" + name + "': empty path");
        for (const auto& s : p.steps)
            if (s.simplex < 0 || s.simplex >= num_simplices)
                throw InvalidPathError("triangulation '" + name + "': path references simplex " +
                                       std::to_string(s.simplex));
    };
    for (const auto& p : edge_paths)
        check_path(p);
    for (const auto& c : cusps) {
        check_path(c.meridian);
        check_path(c.longitude);
    }
}

bool ShapeAssignment::is_geometric() const {
    for (const auto& z : shapes)
        if (z.is_infinity() || !(z.im() > 0))
            return false;
    return !shapes.empty();
}

void ShapeAssignment::check_nondegenerate() const {
    for (const auto& z : shapes)
        check_shape(z);
}

BigComplex path_monodromy(const Triangulation& t, const Path& path, const ShapeAssignment& s) {
    if (path.steps.empty())
        throw InvalidPathError("path_monodromy: empty path");
    if (s.shapes.size() != static_cast<std::size_t>(t.num_simplices))
        throw InvalidPathError("path_monodromy: shape count does not match triangulation");
    BigComplex m(Real(1), Real(0));
    for (const auto& step : path.steps) {
        if (step.simplex < 0 || step.simplex >= t.num_simplices)
            throw InvalidPathError("path_monodromy: step references missing simplex " +
                                   std::to_string(step.simplex));
        m = m * shape_parameter(s.shapes[static_cast<std::size_t>(step.simplex)], step.slot);
    }
    return m;
}

std::vector<BigComplex> cusp_residuals(const Triangulation& t, const ShapeAssignment& s) {
    BigComplex one(Real(1), Real(0));
    std::vector<BigComplex> out;
    out.reserve(2 * t.cusps.size());
    for (const auto& c : t.cusps) {
        out.push_back(path_monodromy(t, c.meridian, s) - one);
        out.push_back(path_monodromy(t, c.longitude, s) - one);
    }
    return out;
}

std::vector<BigComplex> edge_residuals(const Triangulation& t, const ShapeAssignment& s) {
    BigComplex one(Real(1), Real(0));
    std::vector<BigComplex> out;
    out.reserve(t.edge_paths.size());
    for (const auto& p : t.edge_paths)
        out.push_back(path_monodromy(t, p, s) - one);
    return out;
}

namespace {

std::vector<const Path*> all_paths(const Triangulation& t) {
    std::vector<const Path*> paths;
    for (const auto& c : t.cusps) {
        paths.push_back(&c.meridian);
        paths.push_back(&c.longitude);
    }
    for (const auto& p : t.edge_paths)
        paths.push_back(&p);
    return paths;
}

/// Sum of principal logs of the step parameters.
BigComplex log_sum(const Path& p, const std::vector<BigComplex>& shapes) {
    BigComplex acc(Real(0), Real(0));
    for (const auto& step : p.steps)
        acc = acc + clog(shape_parameter(shapes[static_cast<std::size_t>(step.simplex)], step.slot));
    return acc;
}

/// d log(param) / dz for each slot.
BigComplex dlog_param(const BigComplex& z, AngleSlot slot) {
    BigComplex one(Real(1), Real(0));
    switch (slot) {
    case AngleSlot::Z: return one / z;
    case AngleSlot::ZPRIME: return one / (z - one) - one / z;
    default: return one / (one - z);
    }
}

Real max_multiplicative_residual(const Triangulation& t, const ShapeAssignment& s) {
    Real worst(0);
    for (const auto& r : cusp_residuals(t, s))
        worst = std::max(worst, abs_value(r));
    for (const auto& r : edge_residuals(t, s))
        worst = std::max(worst, abs_value(r));
    return worst;
}

/// Select n rows of J (m x n) forming a well-conditioned square subsystem:
/// greedy column-by-column pivoting on a scratch copy.
std::vector<std::size_t> select_rows(std::vector<std::vector<BigComplex>> J, std::size_t n) {
    std::size_t m = J.size();
    std::vector<bool> used(m, false);
    std::vector<std::size_t> chosen;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t best = m;
        Real best_mag(0);
        for (std::size_t r = 0; r < m; ++r) {
            if (used[r])
                continue;
            Real mag = abs_value(J[r][col]);
            if (best == m || mag > best_mag) {
                best = r;
                best_mag = mag;
            }
        }
        if (best == m || best_mag == 0)
            throw SingularSystemError("gluing system is rank-deficient at the initial point");
        used[best] = true;
        chosen.push_back(best);
        for (std::size_t r = 0; r < m; ++r) {
            if (used[r] || abs_value(J[r][col]) == 0)
                continue;
            BigComplex factor = J[r][col] / J[best][col];
            for (std::size_t c2 = col; c2 < n; ++c2)
                J[r][c2] = J[r][c2] - factor * J[best][c2];
        }
    }
    return chosen;
}

/// Solve the square complex system A x = b by Gaussian elimination.
std::vector<BigComplex> solve_linear(std::vector<std::vector<BigComplex>> A,
                                     std::vector<BigComplex> b) {
    std::size_t n = A.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        Real best = abs_value(A[k][k]);
        for (std::size_t r = k + 1; r < n; ++r) {
            Real mag = abs_value(A[r][k]);
            if (mag > best) {
                best = mag;
                pivot = r;
            }
        }
        if (best == 0)
            throw SingularSystemError("Jacobian numerically singular");
        std::swap(A[k], A[pivot]);
        std::swap(b[k], b[pivot]);
        for (std::size_t r = k + 1; r < n; ++r) {
            BigComplex f = A[r][k] / A[k][k];
            for (std::size_t c = k; c < n; ++c)
                A[r][c] = A[r][c] - f * A[k][c];
            b[r] = b[r] - f * b[k];
        }
    }
    std::vector<BigComplex> x(n, BigComplex(Real(0), Real(0)));
    for (std::size_t k = n; k-- > 0;) {
        BigComplex acc = b[k];
        for (std::size_t c = k + 1; c < n; ++c)
            acc = acc - A[k][c] * x[c];
        x[k] = acc / A[k][k];
    }
    return x;
}

} // namespace

SolveResult solve_shapes_newton(const Triangulation& t, const ShapeAssignment& initial,
                                const PrecisionContext& ctx) {
    t.validate();
    initial.check_nondegenerate();
    if (initial.shapes.size() != static_cast<std::size_t>(t.num_simplices))
        throw InvalidPathError("solve_shapes_newton: shape count mismatch");

    const std::size_t n = static_cast<std::size_t>(t.num_simplices);
    std::vector<const Path*> paths = all_paths(t);
    if (paths.size() < n)
        throw SingularSystemError("fewer gluing equations than unknowns");

    SolveResult result;
    result.shapes = initial;

    Real target = ctx.tolerance(5);

    auto attempt = [&](unsigned wdigits) -> bool {
        ScopedPrecision guard(wdigits);
        std::vector<BigComplex> z;
        z.reserve(n);
        for (const auto& s : result.shapes.shapes)
            z.emplace_back(rebase(s.re()), rebase(s.im()));

        // Convergence check first: already-solved input returns untouched.
        {
            ShapeAssignment cur{z};
            Real resid = max_multiplicative_residual(t, cur);
            if (resid <= target) {
                result.shapes = cur;
                result.final_residual = resid;
                return true;
            }
        }

        // Freeze integer branch offsets from the initial point.
        Real two_pi = 2 * const_pi();
        std::vector<long> offsets(paths.size());
        for (std::size_t p = 0; p < paths.size(); ++p) {
            Real k = log_sum(*paths[p], z).im() / two_pi;
            long kk;
            Real rounded;
            mpfr_round(rounded.backend().data(), k.backend().data());
            kk = static_cast<long>(mpfr_get_si(rounded.backend().data(), MPFR_RNDN));
            offsets[p] = kk;
        }

        auto jacobian = [&]() {
            std::vector<std::vector<BigComplex>> J(
                paths.size(), std::vector<BigComplex>(n, BigComplex(Real(0), Real(0))));
            for (std::size_t p = 0; p < paths.size(); ++p)
                for (const auto& step : paths[p]->steps) {
                    std::size_t i = static_cast<std::size_t>(step.simplex);
                    J[p][i] = J[p][i] + dlog_param(z[i], step.slot);
                }
            return J;
        };

        std::vector<std::size_t> rows = select_rows(jacobian(), n);

        const int max_iterations = 200;
        Real best_resid(-1);
        for (int iter = 0; iter < max_iterations; ++iter) {
            ShapeAssignment cur{z};
            Real resid = max_multiplicative_residual(t, cur);
            if (best_resid < 0 || resid < best_resid)
                best_resid = resid;
            if (resid <= target) {
                result.shapes = cur;
                result.final_residual = resid;
                return true;
            }

            auto J = jacobian();
            std::vector<std::vector<BigComplex>> A;
            std::vector<BigComplex> F;
            for (std::size_t r : rows) {
                A.push_back(J[r]);
                BigComplex f = log_sum(*paths[r], z);
                F.push_back(f - BigComplex(Real(0), two_pi * offsets[r]));
            }
            std::vector<BigComplex> delta = solve_linear(std::move(A), std::move(F));
            for (std::size_t i = 0; i < n; ++i) {
                BigComplex cand = z[i] - delta[i];
                if (cand.is_zero() || (cand.im() == 0 && cand.re() == 1))
                    throw SolveFailureError("Newton step hit a degenerate shape");
                z[i] = cand;
            }
            ++result.iterations;
        }
        ShapeAssignment cur{z};
        result.shapes = cur;
        result.final_residual = max_multiplicative_residual(t, cur);
        return false;
    };

    if (!attempt(ctx.working_digits())) {
        // Stalled: double the working precision and re-polish.
        if (!attempt(2 * ctx.working_digits() + 10))
            throw SolveFailureError("Newton failed to converge; final residual " +
                                    format_real(result.final_residual, 6));
    }
    result.geometric = result.shapes.is_geometric();
    {
        // Round the answer back into the context's precision.
        ScopedPrecision guard(ctx);
        for (auto& s : result.shapes.shapes)
            s = BigComplex(rebase(s.re()), rebase(s.im()));
        result.final_residual = rebase(result.final_residual);
    }
    return result;
}

Real triangulation_volume(const ShapeAssignment& s, const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    Real total(0);
    for (const auto& z : s.shapes)
        total += dilog_D(z, ctx);
    return total;
}

PtolemyAssignment PtolemyAssignment::single(const std::array<BigComplex, 6>& values, int sign) {
    PtolemyAssignment pa;
    pa.num_simplices = 1;
    pa.edge_class_of.push_back({0, 1, 2, 3, 4, 5});
    pa.class_values.assign(values.begin(), values.end());
    pa.obstruction_sign.push_back(sign);
    pa.validate();
    return pa;
}

void PtolemyAssignment::validate() const {
    if (num_simplices < 1 || edge_class_of.size() != static_cast<std::size_t>(num_simplices))
        throw InvalidPtolemyError("PtolemyAssignment: bad simplex count");
    for (const auto& m : edge_class_of)
        for (int cls : m)
            if (cls < 0 || cls >= static_cast<int>(class_values.size()))
                throw InvalidPtolemyError("PtolemyAssignment: edge class out of range");
    for (const auto& v : class_values)
        if (v.is_zero() || v.is_infinity())
            throw InvalidPtolemyError("PtolemyAssignment: class values must be finite and nonzero");
    for (int s : obstruction_sign)
        if (s != 1 && s != -1)
            throw InvalidPtolemyError("PtolemyAssignment: obstruction signs must be +-1");
    if (obstruction_sign.size() != static_cast<std::size_t>(num_simplices))
        throw InvalidPtolemyError("PtolemyAssignment: one obstruction sign per simplex");
}

BigComplex PtolemyAssignment::c(int simplex, int j, int k) const {
    if (simplex < 0 || simplex >= num_simplices || j < 0 || j > 3 || k < 0 || k > 3 || j == k)
        throw InvalidPtolemyError("PtolemyAssignment::c: bad indices");
    static const int pair_index[4][4] = {
        {-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    int idx = pair_index[j][k];
    const BigComplex& v =
        class_values[static_cast<std::size_t>(edge_class_of[static_cast<std::size_t>(simplex)]
                                                           [static_cast<std::size_t>(idx)])];
    return j < k ? v : -v;
}

std::vector<BigComplex> ptolemy_residuals(const PtolemyAssignment& pa) {
    pa.validate();
    std::vector<BigComplex> out;
    out.reserve(static_cast<std::size_t>(pa.num_simplices));
    for (int s = 0; s < pa.num_simplices; ++s)
        out.push_back(pa.c(s, 0, 3) * pa.c(s, 1, 2) + pa.c(s, 0, 1) * pa.c(s, 2, 3) -
                      pa.c(s, 0, 2) * pa.c(s, 1, 3));
    return out;
}

BigComplex cross_ratio_from_ptolemy(const PtolemyAssignment& pa, int simplex) {
    pa.validate();
    if (simplex < 0 || simplex >= pa.num_simplices)
        throw InvalidPtolemyError("cross_ratio_from_ptolemy: bad simplex index");
    BigComplex num = pa.c(simplex, 0, 3) * pa.c(simplex, 1, 2);
    BigComplex den = pa.c(simplex, 0, 2) * pa.c(simplex, 1, 3);
    if (den.is_zero())
        throw InvalidPtolemyError("cross_ratio_from_ptolemy: zero denominator");
    BigComplex q = num / den;
    return pa.obstruction_sign[static_cast<std::size_t>(simplex)] == 1 ? q : -q;
}

namespace {

Path path_from_json(const json& j) {
    Path p;
    for (const auto& step : j) {
        if (!step.is_array() || step.size() != 2)
            throw FormatError("path step must be [simplex, slot]");
        p.steps.push_back({step[0].get<int>(), slot_from_name(step[1].get<std::string>())});
    }
    return p;
}

json path_to_json(const Path& p) {
    json j = json::array();
    for (const auto& s : p.steps)
        j.push_back(json::array({s.simplex, slot_name(s.slot)}));
    return j;
}

} // namespace

Triangulation parse_triangulation_json(const std::string& text, const PrecisionContext&) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw FormatError(std::string("triangulation JSON: ") + e.what());
    }
    if (j.value("format", "") != "blochlat-triangulation" || j.value("version", 0) != 1)
        throw FormatError("triangulation JSON: expected blochlat-triangulation version 1");
    Triangulation t;
    t.name = j.value("name", "");
    t.num_simplices = j.at("num_simplices").get<int>();
    for (const auto& cls : j.at("edge_classes")) {
        std::vector<EdgeRef> refs;
        for (const auto& e : cls) {
            if (!e.is_array() || e.size() != 3)
                throw FormatError("edge reference must be [simplex, v0, v1]");
            refs.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>()});
        }
        t.edge_classes.push_back(std::move(refs));
    }
    for (const auto& p : j.at("edge_paths"))
        t.edge_paths.push_back(path_from_json(p));
    for (const auto& c : j.at("cusps"))
        t.cusps.push_back({path_from_json(c.at("meridian")), path_from_json(c.at("longitude"))});
    t.validate();
    return t;
}

Triangulation load_triangulation_json(const std::string& path, const PrecisionContext& ctx) {
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open triangulation '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_triangulation_json(ss.str(), ctx);
}

ShapeAssignment parse_shapes_json(const std::string& text, const PrecisionContext& ctx) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw FormatError(std::string("shapes JSON: ") + e.what());
    }
    ShapeAssignment s;
    for (const auto& v : j.at("shapes"))
        s.shapes.push_back(parse_complex(v.get<std::string>(), ctx));
    return s;
}

ShapeAssignment load_shapes_json(const std::string& path, const PrecisionContext& ctx) {
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open shapes file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_shapes_json(ss.str(), ctx);
}

std::string shapes_to_json(const ShapeAssignment& s, const PrecisionContext& ctx) {
    json j;
    j["shapes"] = json::array();
    for (const auto& z : s.shapes)
        j["shapes"].push_back(format_complex(z, ctx));
    return j.dump(2);
}

PtolemyAssignment parse_ptolemy_json(const std::string& text, const PrecisionContext& ctx) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw FormatError(std::string("ptolemy JSON: ") + e.what());
    }
    if (j.value("format", "") != "blochlat-ptolemy" || j.value("version", 0) != 1)
        throw FormatError("ptolemy JSON: expected blochlat-ptolemy version 1");
    PtolemyAssignment pa;
    pa.num_simplices = j.at("num_simplices").get<int>();
    for (const auto& row : j.at("edge_class_of")) {
        if (!row.is_array() || row.size() != 6)
            throw FormatError("edge_class_of rows must list 6 classes");
        std::array<int, 6> m{};
        for (int i = 0; i < 6; ++i)
            m[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(i)].get<int>();
        pa.edge_class_of.push_back(m);
    }
    for (const auto& v : j.at("class_values"))
        pa.class_values.push_back(parse_complex(v.get<std::string>(), ctx));
    for (const auto& s : j.at("obstruction_sign"))
        pa.obstruction_sign.push_back(s.get<int>());
    pa.validate();
    return pa;
}

PtolemyAssignment load_ptolemy_json(const std::string& path, const PrecisionContext& ctx) {
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open ptolemy file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_ptolemy_json(ss.str(), ctx);
}

} // namespace blochlat
