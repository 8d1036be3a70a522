#include <doctest.h>

#include "blochlat/dilog.hpp"
#include "blochlat/triangulation.hpp"

using namespace blochlat;

namespace {

std::string data_path(const std::string& name) {
    return std::string(BLOCHLAT_TEST_DATA) + "/" + name;
}

BigComplex sixth_root(const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    Real pi = const_pi();
    return BigComplex(cos(pi / 3), sin(pi / 3));
}

} // namespace

TEST_CASE("cross ratio") {
    auto ctx = PrecisionContext::standard(40);
    ScopedPrecision guard(ctx);
    BigComplex inf = BigComplex::infinity();
    BigComplex z(Real(2), Real(3));
    CHECK(cross_ratio(inf, BigComplex(Real(0), Real(0)), BigComplex(Real(1), Real(0)), z) == z);
    CHECK(cross_ratio(BigComplex(Real(0), Real(0)), BigComplex(Real(1), Real(0)),
                      BigComplex(Real(2), Real(0)), BigComplex(Real(3), Real(0))) ==
          BigComplex(Real(4) / 3, Real(0)));
    CHECK_THROWS_AS(cross_ratio(z, z, inf, BigComplex(Real(1), Real(0))),
                    DegenerateSimplexError);

    // Moebius invariance under xi -> (2 xi + 1)/(xi + 3)
    auto moebius = [&](const BigComplex& w) {
        if (w.is_infinity())
            return BigComplex(Real(2), Real(0));
        BigComplex two(Real(2), Real(0)), one(Real(1), Real(0)), three(Real(3), Real(0));
        BigComplex den = w + three;
        if (den.is_zero())
            return BigComplex::infinity();
        return (two * w + one) / den;
    };
    BigComplex a(Real(0), Real(1)), b(Real(2), Real(-1)), c(Real(-3), Real(0)),
        d(Real(1), Real(2));
    BigComplex before = cross_ratio(a, b, c, d);
    BigComplex after = cross_ratio(moebius(a), moebius(b), moebius(c), moebius(d));
    CHECK(abs_value(before - after) < ctx.tolerance(8));
    // with the point at infinity among the inputs
    BigComplex before2 = cross_ratio(BigComplex::infinity(), a, b, d);
    BigComplex after2 = cross_ratio(moebius(BigComplex::infinity()), moebius(a), moebius(b),
                                    moebius(d));
    CHECK(abs_value(before2 - after2) < ctx.tolerance(8));
}

TEST_CASE("shape parameters") {
    auto ctx = PrecisionContext::standard(40);
    ScopedPrecision guard(ctx);
    BigComplex i_unit(Real(0), Real(1));
    auto triple = shape_parameters(i_unit);
    CHECK(triple[0] == i_unit);
    CHECK(abs_value(triple[1] - BigComplex(Real(1), Real(1))) < ctx.tolerance(10));
    CHECK(abs_value(triple[2] - BigComplex(Real(1) / 2, Real(1) / 2)) < ctx.tolerance(10));

    // product is -1 identically
    BigComplex z(Real(2), Real(1));
    auto t2 = shape_parameters(z);
    CHECK(abs_value(t2[0] * t2[1] * t2[2] + BigComplex(Real(1), Real(0))) < ctx.tolerance(8));

    // at the sixth root of unity all three parameters coincide
    BigComplex u = sixth_root(ctx);
    auto t3 = shape_parameters(u);
    CHECK(abs_value(t3[1] - u) < ctx.tolerance(8));
    CHECK(abs_value(t3[2] - u) < ctx.tolerance(8));

    CHECK_THROWS_AS(shape_parameters(BigComplex(Real(1), Real(0))), DegenerateSimplexError);
}

TEST_CASE("path monodromy") {
    auto ctx = PrecisionContext::standard(40);
    ScopedPrecision guard(ctx);
    Triangulation t;
    t.name = "toy";
    t.num_simplices = 1;
    t.edge_classes = {{{0, 0, 1}, {0, 2, 3}}, {{0, 0, 2}, {0, 1, 3}}, {{0, 0, 3}, {0, 1, 2}}};
    t.edge_paths = {Path{{{0, AngleSlot::Z}, {0, AngleSlot::Z}}},
                    Path{{{0, AngleSlot::ZPRIMEPRIME}, {0, AngleSlot::ZPRIMEPRIME}}},
                    Path{{{0, AngleSlot::ZPRIME}, {0, AngleSlot::ZPRIME}}}};

    ShapeAssignment s{{BigComplex(Real(3), Real(4))}};
    Path single{{{0, AngleSlot::Z}}};
    CHECK(path_monodromy(t, single, s) == BigComplex(Real(3), Real(4)));

    Path all3{{{0, AngleSlot::Z}, {0, AngleSlot::ZPRIME}, {0, AngleSlot::ZPRIMEPRIME}}};
    CHECK(abs_value(path_monodromy(t, all3, s) + BigComplex(Real(1), Real(0))) <
          ctx.tolerance(8));

    // concatenation multiplies
    Path cat{{{0, AngleSlot::Z}, {0, AngleSlot::Z}}};
    CHECK(abs_value(path_monodromy(t, cat, s) -
                    path_monodromy(t, single, s) * path_monodromy(t, single, s)) <
          ctx.tolerance(8));

    Path bad{{{3, AngleSlot::Z}}};
    CHECK_THROWS_AS(path_monodromy(t, bad, s), InvalidPathError);
}

TEST_CASE("m004 fixture residuals") {
    auto ctx = PrecisionContext::standard(60);
    Triangulation t = load_triangulation_json(data_path("m004.json"), ctx);
    CHECK(t.num_simplices == 2);
    CHECK(t.edge_classes.size() == 2);
    CHECK(t.cusps.size() == 1);

    ScopedPrecision guard(ctx);
    BigComplex u = sixth_root(ctx);
    ShapeAssignment solved{{u, u}};
    for (const auto& r : edge_residuals(t, solved))
        CHECK(abs_value(r) < ctx.tolerance(8));
    for (const auto& r : cusp_residuals(t, solved))
        CHECK(abs_value(r) < ctx.tolerance(8));
    CHECK(edge_residuals(t, solved).size() == 2);
    CHECK(cusp_residuals(t, solved).size() == 2);

    // arbitrary shapes fail the gluing equations
    ShapeAssignment wrong{{BigComplex(Real(0), Real(2)), BigComplex(Real(0), Real(2))}};
    Real worst(0);
    for (const auto& r : edge_residuals(t, wrong))
        worst = std::max(worst, abs_value(r));
    for (const auto& r : cusp_residuals(t, wrong))
        worst = std::max(worst, abs_value(r));
    CHECK(worst > Real(1) / 10);

    // closed data: no cusps, empty cusp residual list
    Triangulation closed = t;
    closed.cusps.clear();
    CHECK(cusp_residuals(closed, solved).empty());
}

TEST_CASE("m004 Newton solve") {
    auto ctx = PrecisionContext::standard(60);
    Triangulation t = load_triangulation_json(data_path("m004.json"), ctx);
    ScopedPrecision guard(ctx);

    ShapeAssignment seed{
        {BigComplex(Real(1) / 2, Real("0.8")), BigComplex(Real(1) / 2, Real("0.8"))}};
    SolveResult result = solve_shapes_newton(t, seed, ctx);
    CHECK(result.geometric);
    CHECK(result.final_residual <= ctx.tolerance(5));
    BigComplex u = sixth_root(ctx);
    for (const auto& z : result.shapes.shapes)
        CHECK(abs_value(z - u) < ctx.tolerance(8));

    // already solved: unchanged, zero iterations
    SolveResult again = solve_shapes_newton(t, result.shapes, ctx);
    CHECK(again.iterations == 0);
    CHECK(again.shapes.shapes[0] == result.shapes.shapes[0]);

    // conjugate seed converges to the non-geometric mirror
    ShapeAssignment conj_seed{
        {BigComplex(Real(1) / 2, Real("-0.8")), BigComplex(Real(1) / 2, Real("-0.8"))}};
    SolveResult mirror = solve_shapes_newton(t, conj_seed, ctx);
    CHECK_FALSE(mirror.geometric);
    for (const auto& z : mirror.shapes.shapes)
        CHECK(abs_value(z - u.conj()) < ctx.tolerance(8));

    // volume: twice the maximal tetrahedron volume
    Real vol = triangulation_volume(result.shapes, ctx);
    Real expected =
        Real("2.029883212819307250042405108549040571883378615060599584034978");
    CHECK(abs(vol - expected) < ctx.tolerance(8));
    Real mirror_vol = triangulation_volume(mirror.shapes, ctx);
    CHECK(abs(vol + mirror_vol) < ctx.tolerance(8));
}

TEST_CASE("volume additivity over disjoint unions") {
    auto ctx = PrecisionContext::standard(40);
    ScopedPrecision guard(ctx);
    BigComplex u = sixth_root(ctx);
    BigComplex w(Real(1) / 3, Real(2));
    ShapeAssignment a{{u}};
    ShapeAssignment b{{w}};
    ShapeAssignment both{{u, w}};
    CHECK(abs(triangulation_volume(both, ctx) -
              (triangulation_volume(a, ctx) + triangulation_volume(b, ctx))) <
          ctx.tolerance(10));
}

TEST_CASE("ptolemy assignments") {
    auto ctx = PrecisionContext::standard(40);
    ScopedPrecision guard(ctx);
    auto one = [](long re) { return BigComplex(Real(re), Real(0)); };

    // (c01, c02, c03, c12, c13, c23) = (1,1,1,1,2,1): relation holds
    PtolemyAssignment good = PtolemyAssignment::single(
        {one(1), one(1), one(1), one(1), one(2), one(1)}, 1);
    auto res = ptolemy_residuals(good);
    REQUIRE(res.size() == 1);
    CHECK(res[0].is_zero());
    CHECK(cross_ratio_from_ptolemy(good, 0) == BigComplex(Real(1) / 2, Real(0)));

    PtolemyAssignment flipped = good;
    flipped.obstruction_sign[0] = -1;
    CHECK(cross_ratio_from_ptolemy(flipped, 0) == BigComplex(Real(-1) / 2, Real(0)));

    // all ones: the relation fails by exactly 1
    PtolemyAssignment bad = PtolemyAssignment::single(
        {one(1), one(1), one(1), one(1), one(1), one(1)}, 1);
    CHECK(ptolemy_residuals(bad)[0] == BigComplex(Real(1), Real(0)));

    // antisymmetry at query time
    CHECK(good.c(0, 3, 1) == -good.c(0, 1, 3));
    CHECK(good.c(0, 1, 3) == one(2));

    // zero values rejected
    PtolemyAssignment zero = good;
    zero.class_values[0] = BigComplex(Real(0), Real(0));
    CHECK_THROWS_AS(ptolemy_residuals(zero), InvalidPtolemyError);
}

TEST_CASE("triangulation JSON validation") {
    auto ctx = PrecisionContext::standard(30);
    CHECK_THROWS_AS(parse_triangulation_json("{}", ctx), FormatError);
    CHECK_THROWS_AS(parse_triangulation_json("not json", ctx), FormatError);

    Triangulation t = load_triangulation_json(data_path("m004.json"), ctx);
    Triangulation broken = t;
    broken.edge_classes[0].pop_back(); // no longer covers all edges
    CHECK_THROWS_AS(broken.validate(), FormatError);

    ShapeAssignment s = parse_shapes_json("{\"shapes\": [\"0.5+0.8i\", \"0.5+0.8i\"]}", ctx);
    CHECK(s.shapes.size() == 2);
    std::string round = shapes_to_json(s, ctx);
    ShapeAssignment back = parse_shapes_json(round, ctx);
    CHECK(back.shapes[0] == s.shapes[0]);
}
