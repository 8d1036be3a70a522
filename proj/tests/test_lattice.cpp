#include <doctest.h>

#include "blochlat/lattice.hpp"
#include "blochlat/report.hpp"

#include <random>

using namespace blochlat;

namespace {

VolumeSample gs(const std::string& name, const char* vol) {
    return VolumeSample(name, Real(vol), VolumeSample::Kind::GEOMETRIC);
}

/// The worked five-volume example (values approximate e, 2e, 15pi-15e,
/// 2pi+2e, 5pi+2e).
std::vector<VolumeSample> worked_example(const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    return {gs("V", "2.7182818284590"), gs("W", "5.4365636569180"),
            gs("X", "6.3496623769612"), gs("Y", "11.7197489640976"),
            gs("Z", "21.1445269248670")};
}

/// Exhaustive reference search over subsets: minimal |det| and gcd fold.
std::pair<Rational, Rational> brute_force_best(const std::vector<RationalVecEntry>& entries,
                                               int dim) {
    std::vector<std::size_t> idx;
    Rational best_abs;
    bool have = false;
    FractionalGcdFold fold;
    std::function<void(std::size_t, std::vector<std::size_t>&)> rec =
        [&](std::size_t start, std::vector<std::size_t>& cur) {
            if (static_cast<int>(cur.size()) == dim) {
                std::vector<std::vector<Rational>> m;
                for (auto i : cur)
                    m.push_back(entries[i].coords);
                Rational d = rational_determinant(m);
                if (d != 0) {
                    fold.accumulate(d);
                    if (!have || abs(d) < best_abs) {
                        best_abs = abs(d);
                        have = true;
                    }
                }
                return;
            }
            for (std::size_t i = start; i < entries.size(); ++i) {
                cur.push_back(i);
                rec(i + 1, cur);
                cur.pop_back();
            }
        };
    std::vector<std::size_t> cur;
    rec(0, cur);
    REQUIRE(have);
    return {best_abs, fold.value()};
}

} // namespace

TEST_CASE("dedupe merges equal volumes and sorts") {
    auto ctx = PrecisionContext::standard(30);
    ScopedPrecision guard(ctx);
    auto out = dedupe_volumes({gs("b", "1.0"), gs("a", "1.0"), gs("x", "2.0"), gs("y", "0.5")},
                              ctx);
    REQUIRE(out.size() == 3);
    CHECK(out[0].manifold_name == "y");
    CHECK(out[1].manifold_name == "a");
    CHECK(out[2].manifold_name == "x");
}

TEST_CASE("worked example: rational vectors, basis, fit ratio") {
    auto lp = PrecisionContext::low_precision(19);
    auto samples = dedupe_volumes(worked_example(lp), lp);
    REQUIRE(samples.size() == 5); // five distinct volumes, nothing merged

    auto entries = build_rational_vectors(samples, 2, lp);
    // W discarded as an integer multiple of V alone: V, X, Y, Z remain
    REQUIRE(entries.size() == 4);
    CHECK(entries[0].sample.manifold_name == "V");
    CHECK(entries[0].coords == std::vector<Rational>{Rational(1), Rational(0)});
    CHECK(entries[1].sample.manifold_name == "X");
    CHECK(entries[1].coords == std::vector<Rational>{Rational(0), Rational(1)});
    CHECK(entries[2].sample.manifold_name == "Y");
    CHECK(entries[2].coords == std::vector<Rational>{Rational(4), Rational(2, 15)});
    CHECK(entries[3].sample.manifold_name == "Z");
    CHECK(entries[3].coords == std::vector<Rational>{Rational(7), Rational(1, 3)});

    LatticeFit fit = best_fit_basis(entries, 2);
    REQUIRE(fit.basis.size() == 2);
    CHECK(fit.basis[0].manifold_name == "V");
    CHECK(fit.basis[1].manifold_name == "Y");
    CHECK(abs(fit.best_det) == Rational(2, 15));
    CHECK(fit.det_gcd == Rational(1, 15));
    CHECK(fit.fit_ratio == Rational(2));
    CHECK(fit.fit_ratio_integral);
}

TEST_CASE("build_rational_vectors guards") {
    auto ctx = PrecisionContext::standard(60);
    ScopedPrecision guard(ctx);

    // single sample
    auto single = build_rational_vectors({gs("only", "3.5")}, 1, ctx);
    REQUIRE(single.size() == 1);
    CHECK(single[0].coords == std::vector<Rational>{Rational(1)});

    // three pairwise-independent reals with dimension 2: overflow
    std::vector<VolumeSample> indep = {
        gs("a", "1.1293847561023847561092384756109238475610923847561"),
        gs("b", "2.0192837465019283746501928374650192837465019283747"),
        gs("c", "3.7482910456748291045674829104567482910456748291046")};
    CHECK_THROWS_AS(build_rational_vectors(indep, 2, ctx), LatticeOverflowError);

    // unsorted input rejected
    CHECK_THROWS_AS(build_rational_vectors({gs("x", "2.0"), gs("y", "1.0")}, 1, ctx),
                    DomainError);
}

TEST_CASE("unit lattice and rank deficiency") {
    std::vector<RationalVecEntry> unit = {
        {gs("e1", "1.0"), {Rational(1), Rational(0)}},
        {gs("e2", "2.0"), {Rational(0), Rational(1)}},
    };
    LatticeFit fit = best_fit_basis(unit, 2);
    CHECK(fit.fit_ratio == Rational(1));
    CHECK(abs(fit.best_det) == Rational(1));

    std::vector<RationalVecEntry> flat = {
        {gs("a", "1.0"), {Rational(1), Rational(0)}},
        {gs("b", "2.0"), {Rational(2), Rational(0)}},
    };
    CHECK_THROWS_AS(best_fit_basis(flat, 2), RankDeficientError);
}

TEST_CASE("best_fit_basis agrees with brute force on synthetic data") {
    auto rng = std::mt19937_64(20240817);
    std::uniform_int_distribution<int> num(-6, 6), den(1, 4), dim_dist(1, 3), n_dist(3, 7);
    for (int trial = 0; trial < 25; ++trial) {
        int dim = dim_dist(rng);
        int n = std::max(n_dist(rng), dim + 1);
        std::vector<RationalVecEntry> entries;
        for (int i = 0; i < n; ++i) {
            std::vector<Rational> c;
            for (int j = 0; j < dim; ++j)
                c.emplace_back(num(rng), den(rng));
            entries.push_back({gs("s" + std::to_string(i), std::to_string(i + 1).c_str()), c});
        }
        Rational best, gcd;
        try {
            LatticeFit fit = best_fit_basis(entries, dim);
            std::tie(best, gcd) = brute_force_best(entries, dim);
            CHECK(abs(fit.best_det) == best);
            CHECK(fit.det_gcd == gcd);
            CHECK(fit.fit_ratio == best / gcd);
        } catch (const RankDeficientError&) {
            // brute force must agree that every determinant vanished
            bool all_zero = true;
            std::function<void(std::size_t, std::vector<std::size_t>&)> rec;
            std::vector<std::size_t> cur;
            rec = [&](std::size_t start, std::vector<std::size_t>& c2) {
                if (static_cast<int>(c2.size()) == dim) {
                    std::vector<std::vector<Rational>> m;
                    for (auto i : c2)
                        m.push_back(entries[i].coords);
                    if (rational_determinant(m) != 0)
                        all_zero = false;
                    return;
                }
                for (std::size_t i = start; i < entries.size(); ++i) {
                    c2.push_back(i);
                    rec(i + 1, c2);
                    c2.pop_back();
                }
            };
            rec(0, cur);
            CHECK(all_zero);
        }
    }
}

TEST_CASE("determinant index identity") {
    auto lp = PrecisionContext::low_precision(19);
    auto entries = build_rational_vectors(dedupe_volumes(worked_example(lp), lp), 2, lp);
    LatticeFit fit = best_fit_basis(entries, 2);
    // every subset determinant, divided by the gcd, is at least 1 in magnitude
    for (std::size_t i = 0; i < entries.size(); ++i)
        for (std::size_t j = i + 1; j < entries.size(); ++j) {
            Rational d = rational_determinant({entries[i].coords, entries[j].coords});
            if (d == 0)
                continue;
            CHECK(abs(d) / fit.det_gcd >= 1);
        }
    CHECK(abs(fit.best_det) / fit.det_gcd == fit.fit_ratio);
}

TEST_CASE("express_in_basis and lattice violations") {
    auto lp = PrecisionContext::low_precision(19);
    auto entries = build_rational_vectors(dedupe_volumes(worked_example(lp), lp), 2, lp);
    LatticeFit fit = best_fit_basis(entries, 2); // basis {V, Y}, ratio 2

    ScopedPrecision guard(lp);
    auto cw = express_in_basis(gs("W", "5.4365636569180"), fit, lp);
    CHECK(cw == std::vector<Rational>{Rational(2), Rational(0)});

    // X = -30 V + (15/2) Y: denominator 2 divides the fit ratio
    auto cx = express_in_basis(gs("X", "6.3496623769612"), fit, lp);
    CHECK(cx == std::vector<Rational>{Rational(-30), Rational(15, 2)});

    // a volume needing denominator 3 violates the ratio-2 lattice:
    // V/3 = (1/3, 0)
    CHECK_THROWS_AS(express_in_basis(gs("bad", "0.9060939428196"), fit, lp),
                    LatticeViolationError);

    // something unrelated is not in the lattice at all
    CHECK_THROWS_AS(
        express_in_basis(gs("rand", "1.7320508075688772935274463415058723669428"), fit,
                         PrecisionContext::standard(40)),
        NotInLatticeError);
}

TEST_CASE("fit_with_basis reports the realized fit ratio") {
    auto lp = PrecisionContext::low_precision(19);
    ScopedPrecision guard(lp);
    std::vector<VolumeSample> basis = {gs("g1", "2.7182818284590"), gs("g2", "3.1415926535898")};
    std::vector<VolumeSample> samples = {
        gs("g1", "2.7182818284590"),
        gs("g2", "3.1415926535898"),
        gs("half", "2.9299372410244"), // (g1 + g2)/2
    };
    FitReport report = fit_with_basis(samples, basis, lp);
    CHECK(report.fit.fit_ratio == Rational(2));
    CHECK(report.expressions[2].coords ==
          std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
}

TEST_CASE("weeks bound check") {
    auto lp = PrecisionContext::low_precision(12);
    ScopedPrecision guard(lp);

    // counterexample pair: generator must be at most half the smallest volume
    auto samples = dedupe_volumes({gs("m003(2,1)", "0.9427"), gs("10^2_94(2,3)(5,11)", "1.4140")},
                                  lp);
    auto entries = build_rational_vectors(samples, 1, lp);
    REQUIRE(entries.size() == 2);
    CHECK(entries[1].coords == std::vector<Rational>{Rational(3, 2)});
    LatticeFit fit = best_fit_basis(entries, 1);
    CHECK(fit.det_gcd == Rational(1, 2));
    WeeksDiagnostic diag = check_weeks_bound(fit, lp);
    CHECK(diag.violated);
    CHECK(diag.implied_generator < Real("0.4714"));
    CHECK(diag.witness_a == "m003(2,1)");
    CHECK(diag.witness_b == "10^2_94(2,3)(5,11)");

    // single volume: no violation
    auto e1 = build_rational_vectors({gs("w", "0.9427")}, 1, lp);
    WeeksDiagnostic d1 = check_weeks_bound(best_fit_basis(e1, 1), lp);
    CHECK_FALSE(d1.violated);

    // integer multiples: generator equals the smallest volume
    auto e2 = build_rational_vectors(
        dedupe_volumes({gs("a", "2.0299"), gs("b", "4.0598")}, lp), 1, lp);
    WeeksDiagnostic d2 = check_weeks_bound(best_fit_basis(e2, 1), lp);
    CHECK_FALSE(d2.violated);
    CHECK(abs(d2.implied_generator - Real("2.0299")) < Real("0.0001"));

    CHECK_THROWS_AS(check_weeks_bound(LatticeFit{2}, lp), UnsupportedError);
}

TEST_CASE("lattice grid") {
    auto ctx = PrecisionContext::standard(30);
    ScopedPrecision guard(ctx);
    std::vector<RationalVecEntry> unit = {
        {gs("e1", "1.0"), {Rational(1), Rational(0)}},
        {gs("e2", "1.0"), {Rational(0), Rational(1)}},
    };
    FitReport report;
    report.fit = best_fit_basis(unit, 2);
    std::vector<GridPoint> pts =
        lattice_grid(report, Real(0), Real(1), Real(0), Real(1), ctx);
    int lattice_points = 0;
    for (const auto& p : pts)
        if (p.kind == GridPoint::Kind::LATTICE)
            ++lattice_points;
    CHECK(lattice_points == 4);

    FitReport one_dim;
    one_dim.fit.dimension = 1;
    CHECK_THROWS_AS(lattice_grid(one_dim, Real(0), Real(1), Real(0), Real(1), ctx),
                    UnsupportedError);
}

TEST_CASE("fit report serialization round-trip") {
    auto lp = PrecisionContext::low_precision(19);
    auto samples = dedupe_volumes(worked_example(lp), lp);
    FitReport report = fit_field(samples, 2, lp);
    CHECK(report.fit.fit_ratio == Rational(2));
    std::string js = fit_report_to_json(report, lp, "test-field");
    FitReport back = fit_report_from_json(js, lp);
    CHECK(back.fit.fit_ratio == report.fit.fit_ratio);
    CHECK(back.fit.basis.size() == report.fit.basis.size());
    CHECK(back.expressions.size() == report.expressions.size());
    std::string csv = fit_report_lincomb_csv(report, lp);
    CHECK(csv.find("manifold,volume,kind,coefficients") == 0);
}
