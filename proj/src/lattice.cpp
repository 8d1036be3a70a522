#include "blochlat/lattice.hpp"

#include <algorithm>
#include <numeric>

namespace blochlat {

VolumeSample::VolumeSample(std::string name, Real vol, Kind k)
    : manifold_name(std::move(name)), volume(std::move(vol)), kind(k) {
    if (manifold_name.empty())
        throw DomainError("VolumeSample: empty name");
    if (!(volume > 0))
        throw DomainError("VolumeSample '" + manifold_name + "': volume must be positive");
}

std::vector<VolumeSample> dedupe_volumes(std::vector<VolumeSample> samples,
                                         const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    std::sort(samples.begin(), samples.end(), [](const VolumeSample& a, const VolumeSample& b) {
        if (a.volume != b.volume)
            return a.volume < b.volume;
        return a.manifold_name < b.manifold_name;
    });
    Real tol = ctx.tolerance(10);
    std::vector<VolumeSample> out;
    for (auto& s : samples) {
        if (!out.empty() && abs(s.volume - out.back().volume) <= tol) {
            if (s.manifold_name < out.back().manifold_name)
                out.back().manifold_name = s.manifold_name;
            continue;
        }
        out.push_back(std::move(s));
    }
    return out;
}

namespace {

std::vector<Real> volumes_of(const VolumeSample& head, const std::vector<VolumeSample>& basis,
                             const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    std::vector<Real> v;
    v.reserve(basis.size() + 1);
    v.push_back(rebase(head.volume));
    for (const auto& b : basis)
        v.push_back(rebase(b.volume));
    return v;
}

bool is_integer_multiple_of_single(const std::vector<Rational>& coords) {
    int nonzero = 0;
    bool integral = true;
    for (const auto& c : coords) {
        if (c != 0) {
            ++nonzero;
            if (denominator_of(c) != 1)
                integral = false;
        }
    }
    return nonzero == 1 && integral;
}

} // namespace

std::vector<RationalVecEntry> build_rational_vectors(const std::vector<VolumeSample>& sorted_samples,
                                                     int dimension, const PrecisionContext& ctx,
                                                     long coeff_bound) {
    if (dimension < 1)
        throw DomainError("build_rational_vectors: dimension must be >= 1");
    if (sorted_samples.empty())
        return {};
    for (std::size_t i = 1; i < sorted_samples.size(); ++i)
        if (sorted_samples[i].volume < sorted_samples[i - 1].volume)
            throw DomainError("build_rational_vectors: samples must be sorted ascending");

    std::vector<RationalVecEntry> entries;
    std::vector<VolumeSample> basis;

    auto unit = [&](std::size_t i) {
        std::vector<Rational> e(static_cast<std::size_t>(dimension), Rational(0));
        e[i] = 1;
        return e;
    };

    entries.push_back({sorted_samples[0], unit(0)});
    basis.push_back(sorted_samples[0]);

    for (std::size_t s = 1; s < sorted_samples.size(); ++s) {
        const VolumeSample& m = sorted_samples[s];
        RelationResult dep = lindep(volumes_of(m, basis, ctx), ctx, coeff_bound);
        if (!dep.is_relation()) {
            if (static_cast<int>(basis.size()) >= dimension)
                throw LatticeOverflowError(
                    "more than " + std::to_string(dimension) +
                    " linearly independent volumes (offending sample '" + m.manifold_name + "')");
            std::size_t idx = basis.size();
            basis.push_back(m);
            entries.push_back({m, unit(idx)});
            continue;
        }
        if (dep.coefficients.front() == 0)
            throw InsufficientPrecisionError(
                "lindep produced a relation among the established basis itself; "
                "precision too low to continue");
        std::vector<Rational> rel_coords = rational_coordinates(dep);
        // Spread the coordinates (over the current basis) into the full
        // dimension-wide vector.
        std::vector<Rational> coords(static_cast<std::size_t>(dimension), Rational(0));
        for (std::size_t j = 0; j < rel_coords.size(); ++j)
            coords[j] = rel_coords[j];
        if (is_integer_multiple_of_single(coords))
            continue; // plain multiples of one prior volume carry no new data
        entries.push_back({m, std::move(coords)});
    }
    return entries;
}

LatticeFit best_fit_basis(const std::vector<RationalVecEntry>& entries, int dimension) {
    if (dimension < 1)
        throw DomainError("best_fit_basis: dimension must be >= 1");
    const std::size_t n = entries.size();
    const std::size_t d = static_cast<std::size_t>(dimension);
    if (n < d)
        throw RankDeficientError("best_fit_basis: fewer entries than the lattice dimension");

    // Subset count guard: C(n, d) capped at 10^6.
    {
        double count = 1;
        for (std::size_t i = 0; i < d; ++i)
            count *= static_cast<double>(n - i) / static_cast<double>(i + 1);
        if (count > 1e6)
            throw TooManySubsetsError(
                "best_fit_basis: subset enumeration would exceed 10^6 candidates; "
                "pre-filter, e.g. to the 40 smallest volumes");
    }

    std::vector<std::size_t> idx(d);
    std::iota(idx.begin(), idx.end(), 0);

    FractionalGcdFold gcd_fold;
    bool have_best = false;
    Rational best_det;
    std::vector<std::size_t> best_idx;

    auto subset_better = [&](const Rational& det, const std::vector<std::size_t>& cand) {
        Rational a = abs(det), b = abs(best_det);
        if (a != b)
            return a < b;
        // Total volume, then name tuple.
        Real va(0), vb(0);
        for (std::size_t i : cand)
            va += entries[i].sample.volume;
        for (std::size_t i : best_idx)
            vb += entries[i].sample.volume;
        if (va != vb)
            return va < vb;
        std::vector<std::string> na, nb;
        for (std::size_t i : cand)
            na.push_back(entries[i].sample.manifold_name);
        for (std::size_t i : best_idx)
            nb.push_back(entries[i].sample.manifold_name);
        return na < nb;
    };

    while (true) {
        std::vector<std::vector<Rational>> m(d);
        for (std::size_t r = 0; r < d; ++r)
            m[r] = entries[idx[r]].coords;
        Rational det = rational_determinant(m);
        if (det != 0) {
            gcd_fold.accumulate(det);
            if (!have_best || subset_better(det, idx)) {
                have_best = true;
                best_det = det;
                best_idx = idx;
            }
        }
        // Next lexicographic subset.
        std::size_t i = d;
        while (i > 0) {
            --i;
            if (idx[i] != i + n - d) {
                ++idx[i];
                for (std::size_t j = i + 1; j < d; ++j)
                    idx[j] = idx[j - 1] + 1;
                break;
            }
            if (i == 0) {
                i = d + 1;
                break;
            }
        }
        if (i == d + 1 || d == 0)
            break;
    }

    if (!have_best)
        throw RankDeficientError("best_fit_basis: every subset determinant vanished");

    LatticeFit fit;
    fit.dimension = dimension;
    fit.all_entries = entries;
    for (std::size_t i : best_idx)
        fit.basis.push_back(entries[i].sample);
    fit.best_det = best_det;
    fit.det_gcd = gcd_fold.value();
    fit.fit_ratio = abs(best_det) / fit.det_gcd;
    fit.fit_ratio_integral = denominator_of(fit.fit_ratio) == 1;
    return fit;
}

std::vector<Rational> express_in_basis(const VolumeSample& target, const LatticeFit& fit,
                                       const PrecisionContext& ctx, long coeff_bound) {
    RelationResult dep = lindep(volumes_of(target, fit.basis, ctx), ctx, coeff_bound);
    if (!dep.is_relation())
        throw NotInLatticeError("'" + target.manifold_name +
                                "' has no relation to the basis within the coefficient bound");
    if (dep.coefficients.front() == 0)
        throw TargetNotInvolvedError("'" + target.manifold_name +
                                     "' is independent of the basis contribution");
    std::vector<Rational> coords = rational_coordinates(dep);
    // A denominator beyond the fit ratio means the lattice must grow.
    Rational f = fit.fit_ratio;
    for (const auto& c : coords) {
        Rational scaled = c * f;
        if (denominator_of(scaled) != 1)
            throw LatticeViolationError("'" + target.manifold_name + "' needs denominator " +
                                        denominator_of(c).str() +
                                        ", which does not divide the fit ratio " +
                                        format_rational(f));
    }
    return coords;
}

FitReport fit_with_basis(const std::vector<VolumeSample>& samples,
                         const std::vector<VolumeSample>& basis, const PrecisionContext& ctx,
                         long coeff_bound) {
    if (basis.empty())
        throw DomainError("fit_with_basis: empty basis");
    FitReport report;
    report.fit.dimension = static_cast<int>(basis.size());
    report.fit.basis = basis;

    Integer denom_lcm = 1;
    for (const auto& s : samples) {
        FitReport::Expression ex;
        ex.sample = s;
        RelationResult dep = lindep(volumes_of(s, basis, ctx), ctx, coeff_bound);
        if (!dep.is_relation() || dep.coefficients.front() == 0) {
            ex.lattice_violation = true;
            ex.note = "no rational expression over the basis";
        } else {
            ex.coords = rational_coordinates(dep);
            for (const auto& c : ex.coords)
                denom_lcm = lcm(denom_lcm, denominator_of(c));
        }
        report.expressions.push_back(std::move(ex));
    }

    // The realized fit ratio: smallest f making f * coords integral everywhere.
    report.fit.fit_ratio = Rational(denom_lcm);
    report.fit.fit_ratio_integral = true;
    report.fit.best_det = Rational(1);
    report.fit.det_gcd = Rational(1, denom_lcm);
    for (const auto& s : samples) {
        RationalVecEntry e;
        e.sample = s;
        report.fit.all_entries.push_back(std::move(e));
    }
    for (auto& ex : report.expressions) {
        for (std::size_t i = 0; i < report.fit.all_entries.size(); ++i)
            if (report.fit.all_entries[i].sample.manifold_name == ex.sample.manifold_name &&
                report.fit.all_entries[i].sample.volume == ex.sample.volume)
                report.fit.all_entries[i].coords = ex.coords;
    }
    return report;
}

FitReport fit_field(const std::vector<VolumeSample>& samples, int dimension,
                    const PrecisionContext& ctx, long coeff_bound) {
    std::vector<VolumeSample> clean = dedupe_volumes(samples, ctx);
    std::vector<RationalVecEntry> entries =
        build_rational_vectors(clean, dimension, ctx, coeff_bound);

    FitReport report;
    int independent = 0;
    for (const auto& e : entries) {
        int nz = 0;
        bool unit = false;
        for (std::size_t i = 0; i < e.coords.size(); ++i)
            if (e.coords[i] != 0) {
                ++nz;
                unit = (e.coords[i] == 1);
            }
        if (nz == 1 && unit)
            ++independent;
    }
    report.diagnostics.underdetermined = independent < dimension;
    if (static_cast<int>(entries.size()) < dimension) {
        // Not enough data to even pick a basis; report what we can.
        report.fit.dimension = dimension;
        report.fit.all_entries = entries;
        for (const auto& e : entries)
            report.expressions.push_back({e.sample, e.coords, false, ""});
        return report;
    }

    report.fit = best_fit_basis(entries, dimension);
    for (const auto& e : report.fit.all_entries) {
        FitReport::Expression ex;
        ex.sample = e.sample;
        try {
            ex.coords = express_in_basis(e.sample, report.fit, ctx, coeff_bound);
        } catch (const LatticeViolationError& err) {
            ex.lattice_violation = true;
            ex.note = err.what();
        } catch (const Error& err) {
            ex.lattice_violation = true;
            ex.note = err.what();
        }
        report.expressions.push_back(std::move(ex));
    }
    return report;
}

WeeksDiagnostic check_weeks_bound(const LatticeFit& fit, const PrecisionContext& ctx) {
    if (fit.dimension != 1)
        throw UnsupportedError("check_weeks_bound applies to one-complex-place fits only");
    ScopedPrecision guard(ctx);

    WeeksDiagnostic diag;
    diag.bound = Real("0.9427"); // printed minimal closed hyperbolic volume
    Real margin = Real(1) / 1000;

    Real basis_vol = rebase(fit.basis.front().volume);
    Rational scale = fit.det_gcd / abs(fit.best_det);
    diag.implied_generator = basis_vol * to_real(scale, ctx);

    if (diag.implied_generator < diag.bound - margin) {
        diag.violated = true;
        diag.witness_a = fit.basis.front().manifold_name;
        // The witness partner: an entry whose coordinate fails to be integral
        // over the basis (it forces the sub-unit generator).
        for (const auto& e : fit.all_entries) {
            if (denominator_of(e.coords.front()) != 1) {
                diag.witness_b = e.sample.manifold_name;
                break;
            }
        }
        diag.message = "implied generator " + format_real(diag.implied_generator, 6) +
                       " lies below the minimal closed volume " + format_real(diag.bound, 6) +
                       " (witnesses: " + diag.witness_a +
                       (diag.witness_b.empty() ? "" : ", " + diag.witness_b) + ")";
    } else {
        diag.message = "implied generator " + format_real(diag.implied_generator, 6) +
                       " is consistent with the minimal closed volume";
    }
    return diag;
}

std::vector<GridPoint> lattice_grid(const FitReport& report, const Real& x_min, const Real& x_max,
                                    const Real& y_min, const Real& y_max,
                                    const PrecisionContext& ctx) {
    if (report.fit.dimension != 2)
        throw UnsupportedError("lattice_grid requires a two-dimensional fit");
    ScopedPrecision guard(ctx);

    Real v1 = rebase(report.fit.basis[0].volume);
    Real v2 = rebase(report.fit.basis[1].volume);
    Rational f = report.fit.fit_ratio;
    Real step1 = v1 * to_real(Rational(1) / f, ctx);
    Real step2 = v2 * to_real(Rational(1) / f, ctx);

    std::vector<GridPoint> out;
    Integer a_lo = Integer(ceil(x_min / step1));
    Integer a_hi = Integer(floor(x_max / step1));
    Integer b_lo = Integer(ceil(y_min / step2));
    Integer b_hi = Integer(floor(y_max / step2));
    for (Integer a = a_lo; a <= a_hi; ++a)
        for (Integer b = b_lo; b <= b_hi; ++b)
            out.push_back({Real(a) * step1, Real(b) * step2, "", GridPoint::Kind::LATTICE});

    for (const auto& ex : report.expressions) {
        if (ex.coords.size() != 2)
            continue;
        GridPoint p;
        p.x = to_real(ex.coords[0], ctx) * v1;
        p.y = to_real(ex.coords[1], ctx) * v2;
        p.label = ex.sample.manifold_name;
        p.kind = ex.sample.kind == VolumeSample::Kind::GEOMETRIC ? GridPoint::Kind::GEOMETRIC
                                                                 : GridPoint::Kind::EXOTIC;
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace blochlat
