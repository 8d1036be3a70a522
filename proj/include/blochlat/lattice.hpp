#pragma once

#include <string>
#include <vector>

#include "blochlat/lindep.hpp"
#include "blochlat/rational.hpp"

namespace blochlat {

/// One manifold volume, geometric or exotic.
struct VolumeSample {
    std::string manifold_name;
    Real volume;
    enum class Kind { GEOMETRIC, EXOTIC } kind = Kind::GEOMETRIC;

    VolumeSample() = default;
    VolumeSample(std::string name, Real vol, Kind k = Kind::GEOMETRIC);
};

/// A sample together with its rational coordinates over the running basis.
struct RationalVecEntry {
    VolumeSample sample;
    std::vector<Rational> coords;
};

/// Result of the best-fit lattice search.
struct LatticeFit {
    int dimension = 0;
    std::vector<VolumeSample> basis;        // the chosen subset, volume order
    std::vector<RationalVecEntry> all_entries;
    Rational best_det;                      // signed determinant of the basis subset
    Rational det_gcd;                       // fractional gcd over all nonzero dets
    Rational fit_ratio;                     // |best_det| / det_gcd
    bool fit_ratio_integral = true;         // reported, never assumed
};

struct FitDiagnostics {
    bool underdetermined = false;           // independent volumes < dimension
};

/// LatticeFit plus per-sample expressions over the chosen basis.
struct FitReport {
    LatticeFit fit;
    FitDiagnostics diagnostics;
    // expressions[i] covers fit.all_entries order; entries that failed to
    // express carry an empty coordinate list and a note.
    struct Expression {
        VolumeSample sample;
        std::vector<Rational> coords;
        bool lattice_violation = false;     // denominator exceeded the fit ratio
        std::string note;
    };
    std::vector<Expression> expressions;
};

/// Merge samples whose volumes agree within 10^(10-digits), keeping the
/// lexicographically-least name, and sort ascending by volume.
std::vector<VolumeSample> dedupe_volumes(std::vector<VolumeSample> samples,
                                         const PrecisionContext& ctx);

/// First loop of the best-fit matching algorithm: walk the sorted samples,
/// assign unit vectors to newly independent volumes, attach rational
/// coordinate vectors to dependent ones, and drop integer multiples of a
/// single prior volume. More than `dimension` independent volumes throws
/// LatticeOverflowError; InsufficientPrecisionError propagates from lindep.
std::vector<RationalVecEntry> build_rational_vectors(const std::vector<VolumeSample>& sorted_samples,
                                                     int dimension, const PrecisionContext& ctx,
                                                     long coeff_bound = 0);

/// Second loop: enumerate dimension-sized subsets, fold the fractional gcd
/// over nonzero determinants, select the minimum-|det| subset (ties: smaller
/// total volume, then names) and report fit_ratio = |best_det| / gcd. All
/// dets zero throws RankDeficientError; more than 10^6 subsets throws
/// TooManySubsetsError.
LatticeFit best_fit_basis(const std::vector<RationalVecEntry>& entries, int dimension);

/// Coordinates of target over fit.basis via lindep; every coordinate
/// denominator must divide the fit ratio, else LatticeViolationError. No
/// relation at all throws NotInLatticeError.
std::vector<Rational> express_in_basis(const VolumeSample& target, const LatticeFit& fit,
                                       const PrecisionContext& ctx, long coeff_bound = 0);

/// Express every sample over an explicitly chosen basis and report the fit
/// ratio realized by the data: the least common multiple of all coordinate
/// denominators (the smallest f with f * coords integral for every sample).
FitReport fit_with_basis(const std::vector<VolumeSample>& samples,
                         const std::vector<VolumeSample>& basis, const PrecisionContext& ctx,
                         long coeff_bound = 0);

/// Full pipeline convenience: dedupe, build vectors, best-fit, express all.
FitReport fit_field(const std::vector<VolumeSample>& samples, int dimension,
                    const PrecisionContext& ctx, long coeff_bound = 0);

/// Diagnostic emitted by the minimal-volume bound check.
struct WeeksDiagnostic {
    bool violated = false;
    Real implied_generator;
    Real bound;                              // the printed minimal closed volume
    std::string witness_a, witness_b;        // pair demonstrating the violation
    std::string message;
};

/// For one-complex-place fits: the implied generator volume is the smallest
/// positive lattice projection, vol(basis) * det_gcd / |best_det|. Below the
/// minimal closed hyperbolic volume 0.9427 (margin 10^-3) this flags a
/// strengthened-conjecture violation; it never throws on violation, only on
/// dimension != 1.
WeeksDiagnostic check_weeks_bound(const LatticeFit& fit, const PrecisionContext& ctx);

/// Plot-ready lattice grid for two-dimensional fits: lattice points
/// (a*vol(g1), b*vol(g2)) with a, b multiples of 1/fit_ratio inside the
/// ranges, plus every observed sample at its coordinate position.
struct GridPoint {
    Real x, y;
    std::string label;                       // empty for bare lattice points
    enum class Kind { LATTICE, GEOMETRIC, EXOTIC } kind = Kind::LATTICE;
};
std::vector<GridPoint> lattice_grid(const FitReport& report, const Real& x_min, const Real& x_max,
                                    const Real& y_min, const Real& y_max,
                                    const PrecisionContext& ctx);

} // namespace blochlat
