#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "blochlat/lattice.hpp"
#include "blochlat/polyroots.hpp"

namespace blochlat {

/// One census row: a manifold, its volume as a decimal string, and its
/// concrete invariant trace field as polynomial + selected root.
struct CensusRecord {
    std::string manifold_name;
    std::string volume_text;      // preserved verbatim
    Real volume;
    VolumeSample::Kind kind = VolumeSample::Kind::GEOMETRIC;
    IntPolynomial polynomial{std::vector<Integer>{Integer(0), Integer(1)}};
    BigComplex root_approx;
    int root_index = 0;           // as supplied; keys recompute it canonically
    bool low_precision = false;   // volume carries fewer than 50 digits
    bool residual_warning = false; // |p(root)| large relative to coefficients

    VolumeSample to_sample() const { return VolumeSample(manifold_name, volume, kind); }
};

struct RowError {
    std::size_t line;
    std::string message;
};

struct CensusParseResult {
    std::vector<CensusRecord> records;
    std::vector<RowError> errors;     // malformed rows, non-fatal
    std::vector<RowError> quarantined; // root/polynomial mismatches
};

/// Streaming parse of the volume-census schema:
///   name,kind,volume,poly_degree,poly_coeffs,root_re,root_im,root_index
/// with poly_coeffs space-separated ascending. Missing or wrong header
/// throws FormatError; bad rows are collected, not fatal.
CensusParseResult parse_census_csv(std::istream& in, const PrecisionContext& ctx);
CensusParseResult parse_census_csv_file(const std::string& path, const PrecisionContext& ctx);

extern const char* kCensusHeader;          // the exact header line
extern const char* kCompleteCensusHeader;  // "poly_coeffs,discriminant"

/// Concrete number field: canonical polynomial plus the index of the chosen
/// root in the deterministic (Re, Im) ordering of all roots. Conjugate roots
/// yield different keys.
struct FieldKey {
    IntPolynomial polynomial;
    int root_index;

    bool operator<(const FieldKey& o) const {
        if (!(polynomial == o.polynomial))
            return polynomial < o.polynomial;
        return root_index < o.root_index;
    }
    bool operator==(const FieldKey& o) const {
        return polynomial == o.polynomial && root_index == o.root_index;
    }

    std::string to_string() const; // "coeffs:root_index" selector form
};

/// Canonical key for a record: canonicalize the polynomial, sort its roots by
/// (Re, Im), locate the supplied approximate root. A root too far from every
/// computed root quarantines the record.
FieldKey field_key_of(const CensusRecord& rec, const PrecisionContext& ctx);

/// Group records by concrete field; deterministic group order via FieldKey
/// ordering. Quarantined records are reported, not grouped.
struct GroupedCensus {
    std::map<FieldKey, std::vector<VolumeSample>> groups;
    std::vector<RowError> quarantined;
};
GroupedCensus group_by_field(const std::vector<CensusRecord>& records,
                             const PrecisionContext& ctx);

/// Dehn-surgery coefficient grid: coprime (p, q) with p in [0, L(n)] and q in
/// [-L(n), L(n)], where L follows the published table (16, 12, 8, 6, 4, 3, 3
/// for 1..7 cusps, 2 beyond).
int surgery_bound(int cusp_count);
std::vector<std::pair<int, int>> enumerate_surgeries(int cusp_count);

/// A complete-census row: polynomial plus its exact discriminant.
struct CompleteFieldRow {
    IntPolynomial polynomial{std::vector<Integer>{Integer(0), Integer(1)}};
    Integer discriminant;
};
std::vector<CompleteFieldRow> parse_complete_census_csv(std::istream& in);
std::vector<CompleteFieldRow> parse_complete_census_csv_file(const std::string& path);

enum class StatsMode { CONCRETE, ABSTRACT };

struct FieldStatsRow {
    int degree = 0;
    long discriminant_bound = 0;  // cutoff on |D|^(1/n)
    int r2 = 0;
    long found = 0;
    long total = 0;
    bool percentage_defined = false;
    long percentage_tenths = 0;   // percentage truncated to one decimal, x10

    std::string percentage_text() const;
};

/// Observed-field percentage under the given restrictions. ABSTRACT counts
/// each polynomial once; CONCRETE counts (polynomial, root) pairs, so totals
/// multiply by r2. Percentages are truncated (not rounded) to one decimal,
/// matching the published tables.
FieldStatsRow field_statistics(const std::vector<FieldKey>& observed,
                               const std::vector<CompleteFieldRow>& complete_census,
                               StatsMode mode, int degree, long disc_bound, int r2,
                               const PrecisionContext& ctx);

} // namespace blochlat
