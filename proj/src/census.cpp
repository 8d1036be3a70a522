#include "blochlat/census.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>

namespace blochlat {

const char* kCensusHeader = "name,kind,volume,poly_degree,poly_coeffs,root_re,root_im,root_index";
const char* kCompleteCensusHeader = "poly_coeffs,discriminant";

namespace {

/// Minimal CSV field splitter with double-quote support.
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c == '\r') {
            // tolerate CRLF
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<Integer> parse_coeff_list(const std::string& text) {
    std::istringstream is(text);
    std::vector<Integer> coeffs;
    std::string tok;
    while (is >> tok)
        coeffs.emplace_back(tok);
    return coeffs;
}

std::size_t significant_digits(const std::string& volume_text) {
    std::size_t count = 0;
    bool seen_nonzero = false;
    for (char c : volume_text) {
        if (c == 'e' || c == 'E')
            break;
        if (c >= '0' && c <= '9') {
            if (c != '0')
                seen_nonzero = true;
            if (seen_nonzero)
                ++count;
        }
    }
    return count;
}

} // namespace

CensusParseResult parse_census_csv(std::istream& in, const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    CensusParseResult result;
    std::string line;
    if (!std::getline(in, line))
        throw FormatError("census CSV: empty stream, header required");
    {
        std::string header = line;
        if (!header.empty() && header.back() == '\r')
            header.pop_back();
        if (header != kCensusHeader)
            throw FormatError("census CSV: bad header, expected '" + std::string(kCensusHeader) +
                              "'");
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r")
            continue;
        auto fields = split_csv(line);
        try {
            if (fields.size() != 8)
                throw FormatError("expected 8 columns, got " + std::to_string(fields.size()));
            CensusRecord rec;
            rec.manifold_name = fields[0];
            if (rec.manifold_name.empty())
                throw FormatError("empty manifold name");
            std::string kind = fields[1];
            std::transform(kind.begin(), kind.end(), kind.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            if (kind == "geometric")
                rec.kind = VolumeSample::Kind::GEOMETRIC;
            else if (kind == "exotic")
                rec.kind = VolumeSample::Kind::EXOTIC;
            else
                throw FormatError("kind must be geometric|exotic, got '" + fields[1] + "'");
            rec.volume_text = fields[2];
            rec.volume = parse_real(fields[2], ctx);
            if (!(rec.volume > 0))
                throw FormatError("volume must be positive");
            rec.low_precision = significant_digits(rec.volume_text) < 50;
            int degree = std::stoi(fields[3]);
            auto coeffs = parse_coeff_list(fields[4]);
            if (static_cast<int>(coeffs.size()) != degree + 1)
                throw FormatError("poly_coeffs count does not match poly_degree");
            rec.polynomial = IntPolynomial(coeffs);
            rec.root_approx = BigComplex(parse_real(fields[5], ctx), parse_real(fields[6], ctx));
            rec.root_index = std::stoi(fields[7]);

            // Ingest sanity: |p(root)| relative to coefficient scale. WARN only.
            Real resid = abs_value(rec.polynomial.evaluate(rec.root_approx));
            Real scale = Real(rec.polynomial.max_abs_coefficient());
            Real r = abs_value(rec.root_approx);
            Real growth = pow(std::max(Real(1), r), rec.polynomial.degree());
            rec.residual_warning = resid > scale * growth / 1000;
            result.records.push_back(std::move(rec));
        } catch (const std::exception& e) {
            result.errors.push_back({line_no, e.what()});
        }
    }
    return result;
}

CensusParseResult parse_census_csv_file(const std::string& path, const PrecisionContext& ctx) {
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open census CSV '" + path + "'");
    return parse_census_csv(in, ctx);
}

std::string FieldKey::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < polynomial.coefficients.size(); ++i) {
        if (i)
            s += ",";
        s += polynomial.coefficients[i].str();
    }
    return s + ":" + std::to_string(root_index);
}

FieldKey field_key_of(const CensusRecord& rec, const PrecisionContext& ctx) {
    IntPolynomial canon = rec.polynomial.canonical();
    RootSet rs = roots(canon, ctx);
    // roots() already sorts by (Re, Im); locate the nearest root.
    Real best_d(0);
    std::size_t best = rs.roots.size();
    for (std::size_t i = 0; i < rs.roots.size(); ++i) {
        Real d = distance(rs.roots[i], rec.root_approx);
        if (best == rs.roots.size() || d < best_d) {
            best = i;
            best_d = d;
        }
    }
    // The supplied approximation only needs to single out a root: it must be
    // far closer to its root than to any other.
    Real second(0);
    for (std::size_t i = 0; i < rs.roots.size(); ++i) {
        if (i == best)
            continue;
        Real d = distance(rs.roots[i], rec.root_approx);
        if (second == 0 || d < second)
            second = d;
    }
    if (rs.roots.size() > 1 && !(best_d * 2 < second))
        throw FormatError("root approximation for '" + rec.manifold_name +
                          "' does not single out a root of " + canon.to_string());
    return FieldKey{canon, static_cast<int>(best)};
}

GroupedCensus group_by_field(const std::vector<CensusRecord>& records,
                             const PrecisionContext& ctx) {
    GroupedCensus out;
    std::size_t idx = 0;
    for (const auto& rec : records) {
        ++idx;
        if (rec.residual_warning) {
            out.quarantined.push_back(
                {idx, "'" + rec.manifold_name + "': root/polynomial residual beyond WARN threshold"});
            continue;
        }
        try {
            FieldKey key = field_key_of(rec, ctx);
            out.groups[key].push_back(rec.to_sample());
        } catch (const Error& e) {
            out.quarantined.push_back({idx, e.what()});
        }
    }
    return out;
}

int surgery_bound(int cusp_count) {
    static const int table[] = {16, 12, 8, 6, 4, 3, 3};
    if (cusp_count < 1)
        throw DomainError("surgery_bound: cusp count must be >= 1");
    if (cusp_count <= 7)
        return table[cusp_count - 1];
    return 2;
}

std::vector<std::pair<int, int>> enumerate_surgeries(int cusp_count) {
    int L = surgery_bound(cusp_count);
    std::vector<std::pair<int, int>> out;
    for (int p = 0; p <= L; ++p)
        for (int q = -L; q <= L; ++q)
            if (std::gcd(p, std::abs(q)) == 1)
                out.emplace_back(p, q);
    return out;
}

std::vector<CompleteFieldRow> parse_complete_census_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw FormatError("complete census CSV: empty stream, header required");
    {
        std::string header = line;
        if (!header.empty() && header.back() == '\r')
            header.pop_back();
        if (header != kCompleteCensusHeader)
            throw FormatError("complete census CSV: bad header, expected '" +
                              std::string(kCompleteCensusHeader) + "'");
    }
    std::vector<CompleteFieldRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r")
            continue;
        auto fields = split_csv(line);
        if (fields.size() != 2)
            throw FormatError("complete census CSV line " + std::to_string(line_no) +
                              ": expected 2 columns");
        CompleteFieldRow row;
        row.polynomial = IntPolynomial(parse_coeff_list(fields[0])).canonical();
        row.discriminant = Integer(fields[1]);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<CompleteFieldRow> parse_complete_census_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open complete census CSV '" + path + "'");
    return parse_complete_census_csv(in);
}

std::string FieldStatsRow::percentage_text() const {
    if (!percentage_defined)
        return "-";
    return std::to_string(percentage_tenths / 10) + "." + std::to_string(percentage_tenths % 10);
}

FieldStatsRow field_statistics(const std::vector<FieldKey>& observed,
                               const std::vector<CompleteFieldRow>& complete_census,
                               StatsMode mode, int degree, long disc_bound, int r2,
                               const PrecisionContext& ctx) {
    FieldStatsRow row;
    row.degree = degree;
    row.discriminant_bound = disc_bound;
    row.r2 = r2;

    // |D|^(1/n) <= bound compared exactly as |D| <= bound^n.
    Integer bound_pow = 1;
    for (int i = 0; i < degree; ++i)
        bound_pow *= disc_bound;

    std::set<IntPolynomial> filtered;
    for (const auto& c : complete_census) {
        if (c.polynomial.degree() != degree)
            continue;
        if (abs(c.discriminant) > bound_pow)
            continue;
        if (filtered.count(c.polynomial))
            continue; // duplicates count once
        if (count_complex_places(c.polynomial, ctx) != r2)
            continue;
        filtered.insert(c.polynomial);
    }

    if (mode == StatsMode::ABSTRACT) {
        row.total = static_cast<long>(filtered.size());
        std::set<IntPolynomial> observed_polys;
        for (const auto& k : observed)
            if (filtered.count(k.polynomial))
                observed_polys.insert(k.polynomial);
        row.found = static_cast<long>(observed_polys.size());
    } else {
        // A concrete field is a polynomial plus a complex place: conjugate
        // roots name the same field, so root indices collapse to the index of
        // the conjugate pair. That keeps found <= total with totals of r2
        // fields per polynomial.
        row.total = static_cast<long>(filtered.size()) * r2;
        std::map<IntPolynomial, std::vector<BigComplex>> root_cache;
        std::set<std::pair<IntPolynomial, int>> observed_places;
        for (const auto& k : observed) {
            if (!filtered.count(k.polynomial))
                continue;
            auto it = root_cache.find(k.polynomial);
            if (it == root_cache.end())
                it = root_cache.emplace(k.polynomial, roots(k.polynomial, ctx).roots).first;
            const auto& rts = it->second;
            if (k.root_index < 0 || k.root_index >= static_cast<int>(rts.size()))
                continue;
            const BigComplex& r = rts[static_cast<std::size_t>(k.root_index)];
            if (r.im() == 0)
                continue; // real roots are not complex places
            // Conjugate partner: the nearest root to conj(r).
            BigComplex mirror = r.conj();
            int partner = k.root_index;
            Real best_d(0);
            for (std::size_t i = 0; i < rts.size(); ++i) {
                Real d = distance(rts[i], mirror);
                if (i == 0 || d < best_d) {
                    best_d = d;
                    partner = static_cast<int>(i);
                }
            }
            observed_places.insert({k.polynomial, std::min(k.root_index, partner)});
        }
        row.found = static_cast<long>(observed_places.size());
    }

    if (row.total > 0) {
        row.percentage_defined = true;
        // Truncated toward zero at one decimal, matching the published tables.
        row.percentage_tenths = (1000 * row.found) / row.total;
    }
    return row;
}

} // namespace blochlat
