#include "blochlat/lindep.hpp"

#include <algorithm>
#include <set>

namespace blochlat {

namespace {

Integer round_to_integer(const Real& x) {
    Integer n;
    mpfr_get_z(n.backend().data(), x.backend().data(), MPFR_RNDN);
    return n;
}

using Row = std::vector<Integer>;

/// Plain LLL (delta = 0.99) with exact integer vectors; the Gram-Schmidt data
/// is recomputed from scratch at working precision each pass, which is cheap
/// at these dimensions and immune to drift.
void lll_reduce(std::vector<Row>& b) {
    const std::size_t m = b.size();
    if (m < 2)
        return;
    const std::size_t d = b[0].size();
    const Real delta = Real(99) / 100;

    std::vector<std::vector<Real>> mu(m, std::vector<Real>(m, Real(0)));
    std::vector<Real> norm2(m, Real(0)); // |b*_i|^2

    auto dot = [&](const Row& x, const Row& y) {
        Integer s = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
            s += x[i] * y[i];
        Real r(s);
        return r;
    };

    auto gso = [&]() {
        std::vector<std::vector<Real>> star(m, std::vector<Real>(d));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t c = 0; c < d; ++c)
                star[i][c] = Real(b[i][c]);
            for (std::size_t j = 0; j < i; ++j) {
                Real num(0);
                for (std::size_t c = 0; c < d; ++c)
                    num += Real(b[i][c]) * star[j][c];
                mu[i][j] = norm2[j] == 0 ? Real(0) : num / norm2[j];
                for (std::size_t c = 0; c < d; ++c)
                    star[i][c] -= mu[i][j] * star[j][c];
            }
            Real n2(0);
            for (std::size_t c = 0; c < d; ++c)
                n2 += star[i][c] * star[i][c];
            norm2[i] = n2;
        }
        (void)dot;
    };

    gso();
    std::size_t k = 1;
    long iterations = 0;
    const long cap = 500000;
    while (k < m) {
        if (++iterations > cap)
            break; // LLL provably terminates; this is a safety valve only
        for (std::size_t j = k; j-- > 0;) {
            Integer q = round_to_integer(mu[k][j]);
            if (q != 0) {
                for (std::size_t c = 0; c < d; ++c)
                    b[k][c] -= q * b[j][c];
            }
        }
        gso();
        if (norm2[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norm2[k - 1]) {
            ++k;
        } else {
            std::swap(b[k], b[k - 1]);
            gso();
            k = std::max<std::size_t>(1, k - 1);
        }
    }
}

struct Candidate {
    std::vector<Integer> coeffs;
    Integer max_abs;
    Integer sum_abs;
    Real residual;

    bool better_than(const Candidate& o) const {
        if (max_abs != o.max_abs)
            return max_abs < o.max_abs;
        if (sum_abs != o.sum_abs)
            return sum_abs < o.sum_abs;
        return coeffs < o.coeffs;
    }
};

void normalize_sign_and_content(std::vector<Integer>& c) {
    Integer content = 0;
    for (const auto& x : c)
        content = gcd(content, x);
    if (content > 1)
        for (auto& x : c)
            x /= content;
    for (const auto& x : c) {
        if (x == 0)
            continue;
        if (x < 0)
            for (auto& y : c)
                y = -y;
        break;
    }
}

} // namespace

RelationResult lindep(const std::vector<Real>& values, const PrecisionContext& ctx,
                      long coeff_bound) {
    ScopedPrecision guard(ctx);
    if (values.empty())
        throw DomainError("lindep: empty input");
    if (ctx.digits < 8)
        throw InsufficientPrecisionError(
            "lindep: acceptance tolerance 10^(-digits/4) cannot be certified below 8 digits");
    if (coeff_bound <= 0)
        coeff_bound = ctx.default_coeff_bound();

    const std::size_t n = values.size();
    Real floor_mag = pow10(-static_cast<long>(ctx.digits) / 2);
    Real scale(0);
    for (std::size_t i = 0; i < n; ++i) {
        Real a = abs(values[i]);
        if (a == 0) {
            // Exact zeros short-circuit to the trivial unit relation.
            RelationResult r;
            r.status = RelationResult::Status::RELATION;
            r.coefficients.assign(n, Integer(0));
            r.coefficients[i] = 1;
            r.residual = Real(0);
            return r;
        }
        if (a <= floor_mag)
            throw DomainError("lindep: value " + std::to_string(i) +
                              " is below the 10^(-digits/2) magnitude floor");
        scale = std::max(scale, a);
    }
    if (n < 2)
        return RelationResult{}; // single nonzero value: INDEPENDENT

    std::vector<Real> y(n);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = rebase(values[i]) / scale;

    Real tol = pow10(-static_cast<long>(ctx.digits) / 4);
    auto true_residual = [&](const std::vector<Integer>& c) {
        Real s(0);
        for (std::size_t i = 0; i < n; ++i)
            s += Real(c[i]) * y[i];
        return abs(s);
    };

    // Scale ladder: full precision first, then coarser embeddings. In
    // low-precision contexts an extra rung near the inverse acceptance
    // tolerance lets relations that only hold to the data's own precision
    // surface at all; at 20+ digits that rung would instead dredge up
    // coincidental near-relations on independent inputs, so it stays off.
    // Candidates from every rung face the same residual and coefficient
    // gates, and exact relations outrank approximate ones.
    std::set<long, std::greater<long>> exponents;
    long digits = static_cast<long>(ctx.digits);
    std::vector<long> rungs = {digits - 2, (3 * digits) / 4, digits / 2};
    if (ctx.is_low_precision())
        rungs.push_back(digits / 4 + 1);
    for (long e : rungs)
        if (e >= 4)
            exponents.insert(e);

    std::optional<Candidate> best;
    for (long e : exponents) {
        Real N = pow10(e);
        std::vector<Row> basis(n, Row(n + 1, Integer(0)));
        for (std::size_t i = 0; i < n; ++i) {
            basis[i][i] = 1;
            basis[i][n] = round_to_integer(N * y[i]);
        }
        lll_reduce(basis);
        for (const auto& row : basis) {
            std::vector<Integer> c(row.begin(), row.begin() + static_cast<long>(n));
            bool all_zero = std::all_of(c.begin(), c.end(), [](const Integer& x) { return x == 0; });
            if (all_zero)
                continue;
            normalize_sign_and_content(c);
            Integer max_abs = 0, sum_abs = 0;
            for (const auto& x : c) {
                max_abs = std::max(max_abs, abs(x));
                sum_abs += abs(x);
            }
            if (max_abs > coeff_bound)
                continue;
            Real res = true_residual(c);
            if (res > tol)
                continue;
            Candidate cand{std::move(c), max_abs, sum_abs, res};
            if (!best || cand.better_than(*best))
                best = std::move(cand);
        }
    }

    if (!best)
        return RelationResult{};
    RelationResult r;
    r.status = RelationResult::Status::RELATION;
    r.coefficients = best->coeffs;
    r.residual = best->residual;
    return r;
}

std::vector<Rational> rational_coordinates(const RelationResult& dep) {
    if (!dep.is_relation())
        throw DomainError("rational_coordinates: input is not a relation");
    if (dep.coefficients.size() < 2)
        throw DomainError("rational_coordinates: relation too short");
    const Integer& lead = dep.coefficients.front();
    if (lead == 0)
        throw TargetNotInvolvedError("rational_coordinates: dep_1 = 0, target not involved");
    std::vector<Rational> coords;
    coords.reserve(dep.coefficients.size() - 1);
    for (std::size_t j = 1; j < dep.coefficients.size(); ++j)
        coords.emplace_back(Rational(-dep.coefficients[j], lead));
    return coords;
}

} // namespace blochlat
