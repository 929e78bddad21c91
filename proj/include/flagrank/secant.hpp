#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flagrank/config.hpp"
#include "flagrank/embedding.hpp"
#include "flagrank/linalg.hpp"
#include "flagrank/rng.hpp"
#include "flagrank/spans.hpp"

namespace flagrank {

// ------------------------------------------------------------------------
// Secant dimensions by Terracini's lemma: the affine cone over the span of
// h general tangent spaces has the dimension of the h-secant cone, and a
// matrix rank over a large prime field bounds it from below — sharply, for
// all but finitely many primes.  Two independent primes must agree before a
// value is reported as certified.
// ------------------------------------------------------------------------

struct SecantResult {
    std::uint64_t h = 0;
    std::uint64_t rank_affine = 0;     // computed dimension of the secant cone
    std::uint64_t expected_affine = 0; // min(h*(dim+1), span)
    std::uint64_t span_affine = 0;
    std::uint64_t prime = 0;           // primary modulus
    std::uint64_t prime2 = 0;          // confirming modulus
    std::uint64_t seed = 0;
    int trials = 0;
    bool certified = false;            // two distinct primes reached the same rank
    bool sampled = true;               // false: forced by a smaller h already filling

    std::uint64_t defect() const { return expected_affine - rank_affine; }
    bool fills() const { return rank_affine == span_affine; }
    long long rank_projective() const { return static_cast<long long>(rank_affine) - 1; }
    long long expected_projective() const { return static_cast<long long>(expected_affine) - 1; }
};

// Desk-scale guardrails; `force` lifts the policy caps but never the
// absolute memory bound.
inline void check_caps(const FlagShape& s, std::uint64_t h, const EngineOptions& o) {
    BigInt ambient = ambient_affine(s);
    BigInt essential = BigInt(h) * (flag_dim(s) + 1);
    if (!o.force) {
        if (ambient > BigInt(o.max_ambient))
            throw CapError("ambient dimension " + ambient.str() + " exceeds the cap " +
                           std::to_string(o.max_ambient) + " (pass force to override)");
        if (essential > BigInt(o.max_rows))
            throw CapError("Terracini system needs " + essential.str() +
                           " rows, above the cap " + std::to_string(o.max_rows) +
                           " (pass force to override)");
    }
    BigInt actual = BigInt(h) * (full_entry_count(s) + 1);
    if (actual * ambient > BigInt(50000000))
        throw CapError("Terracini matrix with " + actual.str() + " x " + ambient.str() +
                       " entries is beyond this tool's scale");
}

// One Terracini sample: h random points, their stacked affine tangent rows.
// A full-chart tangent block carries one row per matrix entry (redundantly
// spanning its dim+1 tangent cone); all of them go into the stack.
inline std::uint64_t terracini_rank_once(const PrimeField& f, const FlagShape& s, std::uint64_t h,
                                         Rng& rng) {
    std::size_t ambient = static_cast<std::size_t>(to_u64_checked(ambient_affine(s), "ambient"));
    std::vector<std::vector<std::uint64_t>> stacked;
    for (std::uint64_t i = 0; i < h; ++i) {
        Matrix<std::uint64_t> rows = tangent_rows(f, s, random_full_chart(f, s, rng));
        for (std::size_t r = 0; r < rows.rows; ++r) stacked.push_back(rows.row(r));
    }
    return rank(f, Matrix<std::uint64_t>::from_rows(stacked, ambient));
}

// Best rank over `trials` independent samples (each sample only ever
// underestimates the generic rank).
inline std::uint64_t terracini_rank(const PrimeField& f, const FlagShape& s, std::uint64_t h,
                                    std::uint64_t seed, int trials) {
    std::uint64_t best = 0;
    std::string context = shape_to_string(s) + "|h=" + std::to_string(h) +
                          "|p=" + std::to_string(f.modulus());
    for (int t = 0; t < trials; ++t) {
        Rng rng(mix_seed(seed, context, static_cast<std::uint64_t>(t)));
        best = std::max(best, terracini_rank_once(f, s, h, rng));
    }
    return best;
}

// Expected affine dimension of the h-secant cone: h independent tangent
// cones until the span of the variety caps them.
inline std::uint64_t expected_secant_dim(const FlagShape& s, std::uint64_t h) {
    if (h < 1) throw UsageError("secant index h must be at least 1");
    BigInt span = span_dim_affine(s);
    BigInt expected = BigInt(h) * (flag_dim(s) + 1);
    if (expected > span) expected = span;
    return to_u64_checked(expected, "expected dimension");
}

// Certified secant dimension: primary prime plus a confirming prime must
// agree; one disagreement brings in a third prime, persistent disagreement
// is reported as an inconsistency rather than papered over.
inline SecantResult secant_dimension(const FlagShape& s, std::uint64_t h, const EngineOptions& o) {
    if (h < 1) throw UsageError("secant index h must be at least 1");
    check_caps(s, h, o);
    SecantResult res;
    res.h = h;
    res.seed = o.seed;
    res.trials = o.trials;
    res.span_affine = to_u64_checked(span_dim_affine(s), "span dimension");
    res.expected_affine = expected_secant_dim(s, h);

    std::uint64_t p1 = o.prime;
    std::uint64_t p2 = confirmation_prime(p1);
    std::uint64_t r1 = terracini_rank(PrimeField(p1), s, h, o.seed, o.trials);
    std::uint64_t r2 = terracini_rank(PrimeField(p2), s, h, o.seed, o.trials);
    res.prime = p1;
    res.prime2 = p2;
    if (r1 == r2) {
        res.rank_affine = r1;
        res.certified = true;
    } else {
        std::uint64_t p3 = confirmation_prime(p2);
        std::uint64_t r3 = terracini_rank(PrimeField(p3), s, h, o.seed, o.trials);
        std::uint64_t best = std::max({r1, r2, r3});
        int hits = (r1 == best) + (r2 == best) + (r3 == best);
        if (hits < 2)
            throw InconsistencyError("secant rank for " + shape_to_string(s) + " h=" +
                                     std::to_string(h) + " disagrees across three primes: " +
                                     std::to_string(r1) + ", " + std::to_string(r2) + ", " +
                                     std::to_string(r3));
        res.rank_affine = best;
        res.certified = true;
        res.prime = r1 == best ? p1 : p2;
        res.prime2 = r3 == best ? p3 : p2;
    }
    if (res.rank_affine > res.expected_affine)
        throw InconsistencyError("computed secant rank exceeds the expected dimension for " +
                                 shape_to_string(s) + " h=" + std::to_string(h));
    return res;
}

// Defect table for h = 2..h_max.  Once some h fills the span every larger h
// does too, so later rows are derived instead of resampled.
inline std::vector<SecantResult> defect_scan(const FlagShape& s, std::uint64_t h_max,
                                             const EngineOptions& o) {
    std::vector<SecantResult> out;
    bool filled = false;
    for (std::uint64_t h = 2; h <= h_max; ++h) {
        if (filled) {
            SecantResult derived = out.back();
            derived.h = h;
            derived.rank_affine = derived.span_affine;
            derived.expected_affine = derived.span_affine;
            derived.sampled = false;
            out.push_back(derived);
            continue;
        }
        out.push_back(secant_dimension(s, h, o));
        filled = out.back().fills();
    }
    return out;
}

// ------------------------------------------------------------------------
// The chord hypersurface of the point-hyperplane incidence variety.
//
// Points of F(0, n-1; n) are rank-one (n+1)x(n+1) coordinate matrices
// [p_i q_J] subject to incidence, which in these coordinates is the single
// linear equation sum_i (-1)^i Z_{i, {0..n}\{i}} = 0 (a determinant with a
// repeated row, expanded along it).  The variety therefore spans exactly
// that hyperplane, and its chord variety is degenerate there: the 2-secant
// falls one short of the expected dimension.
// ------------------------------------------------------------------------

struct ChordalReport {
    int n = 0;
    bool form_vanishes_on_variety = false; // on the span basis and fresh points
    bool spans_hyperplane = false;         // span rank == (n+1)^2 - 1
    bool form_nonzero_on_ambient = false;  // a general product point misses it
    std::uint64_t two_secant_defect = 0;
    bool certified = false;
};

// Coefficients of the incidence form in canonical column order.
inline std::vector<long long> chordal_form(int n) {
    FlagShape s = make_shape({0, n - 1}, n, Mode::Flag);
    std::vector<long long> c(static_cast<std::size_t>(to_u64_checked(ambient_affine(s), "ambient")), 0);
    for (int i = 0; i <= n; ++i) {
        SingleIndex comp;
        for (int j = 0; j <= n; ++j)
            if (j != i) comp.push_back(j);
        MultiIndex I = {{i}, comp};
        c[static_cast<std::size_t>(column_of(s, I))] = (i % 2 == 0) ? 1 : -1;
    }
    return c;
}

inline ChordalReport chordal_check(int n, const EngineOptions& o) {
    if (n < 2) throw UsageError("chordal_check needs n >= 2");
    FlagShape flag = make_shape({0, n - 1}, n, Mode::Flag);
    FlagShape prod = make_shape({0, n - 1}, n, Mode::Product);
    PrimeField f(o.prime);
    Rng rng(mix_seed(o.seed, "chordal|n=" + std::to_string(n)));
    std::vector<long long> form = chordal_form(n);
    std::vector<std::uint64_t> fm(form.size());
    for (std::size_t i = 0; i < form.size(); ++i) fm[i] = f.from_int(form[i]);
    auto dot = [&](const std::vector<std::uint64_t>& v) {
        std::uint64_t acc = f.zero();
        for (std::size_t i = 0; i < v.size(); ++i) acc = f.add(acc, f.mul(fm[i], v[i]));
        return acc;
    };

    ChordalReport rep;
    rep.n = n;

    bool vanish = true;
    for (int t = 0; t < 50 && vanish; ++t)
        vanish = f.is_zero(dot(embed(f, flag, random_full_chart(f, flag, rng))));
    SubspaceBasis<PrimeField> span = linear_span(f, flag, rng);
    for (std::size_t i = 0; i < span.rank() && vanish; ++i)
        vanish = f.is_zero(dot(span.basis.row(i)));
    rep.form_vanishes_on_variety = vanish;
    rep.spans_hyperplane =
        span.rank() == static_cast<std::uint64_t>(n + 1) * static_cast<std::uint64_t>(n + 1) - 1;
    rep.form_nonzero_on_ambient = !f.is_zero(dot(embed(f, prod, random_full_chart(f, prod, rng))));
    SecantResult sec = secant_dimension(flag, 2, o);
    rep.two_secant_defect = sec.defect();
    rep.certified = sec.certified;
    return rep;
}

} // namespace flagrank
