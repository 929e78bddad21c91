#pragma once

#include <cstdint>
#include <string>

#include "flagrank/combinatorics.hpp"
#include "flagrank/scalars.hpp"
#include "flagrank/shape.hpp"

namespace flagrank {

// ------------------------------------------------------------------------
// Closed-form non-defectivity and identifiability bounds.  Everything here
// is exact arithmetic on the shape parameters; no sampling.
// ------------------------------------------------------------------------

enum class Regime {
    ProductLargeN,
    ProductSmallN,
    FlagLargeN,
    FlagSmallN,
    ReducedFlag,
    Asymptotic,
    Identifiability,
};

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::ProductLargeN: return "product-large-n";
        case Regime::ProductSmallN: return "product-small-n";
        case Regime::FlagLargeN: return "flag-large-n";
        case Regime::FlagSmallN: return "flag-small-n";
        case Regime::ReducedFlag: return "reduced-flag";
        case Regime::Asymptotic: return "asymptotic";
        case Regime::Identifiability: return "identifiability";
    }
    return "?";
}

struct BoundReport {
    FlagShape shape;
    Regime regime = Regime::Asymptotic;
    bool applicable = false;
    std::uint64_t h_max = 0; // the variety is not (h+1)-defective for h <= h_max

    long long alpha = -1;
    long long s = -1;                  // order argument of the first h_alpha term
    long long s_prime = -1;            // raw second argument (may be negative)
    long long l = -1;                  // last step usable by the reduction
    std::uint64_t h_alpha_s = 0;       // h_alpha(s)
    std::uint64_t h_alpha_s_prime = 0; // h_alpha(s'), 0 when clamped away
    BigRat bound_value = BigRat(0);    // exact value of rational-power bounds
    bool literal_gate = false;         // identifiability: product-form gate
    std::string note;
};

namespace detail {

inline int floor_log2_u64(std::uint64_t v) {
    int e = -1;
    while (v) {
        v >>= 1;
        ++e;
    }
    return e; // -1 for v == 0
}

inline BigInt floor_rat(const BigRat& q) {
    BigInt num = boost::multiprecision::numerator(q);
    BigInt den = boost::multiprecision::denominator(q);
    BigInt f = num / den;
    if (num < 0 && f * den != num) f -= 1;
    return f;
}

// ((n+1)/(k+1)) ^ floor(log2(arg)), exactly; arg == 0 makes it vacuous (0).
inline BigRat rational_power_bound(int n, int k, std::uint64_t arg) {
    int e = floor_log2_u64(arg);
    if (e < 0) return BigRat(0);
    BigRat base(n + 1, k + 1);
    BigRat r(1);
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

} // namespace detail

// The regime split shared by products and flags: once n clears a quadratic
// threshold in k_r, all alpha staircase points can carry full-order
// osculating spaces; below it one point is sacrificed.
inline bool large_n_regime(const FlagShape& s) {
    long long k = s.kr();
    return s.n >= k * k + 3 * k + 1;
}

// Non-defectivity bound for products of Grassmannians.
inline BoundReport product_bound(const FlagShape& s) {
    if (s.mode != Mode::Product) throw UsageError("product_bound: product shapes only");
    BoundReport rep;
    rep.shape = s;
    if (s.n < 2 * s.kr() + 1) {
        rep.regime = Regime::ProductSmallN;
        rep.note = "n < 2k_r+1: no staircase pair of points fits; bound not applicable";
        return rep;
    }
    rep.applicable = true;
    rep.alpha = s.alpha();
    rep.s = s.r() - 2 + s.sum_k();
    std::uint64_t m = static_cast<std::uint64_t>(rep.alpha);
    rep.h_alpha_s = rep.s <= 0 ? 0 : h_m(m, static_cast<std::uint64_t>(rep.s));
    if (large_n_regime(s)) {
        rep.regime = Regime::ProductLargeN;
        rep.h_max = static_cast<std::uint64_t>(rep.alpha) * rep.h_alpha_s;
        return rep;
    }
    rep.regime = Regime::ProductSmallN;
    long long sp = 0;
    for (int i = 0; i < s.r(); ++i) {
        long long k = s.ks[static_cast<std::size_t>(i)];
        if (i + 1 < s.r())
            sp += std::min<long long>(k + 1, s.n - rep.alpha * (k + 1));
        else
            sp += std::min<long long>(k, s.n - rep.alpha * k - 1);
    }
    rep.s_prime = sp - 2;
    rep.h_alpha_s_prime = rep.s_prime <= 0 ? 0 : h_m(m, static_cast<std::uint64_t>(rep.s_prime));
    rep.h_max = static_cast<std::uint64_t>(rep.alpha - 1) * rep.h_alpha_s + rep.h_alpha_s_prime;
    return rep;
}

// Non-defectivity bound for flag varieties with n >= 2k_r+1.
inline BoundReport flag_bound(const FlagShape& s) {
    if (s.mode != Mode::Flag) throw UsageError("flag_bound: flag shapes only");
    BoundReport rep;
    rep.shape = s;
    if (s.n < 2 * s.kr() + 1) {
        rep.regime = Regime::FlagSmallN;
        rep.note = "n < 2k_r+1: use the reduced bound";
        return rep;
    }
    rep.applicable = true;
    rep.alpha = s.alpha();
    rep.s = s.sum_k() + s.r() - 2;
    std::uint64_t m = static_cast<std::uint64_t>(rep.alpha);
    rep.h_alpha_s = rep.s <= 0 ? 0 : h_m(m, static_cast<std::uint64_t>(rep.s));
    if (large_n_regime(s)) {
        rep.regime = Regime::FlagLargeN;
        rep.h_max = static_cast<std::uint64_t>(rep.alpha) * rep.h_alpha_s;
    } else {
        rep.regime = Regime::FlagSmallN;
        rep.h_max = static_cast<std::uint64_t>(rep.alpha - 1) * rep.h_alpha_s;
    }
    return rep;
}

// Reduction for flags too squeezed for the direct bound: project away the
// steps with n < 2k_j+1 and bound through the widest surviving one.
inline BoundReport reduced_flag_bound(const FlagShape& s) {
    if (s.mode != Mode::Flag) throw UsageError("reduced_flag_bound: flag shapes only");
    if (s.n >= 2 * s.kr() + 1)
        throw UsageError("reduced_flag_bound: n >= 2k_r+1, use flag_bound directly");
    BoundReport rep;
    rep.shape = s;
    rep.regime = Regime::ReducedFlag;
    int l = -1;
    for (int j = 0; j < s.r(); ++j)
        if (s.n >= 2 * s.ks[static_cast<std::size_t>(j)] + 1) l = j;
    if (l < 0) {
        rep.note = "no step satisfies n >= 2k_j+1";
        return rep;
    }
    rep.applicable = true;
    rep.l = l + 1; // 1-based step index
    long long arg = l;
    for (int j = 0; j <= l; ++j) arg += s.ks[static_cast<std::size_t>(j)];
    rep.s = arg; // the log argument: k_1+...+k_l + l - 1
    rep.bound_value = detail::rational_power_bound(s.n, s.ks[static_cast<std::size_t>(l)],
                                                   arg <= 0 ? 0 : static_cast<std::uint64_t>(arg));
    rep.h_max = to_u64_checked(detail::floor_rat(rep.bound_value), "reduced bound");
    if (arg <= 0) rep.note = "log argument vanishes: vacuous bound";
    return rep;
}

// Closed-form asymptotic bound: floor of an exact rational power.
inline BoundReport asymptotic_bound(const FlagShape& s) {
    BoundReport rep;
    rep.shape = s;
    rep.regime = Regime::Asymptotic;
    if (s.n < 2 * s.kr() + 1) {
        rep.note = "n < 2k_r+1: asymptotic bound requires two staircase points";
        return rep;
    }
    rep.applicable = true;
    rep.alpha = s.alpha();
    long long arg = s.sum_k() + s.r() - 1;
    rep.s = arg;
    rep.bound_value =
        detail::rational_power_bound(s.n, s.kr(), arg <= 0 ? 0 : static_cast<std::uint64_t>(arg));
    rep.h_max = to_u64_checked(detail::floor_rat(rep.bound_value), "asymptotic bound");
    if (arg <= 0) rep.note = "log argument vanishes: vacuous bound";
    return rep;
}

// Identifiability gate: the variety is h-identifiable for every h up to the
// rational bound B once twice-the-dimension-minus-one clears B.  The gate
// compares exactly; only the reported h_max is floored.
inline BoundReport identifiability_bound(const FlagShape& s, bool literal_gate = false) {
    BoundReport rep;
    rep.shape = s;
    rep.regime = Regime::Identifiability;
    rep.literal_gate = literal_gate && s.mode == Mode::Product;

    BigRat B(0);
    bool have_bound = false;
    if (s.n >= 2 * s.kr() + 1) {
        BoundReport a = asymptotic_bound(s);
        B = a.bound_value;
        have_bound = a.applicable;
        rep.alpha = a.alpha;
        rep.s = a.s;
    } else if (s.mode == Mode::Flag) {
        BoundReport r = reduced_flag_bound(s);
        B = r.bound_value;
        have_bound = r.applicable;
        rep.l = r.l;
        rep.s = r.s;
    }
    rep.bound_value = B;
    if (!have_bound) {
        rep.note = "no applicable defectivity bound to gate against";
        return rep;
    }

    BigInt gate;
    if (rep.literal_gate) {
        BigInt prod(1);
        for (int k : s.ks) prod *= BigInt(k + 1) * (s.n - k);
        gate = 2 * prod - 1;
        rep.note = "gate uses the literal product form";
    } else {
        gate = 2 * BigInt(flag_dim(s)) - 1;
    }
    rep.applicable = BigRat(gate) <= B;
    if (rep.applicable) rep.h_max = to_u64_checked(detail::floor_rat(B), "identifiability bound");
    else if (rep.note.empty())
        rep.note = "2*dim-1 exceeds the bound: gate fails";
    return rep;
}

// The sharpest applicable non-defectivity bound for a shape.
inline BoundReport best_defectivity_bound(const FlagShape& s) {
    if (s.mode == Mode::Product) return product_bound(s);
    if (s.n >= 2 * s.kr() + 1) return flag_bound(s);
    return reduced_flag_bound(s);
}

} // namespace flagrank
