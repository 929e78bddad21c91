#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "flagrank/errors.hpp"
#include "flagrank/shape.hpp"

namespace flagrank {

// A coordinate of one factor: the sorted column set of a maximal minor,
// k_i + 1 distinct values in {0..n}.
using SingleIndex = std::vector<int>;
// One coordinate of the Segre ambient: a SingleIndex per factor.
using MultiIndex = std::vector<SingleIndex>;

inline std::uint64_t binom_u64(long long n, long long k) {
    return to_u64_checked(binomial_big(n, k), "binomial");
}

inline bool is_valid_single(const FlagShape& s, int factor, const SingleIndex& I) {
    if (static_cast<int>(I.size()) != s.ks[factor] + 1) return false;
    for (std::size_t j = 0; j < I.size(); ++j) {
        if (I[j] < 0 || I[j] > s.n) return false;
        if (j > 0 && I[j] <= I[j - 1]) return false;
    }
    return true;
}

inline bool is_valid_multi(const FlagShape& s, const MultiIndex& I) {
    if (static_cast<int>(I.size()) != s.r()) return false;
    for (int i = 0; i < s.r(); ++i)
        if (!is_valid_single(s, i, I[i])) return false;
    return true;
}

// parts nested I^1 subseteq I^2 subseteq ... (a coordinate point of the flag)
inline bool is_nested(const MultiIndex& I) {
    for (std::size_t i = 1; i < I.size(); ++i)
        if (!std::includes(I[i].begin(), I[i].end(), I[i - 1].begin(), I[i - 1].end()))
            return false;
    return true;
}

// ------------------------------------------------------------- distances ----

// d(I,J) = |I| - |I cap J| for equal-size sorted sets
inline int distance_single(const SingleIndex& I, const SingleIndex& J) {
    if (I.size() != J.size()) throw UsageError("distance_single: index sizes differ");
    std::size_t a = 0, b = 0, common = 0;
    while (a < I.size() && b < J.size()) {
        if (I[a] == J[b]) { ++common; ++a; ++b; }
        else if (I[a] < J[b]) ++a;
        else ++b;
    }
    return static_cast<int>(I.size() - common);
}

inline int distance(const FlagShape& s, const MultiIndex& I, const MultiIndex& J) {
    if (!is_valid_multi(s, I) || !is_valid_multi(s, J))
        throw UsageError("distance: index does not match shape");
    int d = 0;
    for (int i = 0; i < s.r(); ++i) d += distance_single(I[i], J[i]);
    return d;
}

// --------------------------------------- lexicographic coordinate order ----
//
// The canonical order on ambient coordinates is part-major lexicographic:
// factor 1 most significant, each factor's index sets ordered
// set-lexicographically.  Columns of every matrix built downstream follow it.

// rank of a sorted t-subset of {0..N-1} in set-lex order
inline std::uint64_t combination_rank(const SingleIndex& c, int N) {
    std::uint64_t rank = 0;
    int t = static_cast<int>(c.size());
    int prev = -1;
    for (int j = 0; j < t; ++j) {
        for (int v = prev + 1; v < c[j]; ++v)
            rank += binom_u64(N - 1 - v, t - 1 - j);
        prev = c[j];
    }
    return rank;
}

inline SingleIndex combination_unrank(std::uint64_t rank, int N, int t) {
    SingleIndex c;
    c.reserve(static_cast<std::size_t>(t));
    int v = 0;
    for (int j = 0; j < t; ++j) {
        while (true) {
            std::uint64_t block = binom_u64(N - 1 - v, t - 1 - j);
            if (rank < block) break;
            rank -= block;
            ++v;
        }
        c.push_back(v);
        ++v;
    }
    return c;
}

inline std::uint64_t factor_count(const FlagShape& s, int factor) {
    return binom_u64(s.n + 1, s.ks[factor] + 1);
}

inline std::uint64_t lambda_size(const FlagShape& s) {
    return to_u64_checked(ambient_affine(s), "ambient coordinate count");
}

inline std::uint64_t column_of(const FlagShape& s, const MultiIndex& I) {
    std::uint64_t col = 0;
    for (int i = 0; i < s.r(); ++i)
        col = col * factor_count(s, i) + combination_rank(I[i], s.n + 1);
    return col;
}

inline MultiIndex index_of(const FlagShape& s, std::uint64_t col) {
    MultiIndex I(static_cast<std::size_t>(s.r()));
    for (int i = s.r() - 1; i >= 0; --i) {
        std::uint64_t c = factor_count(s, i);
        I[static_cast<std::size_t>(i)] = combination_unrank(col % c, s.n + 1, s.ks[i] + 1);
        col /= c;
    }
    return I;
}

// ----------------------------------------------------------------- balls ----

namespace detail {

// all sorted t-subsets of the (sorted) pool, in lex order
inline void for_each_subset(const std::vector<int>& pool, int t,
                            const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> pick;
    pick.reserve(static_cast<std::size_t>(t));
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (static_cast<int>(pick.size()) == t) { fn(pick); return; }
        int missing = t - static_cast<int>(pick.size());
        for (std::size_t i = from; i + static_cast<std::size_t>(missing) <= pool.size(); ++i) {
            pick.push_back(pool[i]);
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
}

// single-factor indices at exact distance d from I (drop d of I, add d outside)
inline void for_each_at_distance(const SingleIndex& I, int n, int d,
                                 const std::function<void(const SingleIndex&)>& fn) {
    std::vector<int> outside;
    outside.reserve(static_cast<std::size_t>(n + 1) - I.size());
    std::size_t at = 0;
    for (int v = 0; v <= n; ++v) {
        if (at < I.size() && I[at] == v) ++at;
        else outside.push_back(v);
    }
    for_each_subset(I, static_cast<int>(I.size()) - d, [&](const std::vector<int>& keep) {
        for_each_subset(outside, d, [&](const std::vector<int>& add) {
            SingleIndex J(keep.size() + add.size());
            std::merge(keep.begin(), keep.end(), add.begin(), add.end(), J.begin());
            fn(J);
        });
    });
}

} // namespace detail

// Streams every J in the ambient index set with d(I,J) <= s.  No cap; this is
// the iterator-style contract for large ambients.
inline void ball_visit(const FlagShape& s, const MultiIndex& I, int rad,
                       const std::function<void(const MultiIndex&)>& fn) {
    if (!is_valid_multi(s, I)) throw UsageError("ball: center does not match shape");
    if (rad < 0) throw UsageError("ball: negative radius");
    MultiIndex J(static_cast<std::size_t>(s.r()));
    std::function<void(int, int)> rec = [&](int factor, int budget) {
        if (factor == s.r()) { fn(J); return; }
        int dmax = std::min({budget, s.ks[factor] + 1, s.n - s.ks[factor]});
        for (int d = 0; d <= dmax; ++d) {
            detail::for_each_at_distance(I[static_cast<std::size_t>(factor)], s.n, d,
                                         [&](const SingleIndex& Jf) {
                J[static_cast<std::size_t>(factor)] = Jf;
                rec(factor + 1, budget - d);
            });
        }
    };
    rec(0, rad);
}

// Materialized ball in canonical coordinate order.
inline std::vector<MultiIndex> ball(const FlagShape& s, const MultiIndex& I, int rad,
                                    std::uint64_t cap = 1000000) {
    std::vector<MultiIndex> out;
    ball_visit(s, I, rad, [&](const MultiIndex& J) {
        if (out.size() >= cap) throw CapError("ball size exceeds cap; use ball_visit");
        out.push_back(J);
    });
    std::sort(out.begin(), out.end(), [&](const MultiIndex& a, const MultiIndex& b) {
        return column_of(s, a) < column_of(s, b);
    });
    return out;
}

// Ball as a sorted list of ambient column ids.
inline std::vector<std::uint64_t> ball_columns(const FlagShape& s, const MultiIndex& I, int rad) {
    std::vector<std::uint64_t> cols;
    ball_visit(s, I, rad, [&](const MultiIndex& J) { cols.push_back(column_of(s, J)); });
    std::sort(cols.begin(), cols.end());
    return cols;
}

// ---------------------------------------------------- coordinate family ----

// The alpha staircase coordinate points: I_j has parts
// {(k_r+1)(j-1), ..., (k_r+1)(j-1)+k_i}; consecutive blocks of the ambient
// basis, pairwise at maximal distance.  Needs n >= 2k_r+1 (alpha >= 2).
inline std::vector<MultiIndex> coordinate_family(const FlagShape& s) {
    if (s.n < 2 * s.kr() + 1)
        throw UsageError("coordinate_family needs n >= 2k_r+1 (alpha >= 2)");
    std::vector<MultiIndex> pts;
    for (int j = 1; j <= s.alpha(); ++j) {
        MultiIndex I;
        int base = (s.kr() + 1) * (j - 1);
        for (int i = 0; i < s.r(); ++i) {
            SingleIndex part;
            for (int v = 0; v <= s.ks[static_cast<std::size_t>(i)]; ++v) part.push_back(base + v);
            I.push_back(std::move(part));
        }
        pts.push_back(std::move(I));
    }
    return pts;
}

// ------------------------------------------------------------------- h_m ----

// h_m(k): write k+1 = 2^{l_1} + ... + 2^{l_q} + eps with l_1 > ... > l_q >= 1
// and eps in {0,1} (binary digits; the unit bit is eps), then
// h_m(k) = m^{l_1 - 1} + ... + m^{l_q - 1}.  h_m(0) = 0.
inline std::uint64_t h_m(std::uint64_t m, std::uint64_t k) {
    if (m < 2) throw UsageError("h_m needs m >= 2");
    std::uint64_t K = k + 1;
    std::uint64_t total = 0;
    for (int bit = 63; bit >= 1; --bit) {
        if ((K >> bit) & 1ULL) {
            // m^(bit-1), overflow-checked
            unsigned __int128 p = 1;
            for (int e = 0; e < bit - 1; ++e) {
                p *= m;
                if (p > static_cast<unsigned __int128>(UINT64_MAX))
                    throw CapError("h_m overflows 64 bits");
            }
            unsigned __int128 t = static_cast<unsigned __int128>(total) + static_cast<std::uint64_t>(p);
            if (t > static_cast<unsigned __int128>(UINT64_MAX)) throw CapError("h_m overflows 64 bits");
            total = static_cast<std::uint64_t>(t);
        }
    }
    return total;
}

} // namespace flagrank
