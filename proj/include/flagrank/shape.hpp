#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "flagrank/errors.hpp"
#include "flagrank/scalars.hpp"

namespace flagrank {

// A shape selects the variety under study:
//   Flag    F(k_1,...,k_r; n)        nested subspaces, one per k_i
//   Product G(k_1,n) x ... x G(k_r,n) independent factors
// both mapped to multi-projective space by maximal minors on each factor and
// then by the Segre product.  Text grammar: "[G:]k1,...,kr;n", e.g. "0,2;3"
// (flag) or "G:2;8" (product of one Grassmannian).
enum class Mode { Flag, Product };

struct FlagShape {
    std::vector<int> ks; // 0 <= k_1 <= ... <= k_r < n
    int n = 0;
    Mode mode = Mode::Flag;

    int r() const { return static_cast<int>(ks.size()); }
    int kr() const { return ks.back(); }
    int sum_k() const { return std::accumulate(ks.begin(), ks.end(), 0); }
    // distance diameter of the coordinate index set
    int diameter() const { return r() + sum_k(); }
    // alpha = floor((n+1)/(k_r+1)), the number of pairwise "disjoint" coordinate
    // points that fit in the ambient C^{n+1}
    int alpha() const { return (n + 1) / (kr() + 1); }

    bool operator==(const FlagShape& o) const = default;
};

inline void validate_shape(const FlagShape& s) {
    if (s.ks.empty()) throw ShapeError("shape needs at least one k");
    if (s.ks.front() < 0) throw ShapeError("k must be >= 0");
    for (std::size_t i = 1; i < s.ks.size(); ++i)
        if (s.ks[i] < s.ks[i - 1]) throw ShapeError("k's must be non-decreasing");
    if (s.ks.back() >= s.n) throw ShapeError("need k_r < n");
}

inline FlagShape make_shape(std::vector<int> ks, int n, Mode mode) {
    FlagShape s{std::move(ks), n, mode};
    validate_shape(s);
    return s;
}

// Affine dimension of the variety's smooth parametrization (projective
// dimension of the variety itself).
inline long long flag_dim(const FlagShape& s) {
    long long d = 0;
    if (s.mode == Mode::Product) {
        for (int k : s.ks) d += static_cast<long long>(k + 1) * (s.n - k);
    } else {
        d = static_cast<long long>(s.ks[0] + 1) * (s.n - s.ks[0]);
        for (std::size_t j = 1; j < s.ks.size(); ++j)
            d += static_cast<long long>(s.n - s.ks[j]) * (s.ks[j] - s.ks[j - 1]);
    }
    return d;
}

inline BigInt binomial_big(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (long long i = 0; i < k; ++i) {
        r *= (n - i);
        r /= (i + 1);
    }
    return r;
}

// Number of coordinates of the full multi-projective ambient (affine count,
// i.e. the product of the per-factor binomials).
inline BigInt ambient_affine(const FlagShape& s) {
    BigInt a = 1;
    for (int k : s.ks) a *= binomial_big(s.n + 1, k + 1);
    return a;
}

inline std::uint64_t to_u64_checked(const BigInt& v, const char* what) {
    if (v < 0 || v > BigInt(UINT64_MAX)) throw CapError(std::string(what) + " does not fit in 64 bits");
    return static_cast<std::uint64_t>(v);
}

// ------------------------------------------------------------ formatting ----

inline std::string shape_to_string(const FlagShape& s) {
    std::string out = s.mode == Mode::Product ? "G:" : "";
    for (std::size_t i = 0; i < s.ks.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(s.ks[i]);
    }
    out += ';';
    out += std::to_string(s.n);
    return out;
}

// Parses "[G:]k1,...,kr;n".  Throws ShapeError carrying the byte position of
// the first offending character.
inline FlagShape parse_shape(const std::string& text) {
    std::size_t pos = 0;
    Mode mode = Mode::Flag;
    if (text.rfind("G:", 0) == 0) {
        mode = Mode::Product;
        pos = 2;
    }
    auto read_int = [&](const char* what) {
        std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == start) throw ShapeError(std::string("expected ") + what + " in shape text", start);
        long long v = 0;
        for (std::size_t i = start; i < pos; ++i) {
            v = v * 10 + (text[i] - '0');
            if (v > 1000000) throw ShapeError("shape entry out of range", start);
        }
        return static_cast<int>(v);
    };
    std::vector<int> ks;
    std::vector<std::size_t> k_pos;
    k_pos.push_back(pos);
    ks.push_back(read_int("k"));
    while (pos < text.size() && text[pos] == ',') {
        ++pos;
        k_pos.push_back(pos);
        ks.push_back(read_int("k"));
    }
    if (pos >= text.size() || text[pos] != ';')
        throw ShapeError("expected ';' before n in shape text", pos);
    ++pos;
    std::size_t n_pos = pos;
    int n = read_int("n");
    if (pos != text.size()) throw ShapeError("trailing characters after shape", pos);
    FlagShape s{std::move(ks), n, mode};
    for (std::size_t i = 1; i < s.ks.size(); ++i)
        if (s.ks[i] < s.ks[i - 1]) throw ShapeError("k's must be non-decreasing", k_pos[i]);
    if (s.ks.back() >= s.n) throw ShapeError("need k_r < n", n_pos);
    validate_shape(s);
    return s;
}

} // namespace flagrank
