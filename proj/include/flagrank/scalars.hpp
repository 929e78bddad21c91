#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "flagrank/errors.hpp"
#include "flagrank/rng.hpp"

namespace flagrank {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// ------------------------------------------------------------------------
// Ring / field interface used by the generic linear algebra.  A "ring" is a
// stateless-or-small value object passed by const reference; elements are
// plain values.  This mirrors the field-object idiom of exact linear algebra
// libraries and keeps a runtime modulus out of every element.
// ------------------------------------------------------------------------

template <class R>
concept RingLike = requires(const R r, typename R::Elem a) {
    typename R::Elem;
    { r.zero() } -> std::convertible_to<typename R::Elem>;
    { r.one() } -> std::convertible_to<typename R::Elem>;
    { r.add(a, a) } -> std::convertible_to<typename R::Elem>;
    { r.sub(a, a) } -> std::convertible_to<typename R::Elem>;
    { r.mul(a, a) } -> std::convertible_to<typename R::Elem>;
    { r.neg(a) } -> std::convertible_to<typename R::Elem>;
    { r.is_zero(a) } -> std::convertible_to<bool>;
    { r.eq(a, a) } -> std::convertible_to<bool>;
};

template <class F>
concept FieldLike = RingLike<F> && requires(const F f, typename F::Elem a) {
    { f.inv(a) } -> std::convertible_to<typename F::Elem>;
};

// --------------------------------------------------------------- primes ----

namespace detail {

inline std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod64(r, a, m);
        a = mulmod64(a, a, m);
        e >>= 1;
    }
    return r;
}

} // namespace detail

// Deterministic Miller-Rabin, valid for all 64-bit inputs with this base set.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = detail::powmod64(a % n, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = detail::mulmod64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

// Largest prime modulus we accept: products must fit an unsigned __int128 and
// small sums of residues must not overflow 64 bits, so stay below 2^62.
inline constexpr std::uint64_t kMaxPrime = (1ULL << 62);

// 2^61 - 1 (Mersenne).
inline constexpr std::uint64_t kDefaultPrime = 2305843009213693951ULL;

inline std::uint64_t next_prime_above(std::uint64_t x) {
    std::uint64_t c = x + 1;
    if (c <= 2) return 2;
    if ((c & 1) == 0) ++c;
    while (c < kMaxPrime && !is_prime_u64(c)) c += 2;
    if (c >= kMaxPrime) throw UsageError("no usable prime above " + std::to_string(x));
    return c;
}

inline std::uint64_t prev_prime_below(std::uint64_t x) {
    if (x <= 3) throw UsageError("no prime below " + std::to_string(x));
    std::uint64_t c = x - 1;
    if ((c & 1) == 0) --c;
    while (c > 2 && !is_prime_u64(c)) c -= 2;
    if (!is_prime_u64(c)) throw UsageError("no prime below " + std::to_string(x));
    return c;
}

// Deterministic second modulus used to confirm a result computed mod p.
inline std::uint64_t confirmation_prime(std::uint64_t p) {
    std::uint64_t q = p + 1 < kMaxPrime ? p : kDefaultPrime;
    try {
        q = next_prime_above(p);
    } catch (const UsageError&) {
        q = prev_prime_below(p);
    }
    return q;
}

// ----------------------------------------------------------- prime field ----

class PrimeField {
  public:
    using Elem = std::uint64_t;

    explicit PrimeField(std::uint64_t p) : p_(p) {
        if (p < 2 || p >= kMaxPrime || !is_prime_u64(p))
            throw UsageError("modulus must be a prime below 2^62, got " + std::to_string(p));
    }

    std::uint64_t modulus() const { return p_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem add(Elem a, Elem b) const { Elem s = a + b; return s >= p_ ? s - p_ : s; }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
    Elem mul(Elem a, Elem b) const { return detail::mulmod64(a, b, p_); }
    Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
    Elem inv(Elem a) const {
        if (a == 0) throw UsageError("division by zero in prime field");
        return detail::powmod64(a, p_ - 2, p_);
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    bool is_zero(Elem a) const { return a == 0; }
    bool eq(Elem a, Elem b) const { return a == b; }

    Elem from_int(long long v) const {
        long long m = static_cast<long long>(p_);
        long long r = v % m;
        if (r < 0) r += m;
        return static_cast<Elem>(r);
    }

    Elem random(Rng& rng) const { return rng.below(p_); }

  private:
    std::uint64_t p_;
};

// ------------------------------------------------------------- rationals ----

class RationalField {
  public:
    using Elem = BigRat;

    Elem zero() const { return Elem(0); }
    Elem one() const { return Elem(1); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem inv(const Elem& a) const {
        if (a == 0) throw UsageError("division by zero in rational field");
        return Elem(1) / a;
    }
    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
    bool is_zero(const Elem& a) const { return a == 0; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    Elem from_int(long long v) const { return Elem(v); }

    // Small random integers; genericity sampling over the rationals.
    Elem random(Rng& rng) const {
        return Elem(static_cast<long long>(rng.below(2001)) - 1000);
    }
};

// ------------------------------------------------- univariate poly ring ----
//
// Dense polynomials in one variable t over a base field, used for one
// parameter degenerations.  Coefficients ascending; always trimmed.

template <FieldLike F>
class PolyRing {
  public:
    using Coef = typename F::Elem;
    using Elem = std::vector<Coef>; // poly, coeff of t^i at index i

    explicit PolyRing(F base) : base_(base) {}
    const F& base() const { return base_; }

    Elem zero() const { return {}; }
    Elem one() const { return {base_.one()}; }
    Elem constant(const Coef& c) const { return base_.is_zero(c) ? Elem{} : Elem{c}; }
    // c * t^k
    Elem monomial(const Coef& c, std::size_t k) const {
        if (base_.is_zero(c)) return {};
        Elem p(k + 1, base_.zero());
        p[k] = c;
        return p;
    }

    bool is_zero(const Elem& a) const { return a.empty(); }
    bool eq(const Elem& a, const Elem& b) const {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!base_.eq(a[i], b[i])) return false;
        return true;
    }

    void trim(Elem& a) const {
        while (!a.empty() && base_.is_zero(a.back())) a.pop_back();
    }

    Elem add(const Elem& a, const Elem& b) const {
        Elem r(std::max(a.size(), b.size()), base_.zero());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
        for (std::size_t i = 0; i < b.size(); ++i) r[i] = base_.add(r[i], b[i]);
        trim(r);
        return r;
    }
    Elem neg(const Elem& a) const {
        Elem r(a);
        for (auto& c : r) c = base_.neg(c);
        return r;
    }
    Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }
    Elem mul(const Elem& a, const Elem& b) const {
        if (a.empty() || b.empty()) return {};
        Elem r(a.size() + b.size() - 1, base_.zero());
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                r[i + j] = base_.add(r[i + j], base_.mul(a[i], b[j]));
        trim(r);
        return r;
    }
    Elem scale(const Elem& a, const Coef& c) const {
        if (base_.is_zero(c)) return {};
        Elem r(a);
        for (auto& x : r) x = base_.mul(x, c);
        trim(r);
        return r;
    }

    // order of vanishing at t = 0; npos for the zero polynomial
    static constexpr std::size_t kInfiniteValuation = static_cast<std::size_t>(-1);
    std::size_t valuation(const Elem& a) const {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!base_.is_zero(a[i])) return i;
        return kInfiniteValuation;
    }

    Coef coeff(const Elem& a, std::size_t i) const {
        return i < a.size() ? a[i] : base_.zero();
    }

    // divide by t^k (requires valuation >= k)
    Elem shift_down(const Elem& a, std::size_t k) const {
        if (a.empty()) return {};
        Elem r(a.begin() + static_cast<std::ptrdiff_t>(k), a.end());
        return r;
    }

    Coef eval(const Elem& a, const Coef& t) const {
        Coef r = base_.zero();
        for (std::size_t i = a.size(); i-- > 0;) r = base_.add(base_.mul(r, t), a[i]);
        return r;
    }

    std::size_t degree(const Elem& a) const { return a.empty() ? 0 : a.size() - 1; }

  private:
    F base_;
};

// ------------------------------------------------------ first-order jets ----
//
// Elements value + gradient with all products of infinitesimals set to zero:
// one evaluation of a polynomial map over jets yields the value and every
// first partial simultaneously.

template <FieldLike F>
struct Jet {
    typename F::Elem v;
    std::vector<typename F::Elem> g; // one slot per active variable
};

template <FieldLike F>
class JetRing {
  public:
    using Base = F;
    using Elem = Jet<F>;

    JetRing(F base, std::size_t nvars) : base_(base), nvars_(nvars) {}
    const F& base() const { return base_; }
    std::size_t nvars() const { return nvars_; }

    Elem zero() const { return {base_.zero(), std::vector<typename F::Elem>(nvars_, base_.zero())}; }
    Elem one() const { return constant(base_.one()); }
    Elem constant(const typename F::Elem& c) const {
        return {c, std::vector<typename F::Elem>(nvars_, base_.zero())};
    }
    // value c carried by variable slot i
    Elem variable(const typename F::Elem& c, std::size_t i) const {
        Elem e = constant(c);
        e.g.at(i) = base_.one();
        return e;
    }

    Elem add(const Elem& a, const Elem& b) const {
        Elem r{base_.add(a.v, b.v), a.g};
        for (std::size_t i = 0; i < nvars_; ++i) r.g[i] = base_.add(a.g[i], b.g[i]);
        return r;
    }
    Elem sub(const Elem& a, const Elem& b) const {
        Elem r{base_.sub(a.v, b.v), a.g};
        for (std::size_t i = 0; i < nvars_; ++i) r.g[i] = base_.sub(a.g[i], b.g[i]);
        return r;
    }
    Elem mul(const Elem& a, const Elem& b) const {
        Elem r{base_.mul(a.v, b.v), std::vector<typename F::Elem>(nvars_, base_.zero())};
        for (std::size_t i = 0; i < nvars_; ++i)
            r.g[i] = base_.add(base_.mul(a.v, b.g[i]), base_.mul(b.v, a.g[i]));
        return r;
    }
    Elem neg(const Elem& a) const {
        Elem r{base_.neg(a.v), a.g};
        for (auto& c : r.g) c = base_.neg(c);
        return r;
    }
    bool is_zero(const Elem& a) const {
        if (!base_.is_zero(a.v)) return false;
        for (const auto& c : a.g)
            if (!base_.is_zero(c)) return false;
        return true;
    }
    bool eq(const Elem& a, const Elem& b) const {
        if (!base_.eq(a.v, b.v)) return false;
        for (std::size_t i = 0; i < nvars_; ++i)
            if (!base_.eq(a.g[i], b.g[i])) return false;
        return true;
    }
    Elem from_int(long long v) const { return constant(base_.from_int(v)); }

  private:
    F base_;
    std::size_t nvars_;
};

} // namespace flagrank
