#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "flagrank/combinatorics.hpp"
#include "flagrank/linalg.hpp"
#include "flagrank/scalars.hpp"

namespace flagrank {

// ------------------------------------------------------------------------
// Chart points.  A point of the variety is presented by matrices whose row
// spans give the subspaces:
//   Flag    one (k_r+1) x (n+1) matrix; factor i uses its first k_i+1 rows
//   Product one (k_i+1) x (n+1) matrix per factor
// Staircase charts pin identity blocks and expose the canonical free
// parameters; full charts treat every entry as free (a random basis of a
// random point — the way "general points" are drawn).
// ------------------------------------------------------------------------

enum class ChartKind { Staircase, Full };

template <class E>
struct Chart {
    FlagShape shape;
    ChartKind kind = ChartKind::Staircase;
    std::vector<Matrix<E>> mats;

    // matrix whose rows span the factor's subspace
    Matrix<E> factor_matrix(int i) const {
        if (shape.mode == Mode::Product) return mats[static_cast<std::size_t>(i)];
        const Matrix<E>& M = mats[0];
        std::size_t h = static_cast<std::size_t>(shape.ks[static_cast<std::size_t>(i)] + 1);
        Matrix<E> out;
        out.rows = h;
        out.cols = M.cols;
        out.a.assign(M.a.begin(), M.a.begin() + static_cast<std::ptrdiff_t>(h * M.cols));
        return out;
    }
};

// band of row l in the flag staircase: the first factor containing that row
inline int flag_band(const FlagShape& s, int l) {
    for (int i = 0; i < s.r(); ++i)
        if (l <= s.ks[static_cast<std::size_t>(i)]) return i;
    throw UsageError("flag_band: row out of range");
}

// number of free parameters of the staircase chart (= variety dimension)
inline std::size_t param_count(const FlagShape& s) {
    return static_cast<std::size_t>(flag_dim(s));
}

// number of matrix entries of a full chart
inline std::size_t full_entry_count(const FlagShape& s) {
    std::size_t c = 0;
    if (s.mode == Mode::Product) {
        for (int k : s.ks) c += static_cast<std::size_t>(k + 1) * (s.n + 1);
    } else {
        c = static_cast<std::size_t>(s.kr() + 1) * (s.n + 1);
    }
    return c;
}

// Builds the staircase chart from parameter values in canonical order
// (factors in order, rows top to bottom, columns left to right).
template <RingLike R>
inline Chart<typename R::Elem> staircase_chart(const R& ring, const FlagShape& s,
                                               const std::vector<typename R::Elem>& params) {
    if (params.size() != param_count(s)) throw UsageError("staircase_chart: wrong parameter count");
    Chart<typename R::Elem> ch{s, ChartKind::Staircase, {}};
    std::size_t next = 0;
    if (s.mode == Mode::Product) {
        for (int i = 0; i < s.r(); ++i) {
            int k = s.ks[static_cast<std::size_t>(i)];
            Matrix<typename R::Elem> M(static_cast<std::size_t>(k + 1),
                                       static_cast<std::size_t>(s.n + 1), ring.zero());
            for (int l = 0; l <= k; ++l)
                for (int m = 0; m <= s.n; ++m) {
                    if (m > k) M.at(l, m) = params[next++];
                    else if (m == l) M.at(l, m) = ring.one();
                }
            ch.mats.push_back(std::move(M));
        }
    } else {
        Matrix<typename R::Elem> M(static_cast<std::size_t>(s.kr() + 1),
                                   static_cast<std::size_t>(s.n + 1), ring.zero());
        for (int l = 0; l <= s.kr(); ++l) {
            int kb = s.ks[static_cast<std::size_t>(flag_band(s, l))];
            for (int m = 0; m <= s.n; ++m) {
                if (m > kb) M.at(l, m) = params[next++];
                else if (m == l) M.at(l, m) = ring.one();
            }
        }
        ch.mats.push_back(std::move(M));
    }
    return ch;
}

template <FieldLike F>
inline Chart<typename F::Elem> origin_chart(const F& f, const FlagShape& s) {
    return staircase_chart(f, s, std::vector<typename F::Elem>(param_count(s), f.zero()));
}

template <FieldLike F>
inline Chart<typename F::Elem> random_staircase_chart(const F& f, const FlagShape& s, Rng& rng) {
    std::vector<typename F::Elem> params(param_count(s));
    for (auto& p : params) p = f.random(rng);
    return staircase_chart(f, s, params);
}

// A general point: random basis of a random member (all entries random).
template <FieldLike F>
inline Chart<typename F::Elem> random_full_chart(const F& f, const FlagShape& s, Rng& rng) {
    Chart<typename F::Elem> ch{s, ChartKind::Full, {}};
    auto rand_mat = [&](int k) {
        Matrix<typename F::Elem> M(static_cast<std::size_t>(k + 1),
                                   static_cast<std::size_t>(s.n + 1), f.zero());
        for (auto& x : M.a) x = f.random(rng);
        return M;
    };
    if (s.mode == Mode::Product)
        for (int k : s.ks) ch.mats.push_back(rand_mat(k));
    else
        ch.mats.push_back(rand_mat(s.kr()));
    return ch;
}

// --------------------------------------------------------------- embed ----

namespace detail {

// all maximal minors of one factor matrix, indexed by combination rank
template <RingLike R>
inline std::vector<typename R::Elem> minor_table(const R& ring, const Matrix<typename R::Elem>& M,
                                                 int n, int k) {
    std::uint64_t count = binom_u64(n + 1, k + 1);
    std::vector<typename R::Elem> table;
    table.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t rk = 0; rk < count; ++rk) {
        SingleIndex cols = combination_unrank(rk, n + 1, k + 1);
        Matrix<typename R::Elem> sub(static_cast<std::size_t>(k + 1),
                                     static_cast<std::size_t>(k + 1), ring.zero());
        for (int i = 0; i <= k; ++i)
            for (int j = 0; j <= k; ++j)
                sub.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                    M.at(static_cast<std::size_t>(i), static_cast<std::size_t>(cols[static_cast<std::size_t>(j)]));
        table.push_back(det_ring(ring, sub));
    }
    return table;
}

} // namespace detail

// The multi-projective coordinates of a chart point: for every ambient index
// (J^1,...,J^r), the product over factors of the maximal minor on columns
// J^i.  Output in canonical column order.
template <RingLike R>
inline std::vector<typename R::Elem> embed(const R& ring, const FlagShape& s,
                                           const Chart<typename R::Elem>& chart) {
    std::vector<std::vector<typename R::Elem>> tables;
    for (int i = 0; i < s.r(); ++i)
        tables.push_back(detail::minor_table(ring, chart.factor_matrix(i), s.n,
                                             s.ks[static_cast<std::size_t>(i)]));
    std::uint64_t total = lambda_size(s);
    std::vector<typename R::Elem> out;
    out.reserve(static_cast<std::size_t>(total));
    std::vector<std::size_t> odo(static_cast<std::size_t>(s.r()), 0);
    for (std::uint64_t col = 0; col < total; ++col) {
        typename R::Elem v = tables[0][odo[0]];
        for (int i = 1; i < s.r(); ++i) v = ring.mul(v, tables[static_cast<std::size_t>(i)][odo[static_cast<std::size_t>(i)]]);
        out.push_back(std::move(v));
        // advance the part-major odometer (last factor fastest)
        for (int i = s.r() - 1; i >= 0; --i) {
            if (++odo[static_cast<std::size_t>(i)] < tables[static_cast<std::size_t>(i)].size()) break;
            odo[static_cast<std::size_t>(i)] = 0;
        }
    }
    return out;
}

// ------------------------------------------------------- tangent rows ----

// Rows spanning the affine tangent space at a chart point: the embedded
// point plus the partial of the embedding with respect to every free chart
// entry (staircase: the parameters; full: all matrix entries).  One jet
// evaluation delivers the whole Jacobian.
template <FieldLike F>
inline Matrix<typename F::Elem> tangent_rows(const F& f, const FlagShape& s,
                                             const Chart<typename F::Elem>& chart) {
    std::size_t nvars =
        chart.kind == ChartKind::Full ? full_entry_count(s) : param_count(s);
    JetRing<F> jr(f, nvars);
    Chart<typename JetRing<F>::Elem> jchart{s, chart.kind, {}};
    std::size_t next = 0;
    for (std::size_t mi = 0; mi < chart.mats.size(); ++mi) {
        const auto& M = chart.mats[mi];
        Matrix<typename JetRing<F>::Elem> J(M.rows, M.cols, jr.zero());
        for (std::size_t l = 0; l < M.rows; ++l)
            for (std::size_t m = 0; m < M.cols; ++m) {
                bool is_var;
                if (chart.kind == ChartKind::Full) {
                    is_var = true;
                } else {
                    int kb = s.mode == Mode::Product
                                 ? s.ks[mi]
                                 : s.ks[static_cast<std::size_t>(flag_band(s, static_cast<int>(l)))];
                    is_var = static_cast<int>(m) > kb;
                }
                J.at(l, m) = is_var ? jr.variable(M.at(l, m), next++) : jr.constant(M.at(l, m));
            }
        jchart.mats.push_back(std::move(J));
    }
    std::vector<typename JetRing<F>::Elem> img = embed(jr, s, jchart);
    Matrix<typename F::Elem> rows(nvars + 1, img.size(), f.zero());
    for (std::size_t c = 0; c < img.size(); ++c) {
        rows.at(0, c) = img[c].v;
        for (std::size_t v = 0; v < nvars; ++v) rows.at(v + 1, c) = img[c].g[v];
    }
    return rows;
}

// -------------------------------------------- symbolic parametrization ----
//
// Sparse integer polynomials in the chart parameters, with optional total
// degree truncation.  Higher-order derivatives at the origin are coefficient
// extractions from this expansion — the exact route to osculating data that
// needs no division and no sampling.

using Monomial = std::vector<std::uint16_t>; // exponent per variable

struct MPoly {
    std::map<Monomial, long long> terms;
    bool operator==(const MPoly& o) const = default;
};

class MPolyRing {
  public:
    using Elem = MPoly;

    MPolyRing(std::size_t nvars, int max_total_deg = -1)
        : nvars_(nvars), max_deg_(max_total_deg) {}

    std::size_t nvars() const { return nvars_; }

    Elem zero() const { return {}; }
    Elem one() const { return constant(1); }
    Elem constant(long long c) const {
        Elem e;
        if (c != 0) e.terms[Monomial(nvars_, 0)] = c;
        return e;
    }
    Elem variable(std::size_t i) const {
        Elem e;
        Monomial m(nvars_, 0);
        m.at(i) = 1;
        e.terms[std::move(m)] = 1;
        return e;
    }

    bool is_zero(const Elem& a) const { return a.terms.empty(); }
    bool eq(const Elem& a, const Elem& b) const { return a.terms == b.terms; }

    Elem add(const Elem& a, const Elem& b) const {
        Elem r = a;
        for (const auto& [m, c] : b.terms) {
            auto it = r.terms.find(m);
            if (it == r.terms.end()) r.terms.emplace(m, c);
            else if ((it->second += c) == 0) r.terms.erase(it);
        }
        return r;
    }
    Elem neg(const Elem& a) const {
        Elem r = a;
        for (auto& [m, c] : r.terms) c = -c;
        return r;
    }
    Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }
    Elem mul(const Elem& a, const Elem& b) const {
        Elem r;
        for (const auto& [ma, ca] : a.terms)
            for (const auto& [mb, cb] : b.terms) {
                Monomial m(nvars_);
                int deg = 0;
                for (std::size_t i = 0; i < nvars_; ++i) {
                    m[i] = static_cast<std::uint16_t>(ma[i] + mb[i]);
                    deg += m[i];
                }
                if (max_deg_ >= 0 && deg > max_deg_) continue;
                auto it = r.terms.find(m);
                if (it == r.terms.end()) r.terms.emplace(std::move(m), ca * cb);
                else if ((it->second += ca * cb) == 0) r.terms.erase(it);
            }
        return r;
    }

  private:
    std::size_t nvars_;
    int max_deg_; // keep only total degree <= max_deg_ (-1: no truncation)
};

inline int total_degree(const Monomial& m) {
    int d = 0;
    for (auto e : m) d += e;
    return d;
}

// Every ambient coordinate of the staircase parametrization as an integer
// polynomial in the chart parameters, truncated past total degree max_deg.
inline std::vector<MPoly> symbolic_embed(const FlagShape& s, int max_deg) {
    MPolyRing ring(param_count(s), max_deg);
    std::vector<MPoly> params;
    for (std::size_t i = 0; i < param_count(s); ++i) params.push_back(ring.variable(i));
    Chart<MPoly> chart = staircase_chart(ring, s, params);
    return embed(ring, s, chart);
}

// Exact integer rows spanning the order-s osculating space at the chart
// origin: one row per monomial of total degree <= s that survives in the
// truncated expansion, holding that monomial's coefficient in every ambient
// coordinate.  (Extracting the coefficient of a monomial is, up to the
// nonzero factor prod a_i!, evaluating a partial derivative at the origin.)
inline Matrix<BigInt> osculating_rows_exact(const FlagShape& s, int order) {
    std::vector<MPoly> coords = symbolic_embed(s, order);
    std::map<Monomial, std::size_t> row_of;
    for (const auto& c : coords)
        for (const auto& [m, coef] : c.terms)
            if (total_degree(m) <= order) row_of.emplace(m, 0);
    std::size_t idx = 0;
    for (auto& [m, i] : row_of) i = idx++;
    Matrix<BigInt> mat(row_of.size(), coords.size(), BigInt(0));
    for (std::size_t col = 0; col < coords.size(); ++col)
        for (const auto& [m, coef] : coords[col].terms) {
            auto it = row_of.find(m);
            if (it != row_of.end()) mat.at(it->second, col) = coef;
        }
    return mat;
}

// Rank of the span of all partial derivatives of order <= s of the
// parametrization at the chart origin, over the rationals.
inline std::size_t osculating_rank_by_derivatives(const FlagShape& s, int order) {
    return rank_bareiss(osculating_rows_exact(s, order));
}

} // namespace flagrank
