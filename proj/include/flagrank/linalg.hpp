#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "flagrank/errors.hpp"
#include "flagrank/rng.hpp"
#include "flagrank/scalars.hpp"

namespace flagrank {

// ------------------------------------------------------------------------
// Dense matrices over an arbitrary scalar, row-major.  All algorithms take
// the ring/field object as their first argument and never mutate inputs.
// ------------------------------------------------------------------------

template <class E>
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<E> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, const E& fill) : rows(r), cols(c), a(r * c, fill) {}

    E& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const E& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    std::vector<E> row(std::size_t i) const {
        return std::vector<E>(a.begin() + static_cast<std::ptrdiff_t>(i * cols),
                              a.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols));
    }

    static Matrix from_rows(const std::vector<std::vector<E>>& rws, std::size_t ncols) {
        Matrix m;
        m.rows = rws.size();
        m.cols = ncols;
        m.a.reserve(m.rows * ncols);
        for (const auto& r : rws) {
            if (r.size() != ncols) throw UsageError("from_rows: ragged rows");
            m.a.insert(m.a.end(), r.begin(), r.end());
        }
        return m;
    }
};

template <class E>
inline Matrix<E> transpose(const Matrix<E>& m) {
    Matrix<E> t;
    t.rows = m.cols;
    t.cols = m.rows;
    t.a.resize(m.a.size());
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            t.a[j * t.cols + i] = m.at(i, j);
    return t;
}

template <class E>
inline Matrix<E> vstack(const Matrix<E>& top, const Matrix<E>& bottom) {
    if (top.cols != bottom.cols && top.rows != 0 && bottom.rows != 0)
        throw UsageError("vstack: column counts differ");
    Matrix<E> m;
    m.cols = top.rows ? top.cols : bottom.cols;
    m.rows = top.rows + bottom.rows;
    m.a = top.a;
    m.a.insert(m.a.end(), bottom.a.begin(), bottom.a.end());
    return m;
}

// ---------------------------------------------------- fraction-free rank ----

// Bareiss fraction-free elimination; entries stay minors of the input, all
// divisions exact.  This is the rank engine for integer/rational input.
inline std::size_t rank_bareiss(Matrix<BigInt> m) {
    std::size_t r = 0;
    BigInt prev = 1;
    for (std::size_t col = 0; col < m.cols && r < m.rows; ++col) {
        std::size_t piv = r;
        while (piv < m.rows && m.at(piv, col) == 0) ++piv;
        if (piv == m.rows) continue;
        if (piv != r)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
        for (std::size_t i = r + 1; i < m.rows; ++i) {
            for (std::size_t j = col + 1; j < m.cols; ++j)
                m.at(i, j) = (m.at(r, col) * m.at(i, j) - m.at(i, col) * m.at(r, j)) / prev;
            m.at(i, col) = 0;
        }
        prev = m.at(r, col);
        ++r;
    }
    return r;
}

// Clears denominators row by row so Bareiss can run on integers.
inline Matrix<BigInt> clear_denominators(const Matrix<BigRat>& m) {
    Matrix<BigInt> out(m.rows, m.cols, BigInt(0));
    for (std::size_t i = 0; i < m.rows; ++i) {
        BigInt l = 1;
        for (std::size_t j = 0; j < m.cols; ++j)
            l = boost::multiprecision::lcm(l, denominator(m.at(i, j)));
        for (std::size_t j = 0; j < m.cols; ++j) {
            const BigRat& q = m.at(i, j);
            out.at(i, j) = numerator(q) * (l / denominator(q));
        }
    }
    return out;
}

// ------------------------------------------------------------ rank, rref ----

// Rank by plain Gaussian elimination over a field; rationals are routed
// through fraction-free Bareiss instead to avoid intermediate blow-up.
template <FieldLike F>
inline std::size_t rank(const F& f, const Matrix<typename F::Elem>& input) {
    if constexpr (std::is_same_v<F, RationalField>) {
        (void)f;
        return rank_bareiss(clear_denominators(input));
    } else {
        Matrix<typename F::Elem> m = input;
        std::size_t r = 0;
        for (std::size_t col = 0; col < m.cols && r < m.rows; ++col) {
            std::size_t piv = r;
            while (piv < m.rows && f.is_zero(m.at(piv, col))) ++piv;
            if (piv == m.rows) continue;
            if (piv != r)
                for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
            typename F::Elem pinv = f.inv(m.at(r, col));
            for (std::size_t i = r + 1; i < m.rows; ++i) {
                if (f.is_zero(m.at(i, col))) continue;
                typename F::Elem factor = f.mul(m.at(i, col), pinv);
                for (std::size_t j = col; j < m.cols; ++j)
                    m.at(i, j) = f.sub(m.at(i, j), f.mul(factor, m.at(r, j)));
            }
            ++r;
        }
        return r;
    }
}

template <FieldLike F>
struct Echelon {
    Matrix<typename F::Elem> m;       // reduced row echelon, zero rows dropped
    std::vector<std::size_t> pivots;  // pivot column per row
};

template <FieldLike F>
inline Echelon<F> rref(const F& f, const Matrix<typename F::Elem>& input) {
    Matrix<typename F::Elem> m = input;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t col = 0; col < m.cols && r < m.rows; ++col) {
        std::size_t piv = r;
        while (piv < m.rows && f.is_zero(m.at(piv, col))) ++piv;
        if (piv == m.rows) continue;
        if (piv != r)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
        typename F::Elem pinv = f.inv(m.at(r, col));
        for (std::size_t j = col; j < m.cols; ++j) m.at(r, j) = f.mul(m.at(r, j), pinv);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == r || f.is_zero(m.at(i, col))) continue;
            typename F::Elem factor = m.at(i, col);
            for (std::size_t j = col; j < m.cols; ++j)
                m.at(i, j) = f.sub(m.at(i, j), f.mul(factor, m.at(r, j)));
        }
        pivots.push_back(col);
        ++r;
    }
    Echelon<F> e;
    e.m.rows = r;
    e.m.cols = m.cols;
    e.m.a.assign(m.a.begin(), m.a.begin() + static_cast<std::ptrdiff_t>(r * m.cols));
    e.pivots = std::move(pivots);
    return e;
}

// ------------------------------------------------------- subspace bases ----

// A linear subspace of the ambient coordinate space, stored as a reduced
// row echelon basis of its affine cone.  Projective dimension is rank - 1.
template <FieldLike F>
struct SubspaceBasis {
    std::size_t ambient = 0;
    Matrix<typename F::Elem> basis;   // rank x ambient, RREF
    std::vector<std::size_t> pivots;

    std::size_t rank() const { return basis.rows; }
};

template <FieldLike F>
inline SubspaceBasis<F> subspace_from_rows(const F& f, const Matrix<typename F::Elem>& rows) {
    Echelon<F> e = rref(f, rows);
    return SubspaceBasis<F>{rows.cols, std::move(e.m), std::move(e.pivots)};
}

// Reduces v against the basis; returns the residual (zero iff v in span).
template <FieldLike F>
inline std::vector<typename F::Elem> reduce_by_basis(const F& f, const SubspaceBasis<F>& b,
                                                     std::vector<typename F::Elem> v) {
    if (v.size() != b.ambient) throw UsageError("reduce_by_basis: ambient mismatch");
    for (std::size_t i = 0; i < b.rank(); ++i) {
        const typename F::Elem& c = v[b.pivots[i]];
        if (f.is_zero(c)) continue;
        typename F::Elem factor = c;
        for (std::size_t j = b.pivots[i]; j < b.ambient; ++j)
            v[j] = f.sub(v[j], f.mul(factor, b.basis.at(i, j)));
    }
    return v;
}

template <FieldLike F>
inline bool contains(const F& f, const SubspaceBasis<F>& b, const std::vector<typename F::Elem>& v) {
    auto res = reduce_by_basis(f, b, v);
    for (const auto& c : res)
        if (!f.is_zero(c)) return false;
    return true;
}

template <FieldLike F>
inline bool contains(const F& f, const SubspaceBasis<F>& big, const SubspaceBasis<F>& small) {
    for (std::size_t i = 0; i < small.rank(); ++i)
        if (!contains(f, big, small.basis.row(i))) return false;
    return true;
}

template <FieldLike F>
inline SubspaceBasis<F> join(const F& f, const SubspaceBasis<F>& a, const SubspaceBasis<F>& b) {
    if (a.ambient != b.ambient) throw UsageError("join: ambient mismatch");
    return subspace_from_rows(f, vstack(a.basis, b.basis));
}

// dim(A cap B) by the rank formula; the Zassenhaus routine below recovers an
// explicit basis and doubles as an independent cross-check.
template <FieldLike F>
inline std::size_t intersect_dim(const F& f, const SubspaceBasis<F>& a, const SubspaceBasis<F>& b) {
    if (a.ambient != b.ambient) throw UsageError("intersect_dim: ambient mismatch");
    std::size_t stacked = rank(f, vstack(a.basis, b.basis));
    return a.rank() + b.rank() - stacked;
}

// Zassenhaus: rref of [A|A ; B|0]; rows with vanishing left half carry an
// intersection basis in their right half.
template <FieldLike F>
inline SubspaceBasis<F> intersection(const F& f, const SubspaceBasis<F>& a, const SubspaceBasis<F>& b) {
    if (a.ambient != b.ambient) throw UsageError("intersection: ambient mismatch");
    std::size_t N = a.ambient;
    Matrix<typename F::Elem> block(a.rank() + b.rank(), 2 * N, f.zero());
    for (std::size_t i = 0; i < a.rank(); ++i)
        for (std::size_t j = 0; j < N; ++j) {
            block.at(i, j) = a.basis.at(i, j);
            block.at(i, N + j) = a.basis.at(i, j);
        }
    for (std::size_t i = 0; i < b.rank(); ++i)
        for (std::size_t j = 0; j < N; ++j) block.at(a.rank() + i, j) = b.basis.at(i, j);
    Echelon<F> e = rref(f, block);
    std::vector<std::vector<typename F::Elem>> rows;
    for (std::size_t i = 0; i < e.m.rows; ++i) {
        bool left_zero = true;
        for (std::size_t j = 0; j < N && left_zero; ++j)
            if (!f.is_zero(e.m.at(i, j))) left_zero = false;
        if (!left_zero) continue;
        std::vector<typename F::Elem> r(N);
        for (std::size_t j = 0; j < N; ++j) r[j] = e.m.at(i, N + j);
        rows.push_back(std::move(r));
    }
    return subspace_from_rows(f, Matrix<typename F::Elem>::from_rows(rows, N));
}

// Right null space of m (vectors v with m v = 0), one basis vector per row.
template <FieldLike F>
inline Matrix<typename F::Elem> kernel(const F& f, const Matrix<typename F::Elem>& m) {
    Echelon<F> e = rref(f, m);
    std::vector<bool> is_pivot(m.cols, false);
    for (std::size_t p : e.pivots) is_pivot[p] = true;
    std::vector<std::vector<typename F::Elem>> rows;
    for (std::size_t fc = 0; fc < m.cols; ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<typename F::Elem> v(m.cols, f.zero());
        v[fc] = f.one();
        for (std::size_t i = 0; i < e.pivots.size(); ++i)
            v[e.pivots[i]] = f.neg(e.m.at(i, fc));
        rows.push_back(std::move(v));
    }
    return Matrix<typename F::Elem>::from_rows(rows, m.cols);
}

template <FieldLike F>
inline Matrix<typename F::Elem> left_kernel(const F& f, const Matrix<typename F::Elem>& m) {
    return kernel(f, transpose(m));
}

// Intersection with the coordinate subspace supported on `support` (sorted
// column ids): combinations of basis rows vanishing outside the support.
template <FieldLike F>
inline SubspaceBasis<F> intersect_coordinate(const F& f, const SubspaceBasis<F>& a,
                                             const std::vector<std::uint64_t>& support) {
    std::vector<bool> in_support(a.ambient, false);
    for (std::uint64_t c : support) {
        if (c >= a.ambient) throw UsageError("intersect_coordinate: column out of range");
        in_support[static_cast<std::size_t>(c)] = true;
    }
    std::vector<std::size_t> complement;
    for (std::size_t j = 0; j < a.ambient; ++j)
        if (!in_support[j]) complement.push_back(j);
    // rows x with x * (basis restricted to complement) = 0
    Matrix<typename F::Elem> restricted(a.rank(), complement.size(), f.zero());
    for (std::size_t i = 0; i < a.rank(); ++i)
        for (std::size_t j = 0; j < complement.size(); ++j)
            restricted.at(i, j) = a.basis.at(i, complement[j]);
    Matrix<typename F::Elem> combos = left_kernel(f, restricted);
    std::vector<std::vector<typename F::Elem>> rows;
    for (std::size_t i = 0; i < combos.rows; ++i) {
        std::vector<typename F::Elem> v(a.ambient, f.zero());
        for (std::size_t t = 0; t < a.rank(); ++t) {
            if (f.is_zero(combos.at(i, t))) continue;
            for (std::size_t j = 0; j < a.ambient; ++j)
                v[j] = f.add(v[j], f.mul(combos.at(i, t), a.basis.at(t, j)));
        }
        rows.push_back(std::move(v));
    }
    return subspace_from_rows(f, Matrix<typename F::Elem>::from_rows(rows, a.ambient));
}

// ------------------------------------------------- division-free minors ----

// Determinant by dynamic programming over column subsets (Laplace along the
// last row at every level).  Works over any commutative ring, so it serves
// plain fields, jets and polynomial entries alike.  Size capped: the table
// has 2^n entries.
template <RingLike R>
inline typename R::Elem det_ring(const R& ring, const Matrix<typename R::Elem>& m) {
    if (m.rows != m.cols) throw UsageError("det_ring: matrix not square");
    std::size_t n = m.rows;
    if (n == 0) return ring.one();
    if (n > 20) throw CapError("det_ring: size cap exceeded");
    std::vector<typename R::Elem> dp(static_cast<std::size_t>(1) << n, ring.zero());
    dp[0] = ring.one();
    for (std::size_t mask = 1; mask < dp.size(); ++mask) {
        std::size_t row = static_cast<std::size_t>(__builtin_popcountll(mask)) - 1;
        typename R::Elem acc = ring.zero();
        std::size_t bit_index = 0;
        for (std::size_t c = 0; c < n; ++c) {
            if (!(mask & (1ULL << c))) continue;
            typename R::Elem term = ring.mul(m.at(row, c), dp[mask ^ (1ULL << c)]);
            acc = ((row + bit_index) % 2 == 0) ? ring.add(acc, term) : ring.sub(acc, term);
            ++bit_index;
        }
        dp[mask] = acc;
    }
    return dp.back();
}

// ------------------------------------------------------------ flat limit ----

template <FieldLike F>
struct FlatLimit {
    SubspaceBasis<F> basis;     // the limit subspace at t = 0
    std::size_t generic_rank;   // rank of the family at generic t (== basis.rank())
};

// Limit at t -> 0 of the row span of a polynomial matrix, assuming the rank
// is constant for generic t.  Gaussian elimination over the local ring at
// t = 0: whenever the lowest-order coefficient vectors of the working rows
// become dependent, the dependence is used to raise a row's t-valuation, and
// the row re-enters after dividing out the power of t.  The result is the
// span of the lowest-order coefficient vectors.  A specialization at random
// t0 != 0 cross-checks the generic rank.
template <FieldLike F>
inline FlatLimit<F> flat_limit(const PolyRing<F>& pr,
                               const Matrix<typename PolyRing<F>::Elem>& m,
                               std::uint64_t seed = 1) {
    const F& f = pr.base();
    using Poly = typename PolyRing<F>::Elem;
    using Vec = std::vector<typename F::Elem>;
    const std::size_t N = m.cols;

    std::size_t max_deg = 0;
    for (const auto& p : m.a) max_deg = std::max(max_deg, p.size());

    struct Pivot {
        std::vector<Poly> row;
        Vec lead;
        std::size_t col;
    };
    std::vector<Pivot> pivots;

    auto lead_of = [&](const std::vector<Poly>& row) {
        Vec l(N, f.zero());
        for (std::size_t j = 0; j < N; ++j) l[j] = pr.coeff(row[j], 0);
        return l;
    };

    for (std::size_t i = 0; i < m.rows; ++i) {
        std::vector<Poly> row(N);
        for (std::size_t j = 0; j < N; ++j) row[j] = m.at(i, j);
        std::size_t guard = 0;
        while (true) {
            if (++guard > (max_deg + 2) * (m.rows + pivots.size() + 2))
                throw InconsistencyError("flat_limit did not stabilize");
            // strip the common power of t
            std::size_t val = PolyRing<F>::kInfiniteValuation;
            for (const auto& p : row) {
                std::size_t v = pr.valuation(p);
                if (v < val) val = v;
            }
            if (val == PolyRing<F>::kInfiniteValuation) break; // row died: dependent over F(t)
            if (val > 0)
                for (auto& p : row) p = pr.shift_down(p, val);
            Vec lead = lead_of(row);
            // reduce the t^0 layer against existing pivots
            for (const auto& pv : pivots) {
                const typename F::Elem c = lead[pv.col]; // copy: lead mutates below
                if (f.is_zero(c)) continue;
                for (std::size_t j = 0; j < N; ++j) {
                    row[j] = pr.sub(row[j], pr.scale(pv.row[j], c));
                    lead[j] = f.sub(lead[j], f.mul(c, pv.lead[j]));
                }
            }
            std::size_t col = N;
            for (std::size_t j = 0; j < N; ++j)
                if (!f.is_zero(lead[j])) { col = j; break; }
            if (col == N) continue; // t^0 layer cancelled: valuation increased, go again
            typename F::Elem inv = f.inv(lead[col]);
            for (std::size_t j = 0; j < N; ++j) {
                row[j] = pr.scale(row[j], inv);
                lead[j] = f.mul(lead[j], inv);
            }
            pivots.push_back(Pivot{std::move(row), std::move(lead), col});
            break;
        }
    }

    // cross-check: the family's rank at a random nonzero parameter value must
    // match the number of pivots
    Rng rng(seed ^ 0x5bf03635ULL);
    bool confirmed = false;
    for (int attempt = 0; attempt < 3 && !confirmed; ++attempt) {
        typename F::Elem t0 = f.zero();
        while (f.is_zero(t0)) t0 = f.random(rng);
        Matrix<typename F::Elem> sp(m.rows, N, f.zero());
        for (std::size_t i = 0; i < m.rows; ++i)
            for (std::size_t j = 0; j < N; ++j) sp.at(i, j) = pr.eval(m.at(i, j), t0);
        if (rank(f, sp) == pivots.size()) confirmed = true;
    }
    if (!confirmed)
        throw InconsistencyError("flat_limit: generic-rank check failed (family not flat at t=0?)");

    std::vector<std::vector<typename F::Elem>> lead_rows;
    for (const auto& pv : pivots) lead_rows.push_back(pv.lead);
    FlatLimit<F> out{subspace_from_rows(f, Matrix<typename F::Elem>::from_rows(lead_rows, N)),
                     pivots.size()};
    return out;
}

// First-order jet evaluation of a callable over the jet ring: returns value
// and d/dx_var at the base point.
template <FieldLike F, class Fn>
inline std::pair<typename F::Elem, typename F::Elem>
jet_eval(const F& f, Fn&& fn, const std::vector<typename F::Elem>& base, std::size_t var) {
    JetRing<F> jr(f, 1);
    std::vector<typename JetRing<F>::Elem> pt;
    pt.reserve(base.size());
    for (std::size_t i = 0; i < base.size(); ++i)
        pt.push_back(i == var ? jr.variable(base[i], 0) : jr.constant(base[i]));
    typename JetRing<F>::Elem r = fn(jr, pt);
    return {r.v, r.g.at(0)};
}

} // namespace flagrank
