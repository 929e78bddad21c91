#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flagrank/combinatorics.hpp"
#include "flagrank/embedding.hpp"
#include "flagrank/linalg.hpp"
#include "flagrank/scalars.hpp"
#include "flagrank/shape.hpp"

namespace flagrank {

// ------------------------------------------------------------------------
// Linear spans.  A product of Grassmannians spans its whole multi-Pluecker
// ambient space; a flag variety spans only the irreducible module cut out
// inside it, whose dimension the Weyl character formula delivers exactly.
// ------------------------------------------------------------------------

// Affine dimension of the span of a flag variety: the dimension of the
// irreducible GL(n+1) representation with fundamental-weight multiplicity
// one at each k_i + 1, as a product formula over the positive roots.
inline BigInt weyl_dim(const FlagShape& s) {
    if (s.mode != Mode::Flag) throw UsageError("weyl_dim: defined for flag shapes only");
    std::vector<BigInt> a(static_cast<std::size_t>(s.n + 2), BigInt(0));
    for (int k : s.ks) a[static_cast<std::size_t>(k + 1)] += 1;
    BigRat prod(1);
    for (int i = 1; i <= s.n + 1; ++i) {
        BigInt partial(0);
        for (int j = i + 1; j <= s.n + 1; ++j) {
            partial += a[static_cast<std::size_t>(j - 1)];
            prod *= BigRat(partial + (j - i), BigInt(j - i));
        }
    }
    if (boost::multiprecision::denominator(prod) != 1)
        throw InconsistencyError("weyl_dim: non-integral product");
    return boost::multiprecision::numerator(prod);
}

// Affine dimension of the linear span in the ambient of the embedding.
inline BigInt span_dim_affine(const FlagShape& s) {
    return s.mode == Mode::Product ? ambient_affine(s) : weyl_dim(s);
}

// Validates a torus-point label: one ascending part of size k_i+1 per
// factor, and nested parts for flag shapes.
inline void require_valid_center(const FlagShape& s, const MultiIndex& I) {
    if (!is_valid_multi(s, I))
        throw UsageError("center is not a valid multi-index for shape " + shape_to_string(s));
    if (s.mode == Mode::Flag && !is_nested(I))
        throw UsageError("center of a flag shape must have nested parts");
}

// Span of the flag variety over F_p, as an explicit row-reduced basis,
// obtained by sampling random points until the rank agrees with the
// representation-theoretic dimension.
inline SubspaceBasis<PrimeField> linear_span(const PrimeField& f, const FlagShape& s, Rng& rng) {
    if (s.mode == Mode::Product)
        throw UsageError("linear_span: a product shape spans the full ambient space");
    std::uint64_t target = to_u64_checked(span_dim_affine(s), "span dimension");
    std::uint64_t ambient = to_u64_checked(ambient_affine(s), "ambient dimension");
    std::vector<std::vector<std::uint64_t>> rows;
    auto add_points = [&](std::size_t count) {
        for (std::size_t i = 0; i < count; ++i)
            rows.push_back(embed(f, s, random_full_chart(f, s, rng)));
    };
    add_points(static_cast<std::size_t>(target) + 5);
    SubspaceBasis<PrimeField> basis =
        subspace_from_rows(f, Matrix<std::uint64_t>::from_rows(rows, ambient));
    if (basis.rank() < target) { // vanishingly unlikely over a 61-bit field
        add_points(static_cast<std::size_t>(target) / 2 + 8);
        basis = subspace_from_rows(f, Matrix<std::uint64_t>::from_rows(rows, ambient));
    }
    if (basis.rank() != target)
        throw InconsistencyError("linear_span: sampled rank " + std::to_string(basis.rank()) +
                                 " never reached the predicted span dimension " +
                                 std::to_string(target) + " for " + shape_to_string(s));
    return basis;
}

// ------------------------------------------------------------------------
// Osculating spaces.
// ------------------------------------------------------------------------

// Closed-form osculating dimension of a product of Grassmannians at any
// point: sum over per-factor derivative orders (s_1,...,s_r) with total at
// most `order` of prod C(n-k_i, s_i) * C(k_i+1, s_i).  Coincides with the
// size of the distance ball around any index.
inline BigInt osc_dim_formula(const FlagShape& s, int order) {
    BigInt total(0);
    std::vector<int> caps;
    for (int k : s.ks) caps.push_back(std::min(k + 1, s.n - k));
    auto rec = [&](auto&& self, std::size_t i, int left, BigInt partial) -> void {
        if (i == caps.size()) {
            total += partial;
            return;
        }
        int k = s.ks[i];
        for (int si = 0; si <= std::min(caps[i], left); ++si)
            self(self, i + 1, left - si,
                 partial * binomial_big(s.n - k, si) * binomial_big(k + 1, si));
    };
    rec(rec, 0, order < 0 ? 0 : order, BigInt(1));
    return total;
}

// Basis of the coordinate subspace spanned by the given columns (already in
// reduced form: unit rows).
template <FieldLike F>
inline SubspaceBasis<F> coordinate_span_basis(const F& f, std::size_t ambient,
                                              const std::vector<std::uint64_t>& columns) {
    Matrix<typename F::Elem> m(columns.size(), ambient, f.zero());
    std::vector<std::size_t> pivots;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] >= ambient) throw UsageError("coordinate_span_basis: column out of range");
        if (i > 0 && columns[i] <= columns[i - 1])
            throw UsageError("coordinate_span_basis: columns must be strictly increasing");
        m.at(i, static_cast<std::size_t>(columns[i])) = f.one();
        pivots.push_back(static_cast<std::size_t>(columns[i]));
    }
    return SubspaceBasis<F>{ambient, std::move(m), std::move(pivots)};
}

// Order-s osculating space at the torus point e_I over F_p.  For a product
// this is exactly the coordinate span of the radius-s ball around I; for a
// flag it is the intersection of that span with the span of the variety,
// which the caller supplies (it does not depend on I).
inline SubspaceBasis<PrimeField> osculating_span_modp(const PrimeField& f, const FlagShape& s,
                                                      const MultiIndex& I, int order,
                                                      const SubspaceBasis<PrimeField>* span) {
    require_valid_center(s, I);
    std::vector<std::uint64_t> cols = ball_columns(s, I, order);
    std::size_t ambient = static_cast<std::size_t>(to_u64_checked(ambient_affine(s), "ambient"));
    if (s.mode == Mode::Product) return coordinate_span_basis(f, ambient, cols);
    if (span == nullptr)
        throw UsageError("osculating_span_modp: flag shapes need the variety span");
    if (span->ambient != ambient) throw UsageError("osculating_span_modp: span ambient mismatch");
    return intersect_coordinate(f, *span, cols);
}

// Cross-checks the two independent routes to the osculating dimension:
// (a) brute-force symbolic differentiation of the staircase chart over the
//     rationals, and
// (b) the mod-p span intersection above.
// Returns true when the ranks agree; the flag span is computed on demand
// when the caller has none at hand.
inline bool well_behaved_check(const PrimeField& f, const FlagShape& s, const MultiIndex& I,
                               int order, const SubspaceBasis<PrimeField>* span = nullptr,
                               std::size_t* rank_out = nullptr) {
    std::size_t exact = osculating_rank_by_derivatives(s, order);
    SubspaceBasis<PrimeField> own{0, Matrix<PrimeField::Elem>(0, 0, f.zero()), {}};
    if (s.mode == Mode::Flag && span == nullptr) {
        Rng rng(mix_seed(1, "wb-span|" + shape_to_string(s)));
        own = linear_span(f, s, rng);
        span = &own;
    }
    std::size_t modp = osculating_span_modp(f, s, I, order, span).rank();
    if (rank_out) *rank_out = modp;
    return exact == modp;
}

} // namespace flagrank
