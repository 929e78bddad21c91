#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "flagrank/combinatorics.hpp"
#include "flagrank/config.hpp"
#include "flagrank/embedding.hpp"
#include "flagrank/linalg.hpp"
#include "flagrank/secant.hpp"
#include "flagrank/spans.hpp"

namespace flagrank {

// ------------------------------------------------------------------------
// Projection centers spanned by osculating spaces at staircase points.
// ------------------------------------------------------------------------

struct ProjectionCenter {
    FlagShape shape;
    std::vector<MultiIndex> points;      // the first m staircase points
    std::vector<int> orders;             // osculating order at each point
    std::vector<std::uint64_t> support;  // union of the distance balls, sorted
    std::uint64_t residual = 0;          // ambient minus |support|
    SubspaceBasis<PrimeField> basis;     // join of the osculating spans, mod prime
    std::uint64_t prime = 0;
};

inline int max_projection_order(const FlagShape& s) { return s.diameter() - 1; }

// Center from the first m staircase points with one osculating order each.
// Orders are capped one below the diameter: projecting from the saturated
// osculating span would collapse the whole variety.
inline ProjectionCenter build_center(const FlagShape& s, const std::vector<int>& orders,
                                     const EngineOptions& o) {
    int m = static_cast<int>(orders.size());
    if (m > s.alpha())
        throw UsageError("build_center: " + std::to_string(m) + " points exceed alpha = " +
                         std::to_string(s.alpha()));
    for (int ord : orders)
        if (ord < 0 || ord > max_projection_order(s))
            throw UsageError("build_center: order " + std::to_string(ord) +
                             " outside [0, " + std::to_string(max_projection_order(s)) + "]");
    ProjectionCenter c;
    c.shape = s;
    c.orders = orders;
    c.prime = o.prime;
    for (int j = 1; j <= m; ++j) {
        MultiIndex I;
        int base = (s.kr() + 1) * (j - 1);
        for (int i = 0; i < s.r(); ++i) {
            SingleIndex part;
            for (int v = 0; v <= s.ks[static_cast<std::size_t>(i)]; ++v) part.push_back(base + v);
            I.push_back(std::move(part));
        }
        c.points.push_back(std::move(I));
    }
    std::set<std::uint64_t> sup;
    for (int j = 0; j < m; ++j) {
        std::vector<std::uint64_t> cols =
            ball_columns(s, c.points[static_cast<std::size_t>(j)], orders[static_cast<std::size_t>(j)]);
        sup.insert(cols.begin(), cols.end());
    }
    c.support.assign(sup.begin(), sup.end());
    std::uint64_t ambient = to_u64_checked(ambient_affine(s), "ambient");
    c.residual = ambient - c.support.size();

    PrimeField f(o.prime);
    if (s.mode == Mode::Product) {
        c.basis = coordinate_span_basis(f, static_cast<std::size_t>(ambient), c.support);
    } else {
        c.basis = SubspaceBasis<PrimeField>{static_cast<std::size_t>(ambient),
                                            Matrix<std::uint64_t>(0, static_cast<std::size_t>(ambient), 0),
                                            {}};
        if (m > 0) {
            Rng rng(mix_seed(o.seed, "center-span|" + shape_to_string(s)));
            SubspaceBasis<PrimeField> span = linear_span(f, s, rng);
            for (int j = 0; j < m; ++j) {
                SubspaceBasis<PrimeField> part =
                    osculating_span_modp(f, s, c.points[static_cast<std::size_t>(j)],
                                         orders[static_cast<std::size_t>(j)], &span);
                c.basis = c.basis.rank() == 0 ? part : join(f, c.basis, part);
            }
        }
    }
    return c;
}

// Generic finiteness of the projection away from the coordinate span
// enclosing the center: the differential at a random point must keep full
// rank after the supported columns are deleted.  (The enclosing span
// contains the center, so finiteness here certifies finiteness of the
// actual osculating projection.)
inline bool generic_finiteness(const FlagShape& s, const ProjectionCenter& c,
                               const EngineOptions& o) {
    if (!(c.shape == s)) throw UsageError("generic_finiteness: center built for another shape");
    std::uint64_t dim1 = static_cast<std::uint64_t>(flag_dim(s)) + 1;
    if (c.residual < dim1 - 1)
        throw UsageError("generic_finiteness: residual " + std::to_string(c.residual) +
                         " below the variety dimension " + std::to_string(dim1 - 1));
    std::size_t ambient = static_cast<std::size_t>(to_u64_checked(ambient_affine(s), "ambient"));
    std::vector<bool> drop(ambient, false);
    for (std::uint64_t col : c.support) drop[static_cast<std::size_t>(col)] = true;
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < ambient; ++j)
        if (!drop[j]) keep.push_back(j);

    PrimeField f(o.prime);
    for (int attempt = 0; attempt < 3; ++attempt) {
        Rng rng(mix_seed(o.seed, "proj|" + shape_to_string(s), static_cast<std::uint64_t>(attempt)));
        Matrix<std::uint64_t> rows = tangent_rows(f, s, random_full_chart(f, s, rng));
        if (rank(f, rows) != dim1) continue; // degenerate sample, draw again
        Matrix<std::uint64_t> projected(rows.rows, keep.size(), 0);
        for (std::size_t i = 0; i < rows.rows; ++i)
            for (std::size_t j = 0; j < keep.size(); ++j)
                projected.at(i, j) = rows.at(i, keep[j]);
        return rank(f, projected) == dim1;
    }
    throw DegenerateSampleError("generic_finiteness: no nondegenerate sample in 3 attempts");
}

// ------------------------------------------------------------------------
// Degeneration curves.  gamma(t) shears the first coordinate block:
// e_a -> e_a + t e_{a+offset} for a <= moved_max, identity elsewhere.
// ------------------------------------------------------------------------

struct CurveShift {
    int moved_max = 0; // indices 0..moved_max move
    int offset = 0;
};

inline CurveShift strong2_curve(const FlagShape& s) {
    if (s.n < 2 * s.kr() + 1)
        throw UsageError("degeneration curve needs n >= 2k_r+1");
    return CurveShift{s.kr(), s.kr() + 1};
}

// Curves aiming the first staircase point at each of the others.
inline std::vector<CurveShift> alpha_curves(const FlagShape& s) {
    if (s.alpha() < 2) throw UsageError("alpha-osculating curves need alpha >= 2");
    std::vector<CurveShift> cs;
    for (int j = 2; j <= s.alpha(); ++j) cs.push_back(CurveShift{s.kr(), (j - 1) * (s.kr() + 1)});
    return cs;
}

namespace detail {

struct CurveTerm {
    SingleIndex part;
    int degree = 0;
    int sign = 1;
};

// Expansion of wedge_{a in part} (e_a [+ t e_{a+offset}]) into wedge basis
// terms: choose a subset to shift, drop collisions, sort and count
// inversions for the sign.
inline std::vector<CurveTerm> expand_factor(const SingleIndex& part, const CurveShift& c, int n) {
    std::size_t sz = part.size();
    std::vector<CurveTerm> out;
    for (std::uint32_t mask = 0; mask < (1u << sz); ++mask) {
        SingleIndex b;
        b.reserve(sz);
        bool dead = false;
        int degree = 0;
        for (std::size_t i = 0; i < sz && !dead; ++i) {
            int a = part[i];
            if (mask & (1u << i)) {
                if (a > c.moved_max) { dead = true; break; } // no t-term on fixed vectors
                a += c.offset;
                if (a > n) { dead = true; break; }
                ++degree;
            }
            b.push_back(a);
        }
        if (dead) continue;
        int inversions = 0;
        bool dup = false;
        for (std::size_t i = 0; i < sz && !dup; ++i)
            for (std::size_t j = i + 1; j < sz; ++j) {
                if (b[i] == b[j]) { dup = true; break; }
                if (b[i] > b[j]) ++inversions;
            }
        if (dup) continue;
        SingleIndex sorted = b;
        std::sort(sorted.begin(), sorted.end());
        out.push_back(CurveTerm{std::move(sorted), degree, inversions % 2 == 0 ? 1 : -1});
    }
    return out;
}

} // namespace detail

// Image of the ambient basis vector e_J under the map the curve induces on
// the whole embedding ambient, with polynomial coordinates in t.
inline std::vector<PolyRing<RationalField>::Elem>
curve_image_of_index(const PolyRing<RationalField>& P, const FlagShape& s, const MultiIndex& J,
                     const CurveShift& c) {
    using Poly = PolyRing<RationalField>::Elem;
    std::vector<std::vector<detail::CurveTerm>> per_factor;
    for (const SingleIndex& part : J) per_factor.push_back(detail::expand_factor(part, c, s.n));
    std::size_t ambient = static_cast<std::size_t>(to_u64_checked(ambient_affine(s), "ambient"));
    std::vector<Poly> out(ambient, P.zero());
    std::vector<std::size_t> odo(per_factor.size(), 0);
    while (true) {
        MultiIndex parts;
        int degree = 0, sign = 1;
        for (std::size_t i = 0; i < per_factor.size(); ++i) {
            const detail::CurveTerm& t = per_factor[i][odo[i]];
            parts.push_back(t.part);
            degree += t.degree;
            sign *= t.sign;
        }
        std::size_t col = static_cast<std::size_t>(column_of(s, parts));
        out[col] = P.add(out[col], P.monomial(BigRat(sign), static_cast<std::size_t>(degree)));
        std::size_t i = per_factor.size();
        while (i > 0) {
            --i;
            if (++odo[i] < per_factor[i].size()) break;
            odo[i] = 0;
            if (i == 0) return out;
        }
    }
}

// ------------------------------------------------------------------------
// Flat-limit regularity checks.  The span of osculating spaces at the first
// staircase point and along explicit degeneration curves must degenerate,
// at t = 0, into a single higher-order osculating space at the fixed point.
// ------------------------------------------------------------------------

namespace detail {

inline MultiIndex first_staircase_point(const FlagShape& s) {
    MultiIndex I;
    for (int k : s.ks) {
        SingleIndex part;
        for (int v = 0; v <= k; ++v) part.push_back(v);
        I.push_back(std::move(part));
    }
    return I;
}

// Containment of every limit row in the order-`target` osculating space at
// the first staircase point, checked exactly over the rationals.
inline bool limit_inside_osculating(const FlagShape& s, const SubspaceBasis<RationalField>& limit,
                                    int target) {
    MultiIndex I1 = first_staircase_point(s);
    std::vector<std::uint64_t> cols = ball_columns(s, I1, target);
    if (s.mode == Mode::Product) {
        std::vector<bool> ok(limit.ambient, false);
        for (std::uint64_t c : cols) ok[static_cast<std::size_t>(c)] = true;
        for (std::size_t i = 0; i < limit.rank(); ++i)
            for (std::size_t j = 0; j < limit.ambient; ++j)
                if (!ok[j] && limit.basis.at(i, j) != 0) return false;
        return true;
    }
    Matrix<BigInt> osc = osculating_rows_exact(s, target);
    Matrix<BigRat> oscq(osc.rows, osc.cols, BigRat(0));
    for (std::size_t i = 0; i < osc.rows; ++i)
        for (std::size_t j = 0; j < osc.cols; ++j) oscq.at(i, j) = BigRat(osc.at(i, j));
    RationalField q;
    SubspaceBasis<RationalField> target_basis = subspace_from_rows(q, oscq);
    for (std::size_t i = 0; i < limit.rank(); ++i)
        if (!contains(q, target_basis, limit.basis.row(i))) return false;
    return true;
}

// Shared assembly: constant rows of T^{s1} at the staircase point, plus the
// exact T^{s2} rows pushed through each curve's induced ambient map.  (The
// induced map is linear, so pushing a spanning set of T^{s2} forward spans
// T^{s2} at the moving point.)
inline bool flatlimit_check(const FlagShape& s, int s1, int s2,
                            const std::vector<CurveShift>& curves, int target) {
    if (s1 < 0 || s2 < 0) throw UsageError("osculating orders must be nonnegative");
    RationalField qf;
    PolyRing<RationalField> P(qf);
    using Poly = PolyRing<RationalField>::Elem;
    std::size_t ambient = static_cast<std::size_t>(to_u64_checked(ambient_affine(s), "ambient"));

    std::vector<std::vector<Poly>> rows;
    Matrix<BigInt> fixed = osculating_rows_exact(s, s1);
    for (std::size_t i = 0; i < fixed.rows; ++i) {
        std::vector<Poly> row(ambient, P.zero());
        for (std::size_t j = 0; j < ambient; ++j)
            if (fixed.at(i, j) != 0) row[j] = P.constant(BigRat(fixed.at(i, j)));
        rows.push_back(std::move(row));
    }
    Matrix<BigInt> moving = osculating_rows_exact(s, s2);
    for (const CurveShift& c : curves) {
        std::map<std::size_t, std::vector<Poly>> image; // column -> curve image
        for (std::size_t i = 0; i < moving.rows; ++i) {
            std::vector<Poly> row(ambient, P.zero());
            for (std::size_t j = 0; j < ambient; ++j) {
                if (moving.at(i, j) == 0) continue;
                auto it = image.find(j);
                if (it == image.end())
                    it = image.emplace(j, curve_image_of_index(P, s, index_of(s, j), c)).first;
                BigRat coef(moving.at(i, j));
                for (std::size_t col = 0; col < ambient; ++col)
                    if (!P.is_zero(it->second[col]))
                        row[col] = P.add(row[col], P.scale(it->second[col], coef));
            }
            rows.push_back(std::move(row));
        }
    }
    Matrix<Poly> m = Matrix<Poly>::from_rows(rows, ambient);
    FlatLimit<RationalField> lim = flat_limit(P, m);
    return limit_inside_osculating(s, lim.basis, target);
}

} // namespace detail

// The span of T^{s1} at the first staircase point and T^{s2} at a point
// sliding along the block-shear curve degenerates into T^{s1+s2+1} at the
// fixed point.  Orders past the saturation radius are fine: the target is
// then the whole span and the containment is immediate.
inline bool strong2_flatlimit_check(const FlagShape& s, int s1, int s2) {
    return detail::flatlimit_check(s, s1, s2, {strong2_curve(s)}, s1 + s2 + 1);
}

// Same degeneration with all alpha-1 staircase curves moving at once:
// tangency order s at every point collapses into T^{2s+1}.
inline bool alpha_osc_flatlimit_check(const FlagShape& s, int order) {
    return detail::flatlimit_check(s, order, order, alpha_curves(s), 2 * order + 1);
}

} // namespace flagrank
