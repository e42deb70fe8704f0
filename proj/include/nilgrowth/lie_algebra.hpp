#ifndef NILGROWTH_LIE_ALGEBRA_HPP
#define NILGROWTH_LIE_ALGEBRA_HPP

// Finite-dimensional rational nilpotent Lie algebras: validation, lower
// central series, homogeneous dimension, xi-degree, central quotients, and
// a sampled distance between marked algebras.

#include "nilgrowth/bch.hpp"
#include "nilgrowth/hall_basis.hpp"
#include "nilgrowth/linalg.hpp"
#include "nilgrowth/rational.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace nilgrowth {

struct LieAlgebra {
    std::vector<std::string> labels;
    BracketOps ops;  // ops.step holds the nilpotency class once validated

    int dim() const { return ops.dim; }
};

// Sparse bracket description: ([e_i, e_j] for i < j, 0-based) -> coordinates.
using BracketEntry = std::tuple<int, int, RationalVector>;

inline LieAlgebra make_lie_algebra(int dim, std::vector<BracketEntry> brackets,
                                   std::vector<std::string> labels = {}) {
    if (dim < 0) throw std::invalid_argument("negative dimension");
    LieAlgebra out;
    out.ops.dim = dim;
    out.ops.step = 1;
    out.ops.table.assign(static_cast<std::size_t>(dim) * dim, RationalVector(dim));
    for (auto& [i, j, v] : brackets) {
        if (i < 0 || j < 0 || i >= dim || j >= dim || i >= j) {
            throw std::invalid_argument("bracket entries must have 0 <= i < j < dim");
        }
        if (static_cast<int>(v.size()) != dim) throw std::invalid_argument("bracket coordinate length mismatch");
        out.ops.table[static_cast<std::size_t>(i) * dim + j] = v;
        for (auto& c : v) c = -c;
        out.ops.table[static_cast<std::size_t>(j) * dim + i] = std::move(v);
    }
    if (labels.empty()) {
        for (int i = 1; i <= dim; ++i) labels.push_back("e" + std::to_string(i));
    }
    if (static_cast<int>(labels.size()) != dim) throw std::invalid_argument("label count mismatch");
    out.labels = std::move(labels);
    return out;
}

// The free s-nilpotent algebra on d generators as a concrete LieAlgebra,
// labeled by its basic commutators.
inline LieAlgebra lie_algebra_from_structure_table(const StructureTable& table) {
    LieAlgebra out;
    out.ops = table.ops();
    for (int i = 0; i < table.dim(); ++i) out.labels.push_back(table.hall().label(i));
    return out;
}

struct ValidationReport {
    bool ok = true;
    std::string message;
};

namespace detail {

// Span of [L, S] for a subspace S.
inline Subspace bracket_span(const LieAlgebra& l, const Subspace& s) {
    RationalMatrix generators;
    RationalVector e(static_cast<std::size_t>(l.dim()));
    for (int i = 0; i < l.dim(); ++i) {
        for (const auto& b : s.basis()) {
            e.assign(static_cast<std::size_t>(l.dim()), Rational(0));
            e[static_cast<std::size_t>(i)] = Rational(1);
            generators.push_back(l.ops.bracket_elements(e, b));
        }
    }
    return Subspace::span(std::move(generators), l.dim());
}

}  // namespace detail

// Lower central series c^1 = L ⊇ c^2 = [L, c^1] ⊇ ... down to and
// including the zero subspace. Throws if the series stabilizes above zero.
inline std::vector<Subspace> lower_central_series(const LieAlgebra& l) {
    std::vector<Subspace> chain = {Subspace::full(l.dim())};
    while (chain.back().dim() > 0) {
        Subspace next = detail::bracket_span(l, chain.back());
        if (next.dim() == chain.back().dim()) {
            throw std::invalid_argument("algebra is not nilpotent: lower central series stabilizes at dimension " +
                                        std::to_string(next.dim()));
        }
        chain.push_back(std::move(next));
    }
    return chain;
}

// a_k = dim c^k - dim c^{k+1}, for k = 1 .. nilpotency class.
inline std::vector<int> lcs_ranks(const LieAlgebra& l) {
    std::vector<Subspace> chain = lower_central_series(l);
    std::vector<int> a;
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) a.push_back(chain[k].dim() - chain[k + 1].dim());
    return a;
}

inline ValidationReport validate(const LieAlgebra& l) {
    const int n = l.dim();
    auto unit = [n](int i) {
        RationalVector v(static_cast<std::size_t>(n));
        v[static_cast<std::size_t>(i)] = Rational(1);
        return v;
    };
    for (int i = 0; i < n; ++i) {
        if (!vector_is_zero(l.ops.bracket(i, i))) {
            return {false, "[e" + std::to_string(i + 1) + ",e" + std::to_string(i + 1) + "] is nonzero"};
        }
        for (int j = 0; j < i; ++j) {
            if (!vector_is_zero(vector_add(l.ops.bracket(i, j), l.ops.bracket(j, i)))) {
                return {false, "antisymmetry fails at (e" + std::to_string(i + 1) + ",e" + std::to_string(j + 1) + ")"};
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int k = j + 1; k < n; ++k) {
                RationalVector acc = l.ops.bracket_elements(l.ops.bracket(i, j), unit(k));
                RationalVector t2 = l.ops.bracket_elements(l.ops.bracket(j, k), unit(i));
                RationalVector t3 = l.ops.bracket_elements(l.ops.bracket(k, i), unit(j));
                for (int t = 0; t < n; ++t) acc[t] += t2[t] + t3[t];
                if (!vector_is_zero(acc)) {
                    return {false, "Jacobi identity fails on (e" + std::to_string(i + 1) + ",e" + std::to_string(j + 1) +
                                       ",e" + std::to_string(k + 1) + ")"};
                }
            }
        }
    }
    try {
        lower_central_series(l);
    } catch (const std::invalid_argument& e) {
        return {false, e.what()};
    }
    return {true, "ok"};
}

// Validate and stamp the nilpotency class into ops.step (BCH products over
// the algebra truncate at the class).
inline LieAlgebra validated(LieAlgebra l) {
    ValidationReport report = validate(l);
    if (!report.ok) throw std::invalid_argument("invalid Lie algebra: " + report.message);
    l.ops.step = std::max<int>(1, static_cast<int>(lower_central_series(l).size()) - 1);
    return l;
}

inline int homogeneous_dimension(const LieAlgebra& l) {
    std::vector<int> a = lcs_ranks(l);
    int h = 0;
    for (std::size_t k = 0; k < a.size(); ++k) h += static_cast<int>(k + 1) * a[k];
    return h;
}

// Largest k with u in c^k.
inline int xi_degree(const LieAlgebra& l, const RationalVector& u) {
    if (vector_is_zero(u)) throw std::invalid_argument("xi degree of zero is undefined");
    std::vector<Subspace> chain = lower_central_series(l);
    int best = 0;
    for (std::size_t k = 0; k < chain.size(); ++k) {
        if (chain[k].contains(u)) best = static_cast<int>(k + 1);
    }
    return best;
}

inline bool is_central(const LieAlgebra& l, const RationalVector& u) {
    RationalVector e(static_cast<std::size_t>(l.dim()));
    for (int i = 0; i < l.dim(); ++i) {
        e.assign(static_cast<std::size_t>(l.dim()), Rational(0));
        e[static_cast<std::size_t>(i)] = Rational(1);
        if (!vector_is_zero(l.ops.bracket_elements(e, u))) return false;
    }
    return true;
}

// Basis of the center as a subspace.
inline Subspace center(const LieAlgebra& l) {
    RationalMatrix stacked;  // rows of all ad(e_i), stacked: u central iff all rows annihilate u
    for (int i = 0; i < l.dim(); ++i) {
        for (int k = 0; k < l.dim(); ++k) {
            RationalVector row(static_cast<std::size_t>(l.dim()));
            for (int j = 0; j < l.dim(); ++j) row[static_cast<std::size_t>(j)] = l.ops.bracket(i, j)[static_cast<std::size_t>(k)];
            stacked.push_back(std::move(row));
        }
    }
    return nullspace(std::move(stacked), l.dim());
}

// Quotient by the line spanned by a central u; the lemma
// hdim(L/<u>) = hdim(L) - xi(u) is asserted on the result.
inline LieAlgebra central_quotient(const LieAlgebra& l, const RationalVector& u) {
    if (vector_is_zero(u)) throw std::invalid_argument("cannot quotient by zero");
    if (!is_central(l, u)) throw std::invalid_argument("quotient vector is not central");
    const int n = l.dim();
    int p = 0;
    while (u[static_cast<std::size_t>(p)].is_zero()) ++p;
    auto project = [&](const RationalVector& v) {
        Rational factor = v[static_cast<std::size_t>(p)] / u[static_cast<std::size_t>(p)];
        RationalVector out;
        out.reserve(static_cast<std::size_t>(n) - 1);
        for (int c = 0; c < n; ++c) {
            if (c == p) continue;
            out.push_back(v[static_cast<std::size_t>(c)] - factor * u[static_cast<std::size_t>(c)]);
        }
        return out;
    };
    std::vector<int> kept;
    for (int c = 0; c < n; ++c) {
        if (c != p) kept.push_back(c);
    }
    std::vector<BracketEntry> brackets;
    for (std::size_t a = 0; a < kept.size(); ++a) {
        for (std::size_t b = a + 1; b < kept.size(); ++b) {
            RationalVector img = project(l.ops.bracket(kept[a], kept[b]));
            if (!vector_is_zero(img)) brackets.emplace_back(static_cast<int>(a), static_cast<int>(b), std::move(img));
        }
    }
    std::vector<std::string> labels;
    for (int c : kept) labels.push_back(l.labels[static_cast<std::size_t>(c)]);
    LieAlgebra out = validated(make_lie_algebra(n - 1, std::move(brackets), std::move(labels)));

    std::vector<int> before = lcs_ranks(l), after = lcs_ranks(out);
    after.resize(before.size(), 0);
    int xi = xi_degree(l, u);
    if (homogeneous_dimension(out) != homogeneous_dimension(l) - xi) {
        throw std::logic_error("central quotient did not drop hdim by xi(u)");
    }
    for (std::size_t k = 0; k < before.size(); ++k) {
        int expected = before[k] - (static_cast<int>(k + 1) == xi ? 1 : 0);
        if (after[k] != expected) throw std::logic_error("central quotient changed a_k away from xi(u)");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Marked algebras: a target algebra plus d marked generators, inducing
// pi: (free d,s algebra) -> algebra.

struct MarkedLieAlgebra {
    LieAlgebra algebra;
    RationalMatrix marks;  // d coordinate vectors in the algebra
    int s = 1;             // ambient free nilpotency step
};

// Image of every basic commutator of the ambient free algebra under pi.
inline RationalMatrix mark_images(const MarkedLieAlgebra& m, const HallBasis& basis) {
    if (static_cast<int>(m.marks.size()) != basis.d()) throw std::invalid_argument("mark count does not match basis");
    RationalMatrix images;
    images.reserve(static_cast<std::size_t>(basis.dim()));
    for (int i = 0; i < basis.dim(); ++i) {
        const auto& c = basis.at(i);
        if (c.is_generator()) {
            images.push_back(m.marks[static_cast<std::size_t>(i)]);
        } else {
            images.push_back(m.algebra.ops.bracket_elements(images[static_cast<std::size_t>(c.left)],
                                                            images[static_cast<std::size_t>(c.right)]));
        }
    }
    return images;
}

inline bool marks_generate(const MarkedLieAlgebra& m) {
    HallBasis basis(static_cast<int>(m.marks.size()), m.s);
    return Subspace::span(mark_images(m, basis), m.algebra.dim()).dim() == m.algebra.dim();
}

// ker pi as a subspace of the ambient free algebra's coordinates.
inline Subspace marked_kernel(const MarkedLieAlgebra& m, const HallBasis& basis) {
    RationalMatrix images = mark_images(m, basis);
    const int n = m.algebra.dim();
    const int r = basis.dim();
    RationalMatrix rows(static_cast<std::size_t>(n), RationalVector(static_cast<std::size_t>(r)));
    for (int t = 0; t < n; ++t) {
        for (int i = 0; i < r; ++i) rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] = images[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
    }
    return nullspace(std::move(rows), r);
}

namespace detail {

inline Rational l1_norm(const RationalVector& v) {
    Rational out(0);
    for (const auto& x : v) out += x.abs();
    return out;
}

// Exact min over z in the subspace of |a - z|_1. A least-absolute-deviations
// optimum is attained with at least dim(S) zero residuals, so it suffices to
// scan coordinate subsets that invert the basis.
inline Rational l1_distance_to_subspace(const RationalVector& a, const Subspace& s) {
    const int m = s.dim();
    if (m == 0) return l1_norm(a);
    const int r = s.ambient_dim();
    std::vector<int> idx(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
    Rational best = l1_norm(a);  // z = 0 is always available
    while (true) {
        RationalMatrix sq(static_cast<std::size_t>(m), RationalVector(static_cast<std::size_t>(m)));
        RationalVector rhs(static_cast<std::size_t>(m));
        for (int row = 0; row < m; ++row) {
            int coord = idx[static_cast<std::size_t>(row)];
            for (int col = 0; col < m; ++col) {
                sq[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] =
                    s.basis()[static_cast<std::size_t>(col)][static_cast<std::size_t>(coord)];
            }
            rhs[static_cast<std::size_t>(row)] = a[static_cast<std::size_t>(coord)];
        }
        if (auto t = solve_square(sq, rhs)) {
            RationalVector residual = a;
            for (int col = 0; col < m; ++col) {
                for (int c = 0; c < r; ++c) {
                    residual[static_cast<std::size_t>(c)] -=
                        (*t)[static_cast<std::size_t>(col)] * s.basis()[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
                }
            }
            Rational d = l1_norm(residual);
            if (d < best) best = d;
        }
        // next combination
        int i = m - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == r - m + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < m; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return best;
}

// All primitive sign-canonical integer directions in [-g, g]^m.
inline std::vector<std::vector<int>> sample_directions(int m, int g) {
    double count = 1;
    for (int i = 0; i < m; ++i) count *= 2 * g + 1;
    if (count > 5e5) throw std::invalid_argument("direction grid too large; lower `directions`");
    std::vector<std::vector<int>> out;
    std::vector<int> y(static_cast<std::size_t>(m), -g);
    while (true) {
        int first = 0;
        while (first < m && y[static_cast<std::size_t>(first)] == 0) ++first;
        if (first < m && y[static_cast<std::size_t>(first)] > 0) {
            int gcd = 0;
            for (int v : y) gcd = std::gcd(gcd, std::abs(v));
            if (gcd == 1) out.push_back(y);
        }
        int i = m - 1;
        while (i >= 0 && y[static_cast<std::size_t>(i)] == g) {
            y[static_cast<std::size_t>(i)] = -g;
            --i;
        }
        if (i < 0) break;
        ++y[static_cast<std::size_t>(i)];
    }
    return out;
}

}  // namespace detail

// Sampled bracket (lower, upper) of the Hausdorff distance between the unit
// spheres of the two kernels, in the norm whose unit ball is the convex hull
// of the signed basic commutators (the l1 ball in Hall coordinates).
//
// Identical kernels give (0, 0); in particular two free images (both kernels
// trivial) are at distance 0. When exactly one kernel is trivial the sphere
// slices cannot converge, and the saturated pair (2, 2) — the diameter of
// the unit ball — is returned as the flag for that asymmetric case.
inline std::pair<Rational, Rational> marked_distance(const MarkedLieAlgebra& a, const MarkedLieAlgebra& b,
                                                     int directions) {
    if (a.marks.size() != b.marks.size() || a.s != b.s) {
        throw std::invalid_argument("marked algebras live over different free algebras");
    }
    if (directions < 1) throw std::invalid_argument("directions must be at least 1");
    if (!marks_generate(a) || !marks_generate(b)) throw std::invalid_argument("marks do not generate the algebra");
    HallBasis basis(static_cast<int>(a.marks.size()), a.s);
    Subspace ka = marked_kernel(a, basis);
    Subspace kb = marked_kernel(b, basis);
    if (ka == kb) return {Rational(0), Rational(0)};
    if (ka.dim() == 0 || kb.dim() == 0) return {Rational(2), Rational(2)};

    const Rational two(2);
    Rational lower(0), upper(0);
    for (int side = 0; side < 2; ++side) {
        const Subspace& from = side == 0 ? ka : kb;
        const Subspace& to = side == 0 ? kb : ka;
        Rational row_norms(0);
        for (const auto& w : from.basis()) row_norms += detail::l1_norm(w);
        Rational mesh = row_norms / Rational(directions);
        Rational side_upper(0);
        for (const auto& y : detail::sample_directions(from.dim(), directions)) {
            RationalVector point(static_cast<std::size_t>(from.ambient_dim()));
            for (int i = 0; i < from.dim(); ++i) {
                if (y[static_cast<std::size_t>(i)] == 0) continue;
                Rational c(y[static_cast<std::size_t>(i)]);
                for (int t = 0; t < from.ambient_dim(); ++t) {
                    point[static_cast<std::size_t>(t)] += c * from.basis()[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
                }
            }
            Rational norm = detail::l1_norm(point);
            for (auto& c : point) c /= norm;
            Rational d = detail::l1_distance_to_subspace(point, to);
            if (d > lower) lower = d;
            Rational u = std::min(two, d * two);
            if (u > side_upper) side_upper = u;
        }
        side_upper += mesh;
        if (side_upper > upper) upper = side_upper;
    }
    if (upper > two) upper = two;
    if (lower > upper) upper = lower;  // cannot happen; keep the bracket ordered regardless
    return {lower, upper};
}

}  // namespace nilgrowth

#endif  // NILGROWTH_LIE_ALGEBRA_HPP
