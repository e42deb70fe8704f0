#pragma once

// The analytic growth profile of a marked nilpotent Lie algebra with side
// lengths: basic-commutator images, nilbox subset volumes, the growth
// polynomial f(m), its piecewise-monomial upper envelope h, the log-log
// profile with integer slopes, and the empirical deviation of measured ball
// sizes from that profile. Exact rational arithmetic throughout; logarithms
// appear only in reported doubles.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "nilgrowth/balls.hpp"
#include "nilgrowth/hall_basis.hpp"
#include "nilgrowth/lie_algebra.hpp"
#include "nilgrowth/linalg.hpp"
#include "nilgrowth/rational.hpp"

namespace nilgrowth {

namespace detail {

// Visit all ascending index subsets of size k from {0, ..., r-1}.
template <typename Fn>
void for_each_combination(int r, int k, Fn&& fn) {
    if (k < 0 || k > r) return;
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
        fn(const_cast<const std::vector<int>&>(idx));
        int pos = k - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == r - k + pos) --pos;
        if (pos < 0) return;
        ++idx[static_cast<std::size_t>(pos)];
        for (int i = pos + 1; i < k; ++i) {
            idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
        }
    }
}

}  // namespace detail

// Images of every basic commutator of the ambient free algebra under the
// marking, tagged with their weight vectors.
struct CommutatorImages {
    RationalMatrix images;                  // one coordinate vector per basic commutator
    std::vector<WeightVector> weights;      // chi of each commutator
    std::vector<int> total_weights;         // |chi|
    int ambient_dim = 0;                    // dim of the marked algebra
};

inline CommutatorImages basic_commutator_images(const MarkedLieAlgebra& m, int s) {
    if (s < m.algebra.ops.step) {
        throw std::invalid_argument("free nilpotency step below the algebra's class");
    }
    if (!marks_generate(m)) throw std::invalid_argument("marks do not generate the algebra");
    HallBasis basis(static_cast<int>(m.marks.size()), s);
    CommutatorImages out;
    out.images = mark_images(m, basis);
    out.ambient_dim = m.algebra.dim();
    for (int i = 0; i < basis.dim(); ++i) {
        out.weights.push_back(basis.at(i).chi);
        out.total_weights.push_back(basis.at(i).weight);
    }
    return out;
}

// A marked algebra together with progression side lengths, one per mark.
struct LieProgression {
    MarkedLieAlgebra marked;
    std::vector<Rational> lengths;
};

inline LieProgression make_lie_progression(MarkedLieAlgebra marked, std::vector<Rational> lengths) {
    if (lengths.size() != marked.marks.size()) {
        throw std::invalid_argument("one side length per mark required");
    }
    for (const auto& l : lengths) {
        if (l <= Rational(0)) throw std::invalid_argument("side lengths must be positive");
    }
    if (!marks_generate(marked)) throw std::invalid_argument("marks do not generate the algebra");
    return LieProgression{std::move(marked), std::move(lengths)};
}

// Volume of the nilbox spanned by the chosen commutator images at m = 1, in
// the lattice-normalized measure: 2^d * prod_j L^chi(i_j) * |det|.
inline Rational subset_volume(const CommutatorImages& imgs, const std::vector<Rational>& lengths,
                              const std::vector<int>& subset) {
    const int d = imgs.ambient_dim;
    if (static_cast<int>(subset.size()) != d) {
        throw std::invalid_argument("subset size must equal the algebra dimension");
    }
    Rational scale(big_pow(BigInt(2), static_cast<unsigned>(d)));
    RationalMatrix rows;
    rows.reserve(subset.size());
    for (int i : subset) {
        if (i < 0 || i >= static_cast<int>(imgs.images.size())) {
            throw std::invalid_argument("subset index out of range");
        }
        scale = scale * chi_power(lengths, imgs.weights[static_cast<std::size_t>(i)]);
        rows.push_back(imgs.images[static_cast<std::size_t>(i)]);
    }
    Rational det = determinant(std::move(rows));
    return scale * det.abs();
}

// f(m) = sum over d-subsets of basic commutators of vol * m^(sum of weights).
struct GrowthPolynomial {
    std::map<int, Rational> terms;  // degree -> positive coefficient

    int degree() const { return terms.empty() ? -1 : terms.rbegin()->first; }

    Rational evaluate(const Rational& m) const {
        Rational out(0);
        for (const auto& [deg, coeff] : terms) out = out + coeff * m.pow(static_cast<unsigned>(deg));
        return out;
    }
};

inline GrowthPolynomial growth_polynomial(const LieProgression& p) {
    CommutatorImages imgs = basic_commutator_images(p.marked, p.marked.s);
    const int r = static_cast<int>(imgs.images.size());
    GrowthPolynomial f;
    detail::for_each_combination(r, imgs.ambient_dim, [&](const std::vector<int>& subset) {
        Rational vol = subset_volume(imgs, p.lengths, subset);
        if (vol.is_zero()) return;
        int deg = 0;
        for (int i : subset) deg += imgs.total_weights[static_cast<std::size_t>(i)];
        auto [it, fresh] = f.terms.try_emplace(deg, vol);
        if (!fresh) it->second = it->second + vol;
    });
    return f;
}

// x* = ratio^(1/root), kept symbolic so the envelope never leaves Q.
struct Breakpoint {
    Rational ratio;
    int root = 1;

    double value() const { return std::pow(ratio.to_double(), 1.0 / root); }
};

struct EnvelopePiece {
    int degree = 0;
    Rational coefficient;
};

// h(x) = max_i alpha_i x^i over the surviving monomials; pieces are ordered
// by degree and piece i hands over to piece i+1 at breakpoints[i].
struct PiecewiseMonomial {
    std::vector<EnvelopePiece> pieces;
    std::vector<Breakpoint> breakpoints;

    Rational evaluate(const Rational& x) const {
        if (x < Rational(0)) throw std::domain_error("envelope evaluated at negative x");
        Rational best(0);
        for (const auto& piece : pieces) {
            Rational v = piece.coefficient * x.pow(static_cast<unsigned>(piece.degree));
            if (v > best) best = v;
        }
        return best;
    }
};

// Drop every monomial that is nowhere strictly above the others on x > 0.
// Monomial k between i and j is redundant iff at the crossover of i and j it
// does not exceed them: alpha_k^(dj-di) <= alpha_i^(dj-dk) * alpha_j^(dk-di).
inline PiecewiseMonomial envelope(const GrowthPolynomial& f) {
    std::vector<EnvelopePiece> cand;
    for (const auto& [deg, coeff] : f.terms) {
        if (coeff < Rational(0)) throw std::invalid_argument("negative growth coefficient");
        if (!(coeff == Rational(0))) cand.push_back({deg, coeff});
    }
    if (cand.empty()) throw std::invalid_argument("zero growth polynomial has no envelope");

    std::vector<EnvelopePiece> hull;
    for (const auto& next : cand) {
        while (hull.size() >= 2) {
            const auto& low = hull[hull.size() - 2];
            const auto& mid = hull.back();
            unsigned span = static_cast<unsigned>(next.degree - low.degree);
            unsigned upper = static_cast<unsigned>(next.degree - mid.degree);
            unsigned lower = static_cast<unsigned>(mid.degree - low.degree);
            if (mid.coefficient.pow(span) <= low.coefficient.pow(upper) * next.coefficient.pow(lower)) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(next);
    }

    PiecewiseMonomial out;
    out.pieces = std::move(hull);
    for (std::size_t i = 0; i + 1 < out.pieces.size(); ++i) {
        out.breakpoints.push_back(
            {out.pieces[i].coefficient / out.pieces[i + 1].coefficient,
             out.pieces[i + 1].degree - out.pieces[i].degree});
    }
    return out;
}

// log h(e^x), normalized to vanish at x = 0: continuous, non-decreasing,
// piecewise linear with the envelope degrees as slopes.
struct LogLogProfile {
    std::vector<int> slopes;
    std::vector<double> breakpoints;  // in log scale
    PiecewiseMonomial h;              // retained for exact evaluation
    Rational h_at_one;

    // profile(log m) for a rational radius m > 0, exact until the final log
    double at_radius(const Rational& m) const {
        return std::log((h.evaluate(m) / h_at_one).to_double());
    }
};

inline LogLogProfile loglog_profile(const PiecewiseMonomial& h) {
    if (h.pieces.empty()) throw std::invalid_argument("empty envelope");
    LogLogProfile out;
    for (const auto& piece : h.pieces) {
        if (piece.degree < 0) throw std::invalid_argument("negative envelope degree");
        out.slopes.push_back(piece.degree);
    }
    for (const auto& b : h.breakpoints) out.breakpoints.push_back(std::log(b.value()));
    out.h = h;
    out.h_at_one = h.evaluate(Rational(1));
    return out;
}

// Measured log-scale residuals of a ball series against the profile.
struct DeviationRow {
    int m = 0;
    double log_ball = 0;
    double profile = 0;
    double residual = 0;
};

struct DeviationReport {
    std::vector<DeviationRow> rows;
    double max_abs = 0;
    double max_residual = 0;
    double min_residual = 0;

    double spread() const { return max_residual - min_residual; }
};

inline DeviationReport profile_deviation(const GrowthSeries& series, const LogLogProfile& profile) {
    if (series.max_radius() < 1) throw std::invalid_argument("deviation window is empty");
    DeviationReport report;
    const Rational b1(BigInt(series.ball(1)));
    bool first = true;
    for (const auto& rec : series.records) {
        if (rec.m < 1) continue;
        DeviationRow row;
        row.m = rec.m;
        row.log_ball = std::log(static_cast<double>(rec.ball));
        row.profile = profile.at_radius(Rational(rec.m));
        row.residual = std::log((Rational(BigInt(rec.ball)) / b1).to_double()) - row.profile;
        report.max_abs = std::max(report.max_abs, std::abs(row.residual));
        report.max_residual = first ? row.residual : std::max(report.max_residual, row.residual);
        report.min_residual = first ? row.residual : std::min(report.min_residual, row.residual);
        first = false;
        report.rows.push_back(row);
    }
    return report;
}

// The d-subset of the given vectors maximizing the weighted box volume
// 2^d * prod M * |det|, ties to the lexicographically first subset. The
// returned selection is certified on sampled vertices of B(x; M): every
// vertex must lie in r * B(selected).
inline std::vector<int> cramer_select(const RationalMatrix& vectors, const std::vector<Rational>& weights) {
    if (vectors.empty()) throw std::invalid_argument("no vectors to select from");
    const int r = static_cast<int>(vectors.size());
    const int d = static_cast<int>(vectors.front().size());
    if (static_cast<int>(weights.size()) != r) throw std::invalid_argument("one weight per vector required");
    for (const auto& v : vectors) {
        if (static_cast<int>(v.size()) != d) throw std::invalid_argument("mixed vector dimensions");
    }
    for (const auto& w : weights) {
        if (w <= Rational(0)) throw std::invalid_argument("weights must be positive");
    }

    std::vector<int> best;
    Rational best_vol(0);
    detail::for_each_combination(r, d, [&](const std::vector<int>& subset) {
        RationalMatrix rows;
        Rational scale(1);
        for (int i : subset) {
            rows.push_back(vectors[static_cast<std::size_t>(i)]);
            scale = scale * weights[static_cast<std::size_t>(i)];
        }
        Rational vol = scale * determinant(std::move(rows)).abs();
        if (vol > best_vol) {
            best_vol = vol;
            best = subset;
        }
    });
    if (best_vol.is_zero()) throw std::invalid_argument("vectors do not span");

    // Certification on vertices sum_i s_i M_i x_i with s_i = +-1.
    RationalMatrix system(static_cast<std::size_t>(d), RationalVector(static_cast<std::size_t>(d)));
    for (int col = 0; col < d; ++col) {
        const auto& b = vectors[static_cast<std::size_t>(best[static_cast<std::size_t>(col)])];
        for (int row = 0; row < d; ++row) {
            system[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] = b[static_cast<std::size_t>(row)];
        }
    }
    auto check_vertex = [&](const std::vector<int>& signs) {
        RationalVector vertex(static_cast<std::size_t>(d));
        for (int i = 0; i < r; ++i) {
            for (int t = 0; t < d; ++t) {
                vertex[static_cast<std::size_t>(t)] =
                    vertex[static_cast<std::size_t>(t)] +
                    Rational(signs[static_cast<std::size_t>(i)]) * weights[static_cast<std::size_t>(i)] *
                        vectors[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
            }
        }
        auto coords = solve_square(system, vertex);
        if (!coords) throw std::logic_error("selected subset became singular");
        for (int j = 0; j < d; ++j) {
            Rational bound = Rational(r) * weights[static_cast<std::size_t>(best[static_cast<std::size_t>(j)])];
            if ((*coords)[static_cast<std::size_t>(j)].abs() > bound) {
                throw std::logic_error("containment certificate failed on a sampled vertex");
            }
        }
    };
    if (r <= 12) {
        std::vector<int> signs(static_cast<std::size_t>(r), -1);
        while (true) {
            check_vertex(signs);
            int pos = 0;
            while (pos < r && signs[static_cast<std::size_t>(pos)] == 1) {
                signs[static_cast<std::size_t>(pos)] = -1;
                ++pos;
            }
            if (pos == r) break;
            signs[static_cast<std::size_t>(pos)] = 1;
        }
    } else {
        std::mt19937 rng(2024);
        std::bernoulli_distribution flip(0.5);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<int> signs(static_cast<std::size_t>(r));
            for (auto& s : signs) s = flip(rng) ? 1 : -1;
            check_vertex(signs);
        }
    }
    return best;
}

// Lattice-point count vs volume for the box {sum t_i b_i : |t_i| <= M_i}:
// the van der Corput inequality count >= vol / 2^d, checked exactly.
struct VdcResult {
    BigInt count;
    Rational volume;
    bool pass = false;
};

inline VdcResult vdc_check(const RationalMatrix& basis, const std::vector<Rational>& bounds,
                           std::size_t budget = kDefaultEnumerationBudget) {
    const int d = static_cast<int>(basis.size());
    if (d == 0) throw std::invalid_argument("empty box basis");
    if (static_cast<int>(bounds.size()) != d) throw std::invalid_argument("one bound per basis vector required");
    for (const auto& b : basis) {
        if (static_cast<int>(b.size()) != d) throw std::invalid_argument("box basis must be square");
    }
    for (const auto& m : bounds) {
        if (m <= Rational(0)) throw std::invalid_argument("box bounds must be positive");
    }

    RationalMatrix rows = basis;
    Rational det = determinant(std::move(rows));
    if (det.is_zero()) throw std::invalid_argument("box basis is singular");
    VdcResult result;
    result.volume = Rational(big_pow(BigInt(2), static_cast<unsigned>(d))) * det.abs();
    for (const auto& m : bounds) result.volume = result.volume * m;

    // Solve against the basis-as-columns matrix to recover box coordinates.
    RationalMatrix system(static_cast<std::size_t>(d), RationalVector(static_cast<std::size_t>(d)));
    for (int col = 0; col < d; ++col) {
        for (int row = 0; row < d; ++row) {
            system[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] =
                basis[static_cast<std::size_t>(col)][static_cast<std::size_t>(row)];
        }
    }

    std::vector<long long> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
    BigInt candidates(1);
    for (int k = 0; k < d; ++k) {
        Rational reach(0);
        for (int i = 0; i < d; ++i) {
            reach = reach + bounds[static_cast<std::size_t>(i)] *
                                basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].abs();
        }
        BigInt cap = reach.floor();
        hi[static_cast<std::size_t>(k)] = cap.convert_to<long long>();
        lo[static_cast<std::size_t>(k)] = -hi[static_cast<std::size_t>(k)];
        candidates *= BigInt(2) * cap + 1;
    }
    if (candidates > BigInt(budget)) throw BudgetExceeded("box bounding grid exceeds the enumeration budget");

    std::vector<long long> z = lo;
    result.count = 0;
    while (true) {
        RationalVector point(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) point[static_cast<std::size_t>(k)] = Rational(z[static_cast<std::size_t>(k)]);
        auto coords = solve_square(system, point);
        if (coords) {
            bool inside = true;
            for (int i = 0; i < d; ++i) {
                if ((*coords)[static_cast<std::size_t>(i)].abs() > bounds[static_cast<std::size_t>(i)]) {
                    inside = false;
                    break;
                }
            }
            if (inside) ++result.count;
        }
        int pos = 0;
        while (pos < d && z[static_cast<std::size_t>(pos)] == hi[static_cast<std::size_t>(pos)]) {
            z[static_cast<std::size_t>(pos)] = lo[static_cast<std::size_t>(pos)];
            ++pos;
        }
        if (pos == d) break;
        ++z[static_cast<std::size_t>(pos)];
    }
    result.pass = Rational(result.count * big_pow(BigInt(2), static_cast<unsigned>(d))) >= result.volume;
    return result;
}

}  // namespace nilgrowth
