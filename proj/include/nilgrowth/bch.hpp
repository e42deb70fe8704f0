#ifndef NILGROWTH_BCH_HPP
#define NILGROWTH_BCH_HPP

// Baker-Campbell-Hausdorff products, truncated at the nilpotency step.
//
// Dynkin's formula:
//   log(e^X e^Y) = sum_{n>=1} (-1)^{n-1}/n
//       sum_{p_i+q_i>=1} [X^{p_1} Y^{q_1} ... X^{p_n} Y^{q_n}]
//                        / (|p|+|q|) / (prod_i p_i! q_i!)
// where [w_1 ... w_T] is the right-nested bracket [w_1,[w_2,[...,w_T]]].
// Terms of total degree > step vanish, so for fixed step the formula
// collapses to finitely many letter words; equal words are aggregated into
// one rational coefficient each, once per step, and cached.

#include "nilgrowth/hall_basis.hpp"
#include "nilgrowth/rational.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nilgrowth {

// Largest supported truncation step. Word count grows as 2^step, so raising
// this is cheap for the table but quadratic-in-dim per product evaluation.
inline constexpr int kMaxBchStep = 5;

namespace detail {

// A word over the alphabet {0 = X, 1 = Y}, bracketed right-nested.
using BchWord = std::vector<std::uint8_t>;
using BchTerms = std::vector<std::pair<BchWord, Rational>>;

inline BigInt factorial(int n) {
    BigInt out = 1;
    for (int k = 2; k <= n; ++k) out *= k;
    return out;
}

// Enumerate Dynkin terms of total degree <= step and aggregate by word.
inline BchTerms build_bch_terms(int step) {
    std::map<BchWord, Rational> agg;
    // Blocks (p_i, q_i) with p_i + q_i >= 1; recursion over the block list.
    struct Walker {
        int step;
        std::map<BchWord, Rational>& agg;
        BchWord word;
        BigInt fact_prod = 1;

        void extend(int n) {
            int used = static_cast<int>(word.size());
            for (int p = 0; p + used <= step; ++p) {
                for (int q = (p == 0 ? 1 : 0); p + q + used <= step; ++q) {
                    word.insert(word.end(), static_cast<std::size_t>(p), std::uint8_t{0});
                    word.insert(word.end(), static_cast<std::size_t>(q), std::uint8_t{1});
                    BigInt saved = fact_prod;
                    fact_prod *= factorial(p) * factorial(q);
                    int total = static_cast<int>(word.size());
                    Rational coeff(((n % 2 == 1) ? BigInt(1) : BigInt(-1)),
                                   BigInt(n) * total * fact_prod);
                    agg[word] += coeff;
                    if (total < step) extend(n + 1);
                    fact_prod = std::move(saved);
                    word.resize(static_cast<std::size_t>(used));
                }
            }
        }
    };
    Walker w{step, agg, {}, 1};
    w.extend(1);
    BchTerms out;
    for (auto& [word, coeff] : agg) {
        if (!coeff.is_zero()) out.emplace_back(word, coeff);
    }
    return out;
}

inline const BchTerms& bch_terms(int step) {
    static std::mutex mu;
    static std::map<int, BchTerms> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(step);
    if (it == cache.end()) it = cache.emplace(step, build_bch_terms(step)).first;
    return it->second;
}

// ad(x) as a dim x dim matrix: column j holds [x, e_j].
inline std::vector<RationalVector> ad_matrix(const RationalVector& x, const BracketOps& ops) {
    std::vector<RationalVector> cols(static_cast<std::size_t>(ops.dim), RationalVector(ops.dim));
    for (int i = 0; i < ops.dim; ++i) {
        if (x[i].is_zero()) continue;
        for (int j = 0; j < ops.dim; ++j) {
            const RationalVector& b = ops.bracket(i, j);
            for (int k = 0; k < ops.dim; ++k) {
                if (!b[k].is_zero()) cols[j][k] += x[i] * b[k];
            }
        }
    }
    return cols;
}

inline RationalVector apply_matrix(const std::vector<RationalVector>& cols, const RationalVector& v) {
    RationalVector out(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (v[j].is_zero()) continue;
        const RationalVector& c = cols[j];
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (!c[k].is_zero()) out[k] += v[j] * c[k];
        }
    }
    return out;
}

}  // namespace detail

// Exact BCH product of X and Y over a step-`step` bracket table. The result
// is log(exp X exp Y) in the same coordinates.
inline RationalVector bch_product(const RationalVector& x, const RationalVector& y,
                                  const BracketOps& ops, int step) {
    if (step < 1 || step > kMaxBchStep) throw std::invalid_argument("bch step out of supported range");
    if (static_cast<int>(x.size()) != ops.dim || static_cast<int>(y.size()) != ops.dim) {
        throw std::invalid_argument("element dimension does not match bracket table");
    }
    auto ad_x = detail::ad_matrix(x, ops);
    auto ad_y = detail::ad_matrix(y, ops);
    RationalVector out = vector_add(x, y);
    for (const auto& [word, coeff] : detail::bch_terms(step)) {
        if (word.size() < 2) continue;  // degree-1 words are the x + y above
        RationalVector v = word.back() ? y : x;
        for (std::size_t t = word.size() - 1; t-- > 0;) {
            v = detail::apply_matrix(word[t] ? ad_y : ad_x, v);
        }
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (!v[k].is_zero()) out[k] += coeff * v[k];
        }
    }
    return out;
}

inline RationalVector bch_product(const RationalVector& x, const RationalVector& y,
                                  const StructureTable& table) {
    return bch_product(x, y, table.ops(), table.s());
}

inline RationalVector bch_inverse(const RationalVector& x) {
    RationalVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = -x[i];
    return out;
}

}  // namespace nilgrowth

#endif  // NILGROWTH_BCH_HPP
