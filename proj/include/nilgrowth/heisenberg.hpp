#pragma once

// The integer Heisenberg scaling program: the S(j,k) box families, the
// collapsing comparison S(i,j)^m vs S(i,i^2)^m, normalized growth tables for
// S_n = S(n, n^{3-a_n}), and word-metric estimates of the Carnot-Caratheodory
// distance by dilation refinement.

#include <array>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nilgrowth/balls.hpp"
#include "nilgrowth/groups.hpp"
#include "nilgrowth/heis_fiber.hpp"
#include "nilgrowth/rational.hpp"

namespace nilgrowth {

// P(j,k): |u|,|v| <= j, |w| <= k, and its symmetrization S(j,k) = P u P^{-1}.
struct SFamily {
    long long j = 0;
    long long k = 0;
    HeisenbergFiberSet p;
    HeisenbergFiberSet s;
};

inline SFamily make_s_family(long long j, long long k) {
    if (j < 1 || k < 1) throw std::invalid_argument("S(j,k) requires j,k >= 1");
    SFamily fam;
    fam.j = j;
    fam.k = k;
    fam.p = HeisenbergFiberSet::box(j, j, k);
    fam.s = fam.p.unite(fam.p.inverse());
    // P(j,k)^{-1} stays inside the box with the central bound widened by j^2.
    if (!HeisenbergFiberSet::box(j, j, j * j + k).contains_set(fam.p.inverse())) {
        throw std::logic_error("inverse box containment violated");
    }
    if (!fam.s.contains_set(fam.p)) throw std::logic_error("S(j,k) lost its defining box");
    if (k >= j * j && !HeisenbergFiberSet::box(j, j, 2 * k).contains_set(fam.s)) {
        throw std::logic_error("S(j,k) escapes P(j,2k) despite k >= j^2");
    }
    return fam;
}

inline GeneratingSet<HeisenbergContext> s_family(long long j, long long k,
                                                 std::size_t budget = kDefaultEnumerationBudget) {
    auto fam = make_s_family(j, k);
    return make_generating_set(HeisenbergContext{}, fam.s.to_elements(budget));
}

// One cell of the collapsing comparison: does S(i,j)^m equal S(i,i^2)^m, and
// does the inequality (mi)^2 >= 10 m j claim that it must?
struct CollapsingResult {
    long long i = 0;
    long long j = 0;
    int m = 0;
    bool required = false;
    bool equal = false;
    unsigned long long lhs_cardinality = 0;  // |S(i,j)^m|
    unsigned long long rhs_cardinality = 0;  // |S(i,i^2)^m|
    std::optional<HeisenbergElement> witness;  // least element of the symmetric difference

    bool counterexample() const { return required && !equal; }
};

namespace detail {

inline HeisenbergFiberSet bounded_power(const HeisenbergFiberSet& base, int m, std::size_t budget) {
    HeisenbergFiberSet acc = base;
    for (int t = 2; t <= m; ++t) {
        acc = acc.multiply(base);
        if (acc.cardinality() > budget) throw BudgetExceeded("power of S(j,k) exceeds the enumeration budget");
    }
    return acc;
}

inline std::optional<HeisenbergElement> difference_witness(const HeisenbergFiberSet& a,
                                                           const HeisenbergFiberSet& b) {
    auto ab = a.first_not_in(b);
    auto ba = b.first_not_in(a);
    if (!ab) return ba;
    if (!ba) return ab;
    return *ab < *ba ? ab : ba;
}

}  // namespace detail

inline CollapsingResult collapsing_check(long long i, long long j, int m,
                                         std::size_t budget = kDefaultEnumerationBudget) {
    if (i < 1 || j < 1 || m < 1) throw std::invalid_argument("collapsing check needs i,j,m >= 1");
    CollapsingResult res;
    res.i = i;
    res.j = j;
    res.m = m;
    res.required = static_cast<BigInt>(m) * m * i * i >= BigInt(10) * m * j;
    auto lhs = detail::bounded_power(make_s_family(i, j).s, m, budget);
    auto rhs = detail::bounded_power(make_s_family(i, i * i).s, m, budget);
    res.lhs_cardinality = lhs.cardinality();
    res.rhs_cardinality = rhs.cardinality();
    res.equal = (lhs == rhs);
    if (!res.equal) res.witness = detail::difference_witness(lhs, rhs);
    return res;
}

// Every cell of the grid i <= i_max, j <= j_max, m <= m_max whose two power
// sets stay within budget; cells that overflow are silently skipped so the
// scan stays exact on what it does report.
inline std::vector<CollapsingResult> collapsing_grid(long long i_max, long long j_max, int m_max,
                                                     std::size_t budget = kDefaultEnumerationBudget) {
    std::vector<CollapsingResult> out;
    for (long long i = 1; i <= i_max; ++i) {
        for (long long j = 1; j <= j_max; ++j) {
            HeisenbergFiberSet lhs_base = make_s_family(i, j).s;
            HeisenbergFiberSet rhs_base = make_s_family(i, i * i).s;
            HeisenbergFiberSet lhs = lhs_base;
            HeisenbergFiberSet rhs = rhs_base;
            for (int m = 1; m <= m_max; ++m) {
                if (m > 1) {
                    lhs = lhs.multiply(lhs_base);
                    rhs = rhs.multiply(rhs_base);
                }
                if (lhs.cardinality() > budget || rhs.cardinality() > budget) break;
                CollapsingResult res;
                res.i = i;
                res.j = j;
                res.m = m;
                res.required = static_cast<BigInt>(m) * m * i * i >= BigInt(10) * m * j;
                res.lhs_cardinality = lhs.cardinality();
                res.rhs_cardinality = rhs.cardinality();
                res.equal = (lhs == rhs);
                if (!res.equal && res.required) res.witness = detail::difference_witness(lhs, rhs);
                out.push_back(res);
            }
        }
    }
    return out;
}

// Normalized growth of S_n = S(n, n^{3-a_n}) where n^{a_n} tracks the given
// f(n): |S_n| against n^{5-a_n} and |S_n^n| against n^8.
struct Prop16Row {
    int n = 0;
    int a_n = 0;
    long long k = 0;                      // central bound n^{3-a_n}
    unsigned long long s_cardinality = 0;  // |S_n|
    unsigned long long power_cardinality = 0;  // |S_n^completed_power|
    int completed_power = 0;               // n when full, less when the budget cut in
    bool partial = false;
    Rational ratio;            // |S_n^n| / (f(n) n^3 |S_n|), zero when partial
    double s_normalized = 0;   // |S_n| / n^{5-a_n}
    double power_normalized = 0;  // |S_n^n| / n^8, zero when partial
};

namespace detail {

inline int pick_exponent(int n, const Rational& f) {
    if (f <= Rational(0)) throw std::invalid_argument("f(n) must be positive");
    if (n < 2) return 0;
    // smallest a in {0,1,2} with n^a >= f(n); the central bound needs 3-a >= 1
    for (int a = 0; a <= 2; ++a) {
        if (Rational(big_pow(BigInt(n), static_cast<unsigned>(a))) >= f) return a;
    }
    return 2;
}

}  // namespace detail

inline std::vector<Prop16Row> prop16_table(const std::vector<int>& n_list,
                                           const std::vector<Rational>& f_values,
                                           std::size_t budget = kDefaultEnumerationBudget) {
    if (n_list.size() != f_values.size()) {
        throw std::invalid_argument("prop16 table needs one f value per n");
    }
    std::vector<Prop16Row> rows;
    for (std::size_t idx = 0; idx < n_list.size(); ++idx) {
        int n = n_list[idx];
        if (n < 1) throw std::invalid_argument("prop16 table needs n >= 1");
        Prop16Row row;
        row.n = n;
        row.a_n = detail::pick_exponent(n, f_values[idx]);
        BigInt kbig = big_pow(BigInt(n), static_cast<unsigned>(3 - row.a_n));
        row.k = kbig.convert_to<long long>();
        auto fam = make_s_family(n, row.k);
        row.s_cardinality = fam.s.cardinality();
        HeisenbergFiberSet acc = fam.s;
        row.completed_power = 1;
        for (int t = 2; t <= n; ++t) {
            HeisenbergFiberSet next = acc.multiply(fam.s);
            if (next.cardinality() > budget) {
                row.partial = true;
                break;
            }
            acc = std::move(next);
            row.completed_power = t;
        }
        if (static_cast<std::size_t>(row.s_cardinality) > budget) row.partial = true;
        row.power_cardinality = acc.cardinality();
        if (!row.partial) {
            row.ratio = Rational(BigInt(row.power_cardinality),
                                 BigInt(row.s_cardinality) * big_pow(BigInt(n), 3)) /
                        f_values[idx];
            row.power_normalized =
                Rational(BigInt(row.power_cardinality), big_pow(BigInt(n), 8)).to_double();
        }
        row.s_normalized = Rational(BigInt(row.s_cardinality),
                                    big_pow(BigInt(n), static_cast<unsigned>(5 - row.a_n)))
                               .to_double();
        rows.push_back(row);
    }
    return rows;
}

// Word-length estimate of the cc distance: d_{S(N,N^2)}(e, delta_{Nq}(g)) / q.
// The dilation delta_t scales (u,v,w) to (tu, tv, t^2 w) and must land on a
// lattice point.
inline Rational cc_estimate(const std::array<Rational, 3>& g, long long n, long long q,
                            std::size_t budget = kDefaultEnumerationBudget) {
    if (n < 1 || q < 1) throw std::invalid_argument("cc estimate needs N,q >= 1");
    BigInt t(n * q);
    std::array<Rational, 3> scaled = {g[0] * Rational(t), g[1] * Rational(t),
                                      g[2] * Rational(t * t)};
    HeisenbergElement target{};
    for (int c = 0; c < 3; ++c) {
        if (!scaled[c].is_integer()) {
            throw std::domain_error("dilation of " + g[c].str() + " by " + t.str() +
                                    " is not a lattice point");
        }
        if (big_abs(scaled[c].num()) > BigInt(std::numeric_limits<long long>::max() / 2)) {
            throw std::overflow_error("dilated point exceeds the lattice coordinate range");
        }
        target[c] = scaled[c].num().convert_to<long long>();
    }
    if (target == HeisenbergElement{0, 0, 0}) return Rational(0);
    auto fam = make_s_family(n, n * n);
    HeisenbergFiberSet ball = fam.s;
    for (int m = 1;; ++m) {
        if (ball.contains(target)) return Rational(BigInt(m), BigInt(q));
        ball = ball.multiply(fam.s);
        if (ball.cardinality() > budget) {
            throw BudgetExceeded("cc ball for S(" + std::to_string(n) + ",...) exceeds the budget");
        }
    }
}

// Estimates for each point at each (N,q) scale, with the largest jump between
// consecutive scales recorded per point.
struct ConvergenceReport {
    std::vector<std::vector<Rational>> estimates;           // row per point
    std::vector<Rational> max_successive_difference;        // row max |col+1 - col|
};

inline ConvergenceReport convergence_table(const std::vector<std::array<Rational, 3>>& points,
                                           const std::vector<std::pair<long long, long long>>& scales,
                                           std::size_t budget = kDefaultEnumerationBudget) {
    ConvergenceReport report;
    for (const auto& g : points) {
        std::vector<Rational> row;
        row.reserve(scales.size());
        for (const auto& [n, q] : scales) row.push_back(cc_estimate(g, n, q, budget));
        Rational jump(0);
        for (std::size_t c = 1; c < row.size(); ++c) {
            Rational d = row[c] - row[c - 1];
            if (d < Rational(0)) d = -d;
            if (d > jump) jump = d;
        }
        report.estimates.push_back(std::move(row));
        report.max_successive_difference.push_back(jump);
    }
    return report;
}

}  // namespace nilgrowth
