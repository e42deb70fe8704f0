#ifndef NILGROWTH_BALLS_HPP
#define NILGROWTH_BALLS_HPP

// Word-metric balls S^m for a finite symmetric generating set S containing
// the identity: growth series, doubling ratios, approximate-group cover
// certificates, and diagnostic growth-exponent fits.

#include "nilgrowth/groups.hpp"
#include "nilgrowth/heis_fiber.hpp"
#include "nilgrowth/rational.hpp"

#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilgrowth {

struct GrowthRecord {
    int m = 0;
    unsigned long long ball = 0;    // |S^m|
    unsigned long long sphere = 0;  // |S^m \ S^{m-1}|
};

struct GrowthSeries {
    std::vector<GrowthRecord> records;  // m = 0 .. (last completed radius)
    bool overflow = false;              // true when the budget cut the run short

    int max_radius() const { return records.empty() ? -1 : records.back().m; }

    unsigned long long ball(int m) const {
        for (const auto& r : records) {
            if (r.m == m) return r.ball;
        }
        throw std::out_of_range("growth series does not cover radius " + std::to_string(m));
    }
};

// Exact ball sizes by breadth-first frontier expansion on canonical
// coordinates. When the ball would outgrow the budget, the completed prefix
// is returned with the overflow flag set.
template <typename Context>
GrowthSeries ball_growth(const GeneratingSet<Context>& s, int m_max,
                         std::size_t budget = kDefaultEnumerationBudget) {
    using Element = typename Context::Element;
    const Context& ctx = s.context;
    validate_generating_set(ctx, s.elements);
    GrowthSeries series;
    std::set<Element> seen = {ctx.identity()};
    std::vector<Element> frontier(seen.begin(), seen.end());
    series.records.push_back({0, 1, 1});
    for (int m = 1; m <= m_max; ++m) {
        std::vector<Element> next;
        for (const Element& f : frontier) {
            for (const Element& g : s.elements) {
                Element p = ctx.multiply(f, g);
                if (seen.insert(p).second) {
                    next.push_back(std::move(p));
                    if (seen.size() > budget) {
                        series.overflow = true;
                        return series;
                    }
                }
            }
        }
        series.records.push_back({m, static_cast<unsigned long long>(seen.size()),
                                  static_cast<unsigned long long>(next.size())});
        frontier = std::move(next);
        if (frontier.empty()) {
            // The whole group is exhausted; later spheres stay empty.
            for (int rest = m + 1; rest <= m_max; ++rest) {
                series.records.push_back({rest, static_cast<unsigned long long>(seen.size()), 0});
            }
            break;
        }
    }
    return series;
}

// Heisenberg balls via fiberwise interval arithmetic; the per-radius sets
// equal the BFS sets exactly, but scale to hundreds of millions of elements.
inline GrowthSeries ball_growth(const GeneratingSet<HeisenbergContext>& s, int m_max,
                                std::size_t budget = kDefaultEnumerationBudget) {
    validate_generating_set(s.context, s.elements);
    GrowthSeries series;
    series.records.push_back({0, 1, 1});
    HeisenbergFiberSet gen = HeisenbergFiberSet::from_elements(s.elements);
    HeisenbergFiberSet ball = HeisenbergFiberSet::identity_set();
    unsigned long long prev = 1;
    for (int m = 1; m <= m_max; ++m) {
        ball = ball.multiply(gen);
        unsigned long long card = ball.cardinality();
        if (card > budget) {
            series.overflow = true;
            return series;
        }
        series.records.push_back({m, card, card - prev});
        if (card == prev) {
            for (int rest = m + 1; rest <= m_max; ++rest) series.records.push_back({rest, card, 0});
            break;
        }
        prev = card;
    }
    return series;
}

struct DoublingEntry {
    int m = 0;
    Rational ratio;  // |S^{2m+1}| / |S^m|
    bool exceeds = false;
};

// Exact doubling ratios for every m with 2m+1 inside the series.
inline std::vector<DoublingEntry> doubling_sequence(const GrowthSeries& series, const Rational& threshold) {
    std::vector<DoublingEntry> out;
    for (const auto& r : series.records) {
        int doubled = 2 * r.m + 1;
        if (doubled > series.max_radius()) break;
        Rational ratio(BigInt(series.ball(doubled)), BigInt(r.ball));
        out.push_back({r.m, ratio, ratio > threshold});
    }
    if (out.empty()) throw std::invalid_argument("series too short for any doubling ratio");
    return out;
}

template <typename Context>
struct CoverCertificate {
    std::vector<typename Context::Element> x;  // A^2 ⊆ X A
    std::size_t k() const { return x.size(); }
};

// Greedy K-approximate-group certificate: repeatedly take the first
// uncovered product u in canonical order, try the translates x = u a^{-1}
// over a in A, keep the one covering the most uncovered products (ties to
// the canonically smallest x). The certificate is re-verified exhaustively
// before returning.
template <typename Context>
CoverCertificate<Context> approx_cover(const Context& ctx, const std::vector<typename Context::Element>& a,
                                       std::size_t budget = kDefaultEnumerationBudget) {
    using Element = typename Context::Element;
    if (a.empty()) throw std::invalid_argument("cover of an empty set");
    if (BigInt(a.size()) * BigInt(a.size()) > BigInt(budget)) {
        throw BudgetExceeded("product set A^2 exceeds the enumeration budget");
    }
    std::set<Element> asq;
    for (const Element& p : a) {
        for (const Element& q : a) asq.insert(ctx.multiply(p, q));
    }
    std::vector<Element> inverses;
    inverses.reserve(a.size());
    for (const Element& p : a) inverses.push_back(ctx.invert(p));

    std::set<Element> uncovered = asq;
    CoverCertificate<Context> cert;
    while (!uncovered.empty()) {
        const Element u = *uncovered.begin();
        bool have_best = false;
        Element best_x = u;
        std::size_t best_count = 0;
        for (const Element& ainv : inverses) {
            Element x = ctx.multiply(u, ainv);
            std::size_t count = 0;
            for (const Element& b : a) {
                if (uncovered.count(ctx.multiply(x, b))) ++count;
            }
            if (count == 0) continue;  // x does not even cover u unless some product hits it
            if (!have_best || count > best_count || (count == best_count && x < best_x)) {
                have_best = true;
                best_x = x;
                best_count = count;
            }
        }
        if (!have_best) throw std::logic_error("greedy cover failed to cover an element");
        for (const Element& b : a) uncovered.erase(ctx.multiply(best_x, b));
        if (uncovered.count(u)) throw std::logic_error("greedy cover selected a non-covering translate");
        cert.x.push_back(best_x);
    }

    // Independent certificate check: every product must be reached.
    std::set<Element> aset(a.begin(), a.end());
    for (const Element& p : asq) {
        bool covered = false;
        for (const Element& x : cert.x) {
            if (aset.count(ctx.multiply(ctx.invert(x), p))) {
                covered = true;
                break;
            }
        }
        if (!covered) throw std::logic_error("cover certificate failed verification");
    }
    return cert;
}

struct GrowthFit {
    double slope = 0;
    double intercept = 0;
    double max_residual = 0;
};

// Diagnostic least-squares fit of log |S^m| against log m on a radius
// window; exact data in, floating point out.
inline GrowthFit growth_exponent_fit(const GrowthSeries& series, int m_lo, int m_hi) {
    if (m_lo < 1 || m_hi <= m_lo) throw std::invalid_argument("degenerate fit window");
    if (m_hi > series.max_radius()) throw std::invalid_argument("fit window exceeds the series");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int m = m_lo; m <= m_hi; ++m) {
        double x = std::log(static_cast<double>(m));
        double y = std::log(static_cast<double>(series.ball(m)));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0) throw std::invalid_argument("degenerate fit window");
    GrowthFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    for (int m = m_lo; m <= m_hi; ++m) {
        double x = std::log(static_cast<double>(m));
        double y = std::log(static_cast<double>(series.ball(m)));
        fit.max_residual = std::max(fit.max_residual, std::abs(y - (fit.intercept + fit.slope * x)));
    }
    return fit;
}

}  // namespace nilgrowth

#endif  // NILGROWTH_BALLS_HPP
