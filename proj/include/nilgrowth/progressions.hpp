#ifndef NILGROWTH_PROGRESSIONS_HPP
#define NILGROWTH_PROGRESSIONS_HPP

// Ordered progressions P_ord(u; L) = {u_1^{l_1} ... u_d^{l_d} : |l_i| <= L_i}
// and their checks: enumeration, the C-upper-triangularity of a generating
// tuple, m-properness, injectivity radius under a quotient map, and
// Heisenberg dilations.

#include "nilgrowth/groups.hpp"
#include "nilgrowth/rational.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nilgrowth {

template <typename Context>
struct OrderedProgression {
    Context context;
    std::vector<typename Context::Element> generators;  // u_1 .. u_d
    std::vector<long long> lengths;                     // L_1 .. L_d, all >= 1
};

template <typename Context>
OrderedProgression<Context> make_progression(const Context& ctx, std::vector<typename Context::Element> generators,
                                             std::vector<long long> lengths) {
    if (generators.empty()) throw std::invalid_argument("progression needs at least one generator");
    if (generators.size() != lengths.size()) throw std::invalid_argument("generator / length count mismatch");
    for (long long l : lengths) {
        if (l < 1) throw std::invalid_argument("progression lengths must be positive");
    }
    return {ctx, std::move(generators), std::move(lengths)};
}

template <typename Context>
struct ProgressionEnumeration {
    std::vector<typename Context::Element> elements;  // canonical sorted order, duplicates collapsed
    BigInt raw_tuple_count;                           // prod (2 L_i + 1)
};

namespace detail {

inline void check_tuple_budget(const BigInt& raw, std::size_t budget) {
    if (raw > BigInt(budget)) {
        throw BudgetExceeded("progression has " + raw.str() + " tuples, over the budget of " + std::to_string(budget));
    }
}

// Signed powers g^l for l in [-bound, bound], indexed by l + bound.
template <typename Context>
std::vector<typename Context::Element> power_range(const Context& ctx, const typename Context::Element& g,
                                                   long long bound) {
    std::vector<typename Context::Element> out(static_cast<std::size_t>(2 * bound + 1), ctx.identity());
    typename Context::Element inv = ctx.invert(g);
    for (long long l = 1; l <= bound; ++l) {
        out[static_cast<std::size_t>(bound + l)] = ctx.multiply(out[static_cast<std::size_t>(bound + l - 1)], g);
        out[static_cast<std::size_t>(bound - l)] = ctx.multiply(out[static_cast<std::size_t>(bound - l + 1)], inv);
    }
    return out;
}

// Walk all tuples |l_i| <= bounds[i], calling visit(product) for each; the
// walk keeps prefix products so each step costs O(1) multiplications.
// visit returns false to stop early.
template <typename Context, typename Visit>
void walk_progression(const Context& ctx, const std::vector<typename Context::Element>& generators,
                      const std::vector<long long>& bounds, Visit&& visit) {
    const std::size_t d = generators.size();
    std::vector<std::vector<typename Context::Element>> powers;
    powers.reserve(d);
    for (std::size_t i = 0; i < d; ++i) powers.push_back(power_range(ctx, generators[i], bounds[i]));
    std::vector<long long> digit(d, 0);  // l_i + bounds[i]
    std::vector<typename Context::Element> prefix(d + 1, ctx.identity());
    for (std::size_t i = 0; i < d; ++i) prefix[i + 1] = ctx.multiply(prefix[i], powers[i][0]);
    while (true) {
        if (!visit(prefix[d])) return;
        std::size_t i = d;
        while (i > 0 && digit[i - 1] == 2 * bounds[i - 1]) --i;
        if (i == 0) return;
        ++digit[i - 1];
        for (std::size_t k = i - 1; k < d; ++k) {
            prefix[k + 1] = ctx.multiply(prefix[k], powers[k][static_cast<std::size_t>(digit[k])]);
            if (k + 1 < d) digit[k + 1] = 0;
        }
    }
}

}  // namespace detail

template <typename Context>
ProgressionEnumeration<Context> enumerate_progression(const OrderedProgression<Context>& p,
                                                      std::size_t budget = kDefaultEnumerationBudget) {
    BigInt raw = 1;
    for (long long l : p.lengths) raw *= 2 * l + 1;
    detail::check_tuple_budget(raw, budget);
    std::set<typename Context::Element> seen;
    detail::walk_progression(p.context, p.generators, p.lengths, [&](const typename Context::Element& g) {
        seen.insert(g);
        return true;
    });
    return {std::vector<typename Context::Element>(seen.begin(), seen.end()), raw};
}

// True iff [u_i^{±1}, u_j^{±1}] lies in P_ord(u_{j+1}, ..., u_d;
// C L_{j+1}/(L_i L_j), ..., C L_d/(L_i L_j)) for all i < j; the bound on the
// trailing progression is truncated to integer floors, and an empty tail
// requires the commutator to be the identity.
template <typename Context>
bool upper_triangular_check(const OrderedProgression<Context>& p, const Rational& C,
                            std::size_t budget = kDefaultEnumerationBudget) {
    if (C.sign() <= 0) throw std::invalid_argument("upper-triangular constant must be positive");
    const Context& ctx = p.context;
    const std::size_t d = p.generators.size();
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            std::vector<typename Context::Element> tail_gens(p.generators.begin() + static_cast<std::ptrdiff_t>(j) + 1,
                                                             p.generators.end());
            std::vector<long long> tail_bounds;
            Rational scale = C / Rational(BigInt(p.lengths[i]) * BigInt(p.lengths[j]));
            for (std::size_t k = j + 1; k < d; ++k) {
                tail_bounds.push_back(static_cast<long long>((scale * Rational(p.lengths[k])).floor()));
            }
            std::set<typename Context::Element> tail;
            if (tail_gens.empty()) {
                tail.insert(ctx.identity());
            } else {
                BigInt raw = 1;
                for (long long l : tail_bounds) raw *= 2 * l + 1;
                detail::check_tuple_budget(raw, budget);
                detail::walk_progression(ctx, tail_gens, tail_bounds, [&](const typename Context::Element& g) {
                    tail.insert(g);
                    return true;
                });
            }
            for (int si : {-1, 1}) {
                for (int sj : {-1, 1}) {
                    typename Context::Element a = si > 0 ? p.generators[i] : ctx.invert(p.generators[i]);
                    typename Context::Element b = sj > 0 ? p.generators[j] : ctx.invert(p.generators[j]);
                    typename Context::Element comm =
                        ctx.multiply(ctx.multiply(ctx.invert(a), ctx.invert(b)), ctx.multiply(a, b));
                    if (!tail.count(comm)) return false;
                }
            }
        }
    }
    return true;
}

// True iff the products over |l_i| <= floor(m L_i) are pairwise distinct.
template <typename Context>
bool is_m_proper(const OrderedProgression<Context>& p, const Rational& m,
                 std::size_t budget = kDefaultEnumerationBudget) {
    if (m.sign() <= 0) throw std::invalid_argument("properness scale must be positive");
    std::vector<long long> bounds;
    BigInt raw = 1;
    for (long long l : p.lengths) {
        long long b = static_cast<long long>((m * Rational(l)).floor());
        bounds.push_back(b);
        raw *= 2 * b + 1;
    }
    detail::check_tuple_budget(raw, budget);
    std::set<typename Context::Element> seen;
    bool proper = true;
    detail::walk_progression(p.context, p.generators, bounds, [&](const typename Context::Element& g) {
        if (!seen.insert(g).second) {
            proper = false;
            return false;
        }
        return true;
    });
    return proper;
}

// ---------------------------------------------------------------------------
// Injectivity radius of a progression under a map to a target group.
//
// The map sends progression generator i to images[i]; products of
// progression tuples are tracked simultaneously in the source lattice and
// the target. The radius is the largest j <= r_max such that source-distinct
// elements of P^j stay target-distinct.

struct InjectivityRadius {
    bool collision_found = false;
    int radius = 0;  // when no collision: certified "radius >= r_max"

    std::string str() const {
        return collision_found ? std::to_string(radius) : (">= " + std::to_string(radius));
    }
};

template <typename SourceContext, typename TargetContext>
InjectivityRadius injectivity_radius(const OrderedProgression<SourceContext>& p, const TargetContext& target,
                                     const std::vector<typename TargetContext::Element>& images, int r_max,
                                     std::size_t budget = kDefaultEnumerationBudget) {
    if (images.size() != p.generators.size()) throw std::invalid_argument("image count mismatch");
    if (r_max < 1) throw std::invalid_argument("r_max must be at least 1");
    using Pair = std::pair<typename SourceContext::Element, typename TargetContext::Element>;
    const SourceContext& src = p.context;

    // Base pairs: each progression tuple evaluated in both groups.
    OrderedProgression<TargetContext> shadow{target, images, p.lengths};
    BigInt raw = 1;
    for (long long l : p.lengths) raw *= 2 * l + 1;
    detail::check_tuple_budget(raw, budget);
    std::set<Pair> base;
    {
        std::vector<typename SourceContext::Element> src_side;
        detail::walk_progression(src, p.generators, p.lengths,
                                 [&](const typename SourceContext::Element& g) {
                                     src_side.push_back(g);
                                     return true;
                                 });
        std::size_t at = 0;
        detail::walk_progression(target, shadow.generators, shadow.lengths,
                                 [&](const typename TargetContext::Element& g) {
                                     base.insert({src_side[at++], g});
                                     return true;
                                 });
    }

    std::set<Pair> level = base;
    for (int j = 1; j <= r_max; ++j) {
        std::map<typename TargetContext::Element, const typename SourceContext::Element*> witness;
        for (const auto& [s, t] : level) {
            auto [it, fresh] = witness.try_emplace(t, &s);
            if (!fresh && !(*it->second == s)) return {true, j - 1};
        }
        if (j == r_max) break;
        std::set<Pair> next;
        for (const auto& [s, t] : level) {
            for (const auto& [bs, bt] : base) {
                next.insert({src.multiply(s, bs), target.multiply(t, bt)});
                if (next.size() > budget) throw BudgetExceeded("injectivity scan exceeded the enumeration budget");
            }
        }
        level = std::move(next);
    }
    return {false, r_max};
}

// ---------------------------------------------------------------------------
// Heisenberg dilation d_t (u, v, w) = (t u, t v, t^2 w); defined on integer
// points only when the image is integral.

inline HeisenbergElement dilate(const HeisenbergElement& g, const Rational& t) {
    if (t.sign() <= 0) throw std::invalid_argument("dilation parameter must be positive");
    Rational u = t * Rational(g[0]);
    Rational v = t * Rational(g[1]);
    Rational w = t * t * Rational(g[2]);
    if (!u.is_integer() || !v.is_integer() || !w.is_integer()) {
        throw std::domain_error("dilation image is not integral");
    }
    return {static_cast<long long>(u.floor()), static_cast<long long>(v.floor()),
            static_cast<long long>(w.floor())};
}

}  // namespace nilgrowth

#endif  // NILGROWTH_PROGRESSIONS_HPP
