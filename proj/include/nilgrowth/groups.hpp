#ifndef NILGROWTH_GROUPS_HPP
#define NILGROWTH_GROUPS_HPP

// Concrete nilpotent groups with canonical element coordinates.
//
// Every context exposes the same surface: an Element value type with total
// order and hashing, identity/multiply/invert, and render for diagnostics.
// Algorithms (balls, progressions) are templates over the context type.

#include "nilgrowth/bch.hpp"
#include "nilgrowth/hall_basis.hpp"
#include "nilgrowth/lie_algebra.hpp"
#include "nilgrowth/rational.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilgrowth {

// Raised when an enumeration would exceed its configured element budget.
struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr std::size_t kDefaultEnumerationBudget = 20'000'000;

namespace detail {

inline long long checked_add(long long a, long long b) {
    long long out;
    if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("integer overflow in group arithmetic");
    return out;
}

inline long long checked_mul(long long a, long long b) {
    long long out;
    if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("integer overflow in group arithmetic");
    return out;
}

inline std::size_t mix_hash(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Integer Heisenberg group H(Z): triples (u, v, w) standing for the
// unitriangular matrix with first row (1, u, w) and second row (0, 1, v).

using HeisenbergElement = std::array<long long, 3>;

class HeisenbergContext {
public:
    using Element = HeisenbergElement;

    Element identity() const { return {0, 0, 0}; }

    Element multiply(const Element& a, const Element& b) const {
        return {detail::checked_add(a[0], b[0]), detail::checked_add(a[1], b[1]),
                detail::checked_add(detail::checked_add(a[2], b[2]), detail::checked_mul(a[0], b[1]))};
    }

    Element invert(const Element& a) const {
        return {-a[0], -a[1], detail::checked_add(-a[2], detail::checked_mul(a[0], a[1]))};
    }

    std::string render(const Element& a) const {
        return "(" + std::to_string(a[0]) + "," + std::to_string(a[1]) + "," + std::to_string(a[2]) + ")";
    }

    static std::size_t hash(const Element& a) {
        std::size_t h = 0;
        for (long long c : a) h = detail::mix_hash(h, static_cast<std::size_t>(c));
        return h;
    }
};

// ---------------------------------------------------------------------------
// Unitriangular integer matrices U(n, Z): strictly-upper entries, row-major.

using UnitriangularElement = std::vector<long long>;

class UnitriangularContext {
public:
    using Element = UnitriangularElement;

    explicit UnitriangularContext(int n) : n_(n) {
        if (n < 2) throw std::invalid_argument("unitriangular rank must be at least 2");
    }

    int n() const { return n_; }
    std::size_t coord_count() const { return static_cast<std::size_t>(n_) * (n_ - 1) / 2; }

    std::size_t pos(int i, int j) const {  // entry (i, j), 0-based, i < j
        return static_cast<std::size_t>(i) * (2 * n_ - i - 1) / 2 + static_cast<std::size_t>(j - i - 1);
    }

    Element identity() const { return Element(coord_count(), 0); }

    Element multiply(const Element& a, const Element& b) const {
        Element c(coord_count(), 0);
        for (int i = 0; i < n_; ++i) {
            for (int j = i + 1; j < n_; ++j) {
                long long sum = detail::checked_add(a[pos(i, j)], b[pos(i, j)]);
                for (int k = i + 1; k < j; ++k) {
                    sum = detail::checked_add(sum, detail::checked_mul(a[pos(i, k)], b[pos(k, j)]));
                }
                c[pos(i, j)] = sum;
            }
        }
        return c;
    }

    Element invert(const Element& a) const {
        Element x(coord_count(), 0);
        for (int band = 1; band < n_; ++band) {
            for (int i = 0; i + band < n_; ++i) {
                int j = i + band;
                long long sum = a[pos(i, j)];
                for (int k = i + 1; k < j; ++k) {
                    sum = detail::checked_add(sum, detail::checked_mul(a[pos(i, k)], x[pos(k, j)]));
                }
                x[pos(i, j)] = -sum;
            }
        }
        return x;
    }

    std::string render(const Element& a) const {
        std::string out = "[";
        for (std::size_t t = 0; t < a.size(); ++t) out += (t ? "," : "") + std::to_string(a[t]);
        return out + "]";
    }

    static std::size_t hash(const Element& a) {
        std::size_t h = a.size();
        for (long long c : a) h = detail::mix_hash(h, static_cast<std::size_t>(c));
        return h;
    }

private:
    int n_;
};

// ---------------------------------------------------------------------------
// Free s-nilpotent group on d generators: exponential coordinates of the
// first kind over the Hall basis, multiplication by BCH.

class FreeNilpotentContext {
public:
    using Element = RationalVector;

    FreeNilpotentContext(int d, int s) : table_(std::make_shared<StructureTable>(d, s)) {}

    int d() const { return table_->d(); }
    int s() const { return table_->s(); }
    const StructureTable& table() const { return *table_; }

    Element identity() const { return RationalVector(static_cast<std::size_t>(table_->dim())); }
    Element generator(int g) const { return table_->generator(g); }
    Element multiply(const Element& a, const Element& b) const { return bch_product(a, b, *table_); }
    Element invert(const Element& a) const { return bch_inverse(a); }

    std::string render(const Element& a) const {
        std::string out = "(";
        for (std::size_t t = 0; t < a.size(); ++t) out += (t ? "," : "") + a[t].str();
        return out + ")";
    }

    static std::size_t hash(const Element& a) { return hash_rational_vector(a); }

private:
    std::shared_ptr<const StructureTable> table_;
};

// ---------------------------------------------------------------------------
// The group attached to a nilpotent Lie algebra whose chosen basis spans a
// lattice closed under brackets; elements are exponential coordinates.

class LieLatticeContext {
public:
    using Element = RationalVector;

    explicit LieLatticeContext(LieAlgebra algebra) : algebra_(std::make_shared<LieAlgebra>(validated(std::move(algebra)))) {
        const auto& ops = algebra_->ops;
        if (ops.step > kMaxBchStep) {
            throw std::invalid_argument("nilpotency class exceeds the supported BCH step");
        }
        for (int i = 0; i < ops.dim; ++i) {
            for (int j = 0; j < ops.dim; ++j) {
                for (const auto& c : ops.bracket(i, j)) {
                    if (!c.is_integer()) {
                        throw std::invalid_argument("basis lattice is not closed under brackets: [" +
                                                    algebra_->labels[static_cast<std::size_t>(i)] + "," +
                                                    algebra_->labels[static_cast<std::size_t>(j)] + "] leaves the lattice");
                    }
                }
            }
        }
    }

    const LieAlgebra& algebra() const { return *algebra_; }
    int dim() const { return algebra_->dim(); }

    Element identity() const { return RationalVector(static_cast<std::size_t>(dim())); }
    Element generator(int g) const {
        RationalVector v(static_cast<std::size_t>(dim()));
        v[static_cast<std::size_t>(g)] = Rational(1);
        return v;
    }
    Element multiply(const Element& a, const Element& b) const {
        return bch_product(a, b, algebra_->ops, algebra_->ops.step);
    }
    Element invert(const Element& a) const { return bch_inverse(a); }

    std::string render(const Element& a) const {
        std::string out = "(";
        for (std::size_t t = 0; t < a.size(); ++t) out += (t ? "," : "") + a[t].str();
        return out + ")";
    }

    static std::size_t hash(const Element& a) { return hash_rational_vector(a); }

private:
    std::shared_ptr<const LieAlgebra> algebra_;
};

// Z^d as the lattice group of the abelian algebra.
inline LieLatticeContext integer_lattice_context(int d) {
    return LieLatticeContext(make_lie_algebra(d, {}));
}

// ---------------------------------------------------------------------------
// Z/q, the explicitly finite cyclic quotient accepted by progression checks.

class CyclicContext {
public:
    using Element = long long;

    explicit CyclicContext(long long q) : q_(q) {
        if (q < 1) throw std::invalid_argument("cyclic modulus must be positive");
    }

    long long modulus() const { return q_; }
    Element identity() const { return 0; }
    Element multiply(const Element& a, const Element& b) const { return (a + b) % q_; }
    Element invert(const Element& a) const { return (q_ - a) % q_; }
    std::string render(const Element& a) const { return std::to_string(a) + " mod " + std::to_string(q_); }
    static std::size_t hash(const Element& a) { return static_cast<std::size_t>(a); }

private:
    long long q_;
};

// ---------------------------------------------------------------------------
// Generating sets: finite, symmetric, containing the identity.

template <typename Context>
struct GeneratingSet {
    Context context;
    std::vector<typename Context::Element> elements;  // sorted, deduplicated
};

// Throws, naming the offender, unless the set is symmetric and contains the
// identity.
template <typename Context>
void validate_generating_set(const Context& ctx, const std::vector<typename Context::Element>& elements) {
    std::set<typename Context::Element> all(elements.begin(), elements.end());
    if (!all.count(ctx.identity())) throw std::invalid_argument("generating set does not contain the identity");
    for (const auto& g : elements) {
        if (!all.count(ctx.invert(g))) {
            throw std::invalid_argument("generating set is not symmetric: missing inverse of " + ctx.render(g));
        }
    }
}

// Close a list of elements under inversion, adjoin the identity, and put the
// result in canonical sorted order.
template <typename Context>
GeneratingSet<Context> make_generating_set(const Context& ctx, std::vector<typename Context::Element> elements) {
    std::set<typename Context::Element> all(elements.begin(), elements.end());
    for (const auto& g : elements) all.insert(ctx.invert(g));
    all.insert(ctx.identity());
    GeneratingSet<Context> out{ctx, std::vector<typename Context::Element>(all.begin(), all.end())};
    validate_generating_set(ctx, out.elements);
    return out;
}

// Standard generating sets: one generator per "coordinate direction".
inline GeneratingSet<HeisenbergContext> standard_generators(const HeisenbergContext& ctx) {
    return make_generating_set(ctx, {HeisenbergElement{1, 0, 0}, HeisenbergElement{0, 1, 0}});
}

inline GeneratingSet<UnitriangularContext> standard_generators(const UnitriangularContext& ctx) {
    std::vector<UnitriangularElement> gens;
    for (int i = 0; i + 1 < ctx.n(); ++i) {
        UnitriangularElement e = ctx.identity();
        e[ctx.pos(i, i + 1)] = 1;
        gens.push_back(std::move(e));
    }
    return make_generating_set(ctx, std::move(gens));
}

inline GeneratingSet<FreeNilpotentContext> standard_generators(const FreeNilpotentContext& ctx) {
    std::vector<RationalVector> gens;
    for (int g = 0; g < ctx.d(); ++g) gens.push_back(ctx.generator(g));
    return make_generating_set(ctx, std::move(gens));
}

inline GeneratingSet<LieLatticeContext> standard_generators(const LieLatticeContext& ctx) {
    std::vector<RationalVector> gens;
    for (int g = 0; g < ctx.dim(); ++g) gens.push_back(ctx.generator(g));
    return make_generating_set(ctx, std::move(gens));
}

inline GeneratingSet<CyclicContext> standard_generators(const CyclicContext& ctx) {
    return make_generating_set(ctx, {1 % ctx.modulus()});
}

}  // namespace nilgrowth

#endif  // NILGROWTH_GROUPS_HPP
