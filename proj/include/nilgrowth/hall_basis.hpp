#ifndef NILGROWTH_HALL_BASIS_HPP
#define NILGROWTH_HALL_BASIS_HPP

// Basic commutators of the free s-nilpotent Lie algebra on d generators,
// with exact structure constants over the Hall basis.
//
// A basic commutator is either a generator f_1..f_d (weight 1) or a bracket
// [f_i, f_j] with i > j where, if f_i = [f_a, f_b], additionally j >= b.
// Every commutator carries a weight vector chi counting generator
// multiplicities; total weight is |chi|_1 and enumeration stops at weight s.
//
// Ordering: ascending total weight, then ascending lexicographic weight
// vector (so equal-weight-vector blocks are consecutive), then ascending
// (left, right) index pair. The set of retained commutators does not depend
// on the tie-break; the coordinates of elements do, which is why the order
// is pinned here.

#include "nilgrowth/rational.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nilgrowth {

using WeightVector = std::vector<int>;

struct BasicCommutator {
    int left = -1;   // basis index of the left factor, -1 for generators
    int right = -1;  // basis index of the right factor
    WeightVector chi;
    int weight = 1;

    bool is_generator() const { return left < 0; }
};

class HallBasis {
public:
    HallBasis(int d, int s) : d_(d), s_(s) {
        if (d < 1 || s < 1) throw std::invalid_argument("hall basis requires d >= 1 and s >= 1");
        for (int g = 0; g < d; ++g) {
            BasicCommutator c;
            c.chi.assign(d, 0);
            c.chi[g] = 1;
            c.weight = 1;
            basis_.push_back(std::move(c));
        }
        for (int w = 2; w <= s; ++w) {
            // Candidates [f_i, f_j]: i > j, weights sum to w, Hall condition.
            std::vector<std::pair<WeightVector, std::pair<int, int>>> block;
            int count = static_cast<int>(basis_.size());
            for (int i = 1; i < count; ++i) {
                for (int j = 0; j < i; ++j) {
                    if (basis_[i].weight + basis_[j].weight != w) continue;
                    if (!basis_[i].is_generator() && j < basis_[i].right) continue;
                    WeightVector chi(d_);
                    for (int g = 0; g < d_; ++g) chi[g] = basis_[i].chi[g] + basis_[j].chi[g];
                    block.push_back({std::move(chi), {i, j}});
                }
            }
            std::sort(block.begin(), block.end());
            for (auto& [chi, pair] : block) {
                BasicCommutator c;
                c.left = pair.first;
                c.right = pair.second;
                c.chi = std::move(chi);
                c.weight = w;
                pair_index_[pair] = static_cast<int>(basis_.size());
                basis_.push_back(std::move(c));
            }
        }
    }

    int d() const { return d_; }
    int s() const { return s_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const BasicCommutator& at(int i) const { return basis_.at(i); }
    const std::vector<BasicCommutator>& all() const { return basis_; }

    // Basis index of [f_i, f_j] if that pair is itself basic; -1 otherwise.
    int pair_index(int i, int j) const {
        auto it = pair_index_.find({i, j});
        return it == pair_index_.end() ? -1 : it->second;
    }

    // 1-based display name, e.g. "f3" or "[[f2,f1],f1]" for the expression.
    std::string label(int i) const { return "f" + std::to_string(i + 1); }
    std::string expression(int i) const {
        const auto& c = basis_.at(i);
        if (c.is_generator()) return label(i);
        return "[" + expression(c.left) + "," + expression(c.right) + "]";
    }

private:
    int d_;
    int s_;
    std::vector<BasicCommutator> basis_;
    std::map<std::pair<int, int>, int> pair_index_;
};

// Elements of the free algebra: exact coordinates over the Hall basis.
using FreeLieElement = RationalVector;

// Exact brackets of basis pairs for some nilpotent Lie algebra: the common
// currency of BCH products and ball enumeration. `step` bounds the
// nilpotency class (brackets deeper than `step` vanish).
struct BracketOps {
    int dim = 0;
    int step = 1;
    std::vector<RationalVector> table;  // (i*dim + j) -> [e_i, e_j] coordinates

    const RationalVector& bracket(int i, int j) const { return table[static_cast<std::size_t>(i) * dim + j]; }

    RationalVector bracket_elements(const RationalVector& x, const RationalVector& y) const {
        RationalVector out(dim);
        for (int i = 0; i < dim; ++i) {
            if (x[i].is_zero()) continue;
            for (int j = 0; j < dim; ++j) {
                if (y[j].is_zero()) continue;
                const RationalVector& b = bracket(i, j);
                Rational c = x[i] * y[j];
                for (int k = 0; k < dim; ++k) {
                    if (!b[k].is_zero()) out[k] += c * b[k];
                }
            }
        }
        return out;
    }
};

inline RationalVector vector_add(const RationalVector& a, const RationalVector& b) {
    RationalVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline RationalVector vector_scale(const Rational& c, const RationalVector& a) {
    RationalVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
    return out;
}

inline bool vector_is_zero(const RationalVector& a) {
    for (const auto& x : a) {
        if (!x.is_zero()) return false;
    }
    return true;
}

// Structure constants of the free s-nilpotent algebra over its Hall basis.
// Construction rewrites every pair [f_i, f_j] into basis coordinates by
// antisymmetry and the Jacobi identity (Hall's collection), then verifies
// the Jacobi identity exactly on all basis triples.
class StructureTable {
public:
    explicit StructureTable(HallBasis basis) : basis_(std::move(basis)) {
        const int r = basis_.dim();
        ops_.dim = r;
        ops_.step = basis_.s();
        ops_.table.assign(static_cast<std::size_t>(r) * r, RationalVector());
        state_.assign(static_cast<std::size_t>(r) * r, kEmpty);
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < r; ++j) resolve(i, j);
        }
        verify_jacobi();
    }

    StructureTable(int d, int s) : StructureTable(HallBasis(d, s)) {}

    const HallBasis& hall() const { return basis_; }
    const BracketOps& ops() const { return ops_; }
    int d() const { return basis_.d(); }
    int s() const { return basis_.s(); }
    int dim() const { return basis_.dim(); }

    const RationalVector& bracket(int i, int j) const { return ops_.bracket(i, j); }

    FreeLieElement zero() const { return FreeLieElement(basis_.dim()); }
    FreeLieElement generator(int g) const {
        FreeLieElement x(basis_.dim());
        x.at(static_cast<std::size_t>(g)) = Rational(1);
        return x;
    }

private:
    enum State : unsigned char { kEmpty, kBuilding, kDone };

    const RationalVector& resolve(int i, int j) {
        const int r = basis_.dim();
        std::size_t key = static_cast<std::size_t>(i) * r + j;
        if (state_[key] == kDone) return ops_.table[key];
        if (state_[key] == kBuilding) throw std::logic_error("hall rewriting cycle");
        state_[key] = kBuilding;

        RationalVector out(r);
        const auto& ci = basis_.at(i);
        const auto& cj = basis_.at(j);
        if (i != j && ci.weight + cj.weight <= basis_.s()) {
            if (i < j) {
                const RationalVector& flipped = resolve(j, i);
                for (int k = 0; k < r; ++k) out[k] = -flipped[k];
            } else if (int idx = basis_.pair_index(i, j); idx >= 0) {
                out[idx] = Rational(1);
            } else {
                // i is a bracket [a,b] with j < b; Jacobi gives
                // [[a,b], j] = [a, [b,j]] + [[a,j], b].
                int a = ci.left, b = ci.right;
                accumulate_bracket(out, a, resolve(b, j));
                accumulate_bracket_right(out, resolve(a, j), b);
            }
        }
        ops_.table[key] = std::move(out);
        state_[key] = kDone;
        return ops_.table[key];
    }

    // out += [f_a, X]
    void accumulate_bracket(RationalVector& out, int a, const RationalVector& x) {
        const int r = basis_.dim();
        for (int k = 0; k < r; ++k) {
            if (x[k].is_zero()) continue;
            const RationalVector& b = resolve(a, k);
            for (int t = 0; t < r; ++t) {
                if (!b[t].is_zero()) out[t] += x[k] * b[t];
            }
        }
    }

    // out += [X, f_b]
    void accumulate_bracket_right(RationalVector& out, const RationalVector& x, int b) {
        const int r = basis_.dim();
        for (int k = 0; k < r; ++k) {
            if (x[k].is_zero()) continue;
            const RationalVector& br = resolve(k, b);
            for (int t = 0; t < r; ++t) {
                if (!br[t].is_zero()) out[t] += x[k] * br[t];
            }
        }
    }

    void verify_jacobi() const {
        const int r = basis_.dim();
        for (int i = 0; i < r; ++i) {
            if (!vector_is_zero(ops_.bracket(i, i))) throw std::logic_error("[x,x] != 0 in structure table");
            for (int j = 0; j < i; ++j) {
                RationalVector sum = vector_add(ops_.bracket(i, j), ops_.bracket(j, i));
                if (!vector_is_zero(sum)) throw std::logic_error("antisymmetry violated in structure table");
            }
        }
        RationalVector unit_i(r), unit_j(r), unit_k(r);
        for (int i = 0; i < r; ++i) {
            for (int j = i + 1; j < r; ++j) {
                for (int k = j + 1; k < r; ++k) {
                    RationalVector acc = ops_.bracket_elements(ops_.bracket(i, j), unit_basis(k, r));
                    RationalVector t2 = ops_.bracket_elements(ops_.bracket(j, k), unit_basis(i, r));
                    RationalVector t3 = ops_.bracket_elements(ops_.bracket(k, i), unit_basis(j, r));
                    for (int t = 0; t < r; ++t) acc[t] += t2[t] + t3[t];
                    if (!vector_is_zero(acc)) throw std::logic_error("jacobi identity violated in structure table");
                }
            }
        }
    }

    static RationalVector unit_basis(int i, int r) {
        RationalVector v(r);
        v[static_cast<std::size_t>(i)] = Rational(1);
        return v;
    }

    HallBasis basis_;
    BracketOps ops_;
    std::vector<unsigned char> state_;
};

// Exact bilinear bracket of two elements, expanded in the Hall basis;
// terms of weight > s are already absent from the table.
inline FreeLieElement hall_rewrite_bracket(const FreeLieElement& a, const FreeLieElement& b,
                                           const StructureTable& table) {
    if (static_cast<int>(a.size()) != table.dim() || static_cast<int>(b.size()) != table.dim()) {
        throw std::invalid_argument("element dimension does not match structure table");
    }
    return table.ops().bracket_elements(a, b);
}

// L^chi = prod_j L_j^{chi_j}, the side length the nilbox assigns to a
// commutator of weight vector chi.
inline Rational chi_power(const std::vector<Rational>& lengths, const WeightVector& chi) {
    Rational out(1);
    for (std::size_t j = 0; j < chi.size(); ++j) {
        if (chi[j] > 0) out *= lengths[j].pow(static_cast<unsigned>(chi[j]));
    }
    return out;
}

// Membership of X in the real nilbox B_R(f; (mL)^chi):
// |coord_i(X)| <= prod_j (m L_j)^{chi_i[j]} for every basic commutator i.
inline bool nilbox_contains(const FreeLieElement& x, const std::vector<Rational>& lengths,
                            const Rational& m, const HallBasis& basis) {
    if (static_cast<int>(lengths.size()) != basis.d()) {
        throw std::invalid_argument("length vector does not match generator count");
    }
    if (static_cast<int>(x.size()) != basis.dim()) {
        throw std::invalid_argument("element dimension does not match basis");
    }
    std::vector<Rational> scaled(lengths.size());
    for (std::size_t j = 0; j < lengths.size(); ++j) scaled[j] = m * lengths[j];
    for (int i = 0; i < basis.dim(); ++i) {
        if (x[i].abs() > chi_power(scaled, basis.at(i).chi)) return false;
    }
    return true;
}

}  // namespace nilgrowth

#endif  // NILGROWTH_HALL_BASIS_HPP
