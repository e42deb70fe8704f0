#ifndef NILGROWTH_LINALG_HPP
#define NILGROWTH_LINALG_HPP

// Exact rational linear algebra: reduced row echelon form, canonical
// subspaces, nullspaces, determinants, and square solves. Everything here
// is over ℚ; no floating point.

#include "nilgrowth/rational.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace nilgrowth {

using RationalMatrix = std::vector<RationalVector>;  // rows of equal length

// In-place reduced row echelon form; returns the pivot column of each
// retained row. Zero rows are removed.
inline std::vector<int> rref(RationalMatrix& rows) {
    std::vector<int> pivots;
    if (rows.empty()) return pivots;
    std::size_t cols = rows[0].size();
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows.size(); ++col) {
        std::size_t pivot = row;
        while (pivot < rows.size() && rows[pivot][col].is_zero()) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[row], rows[pivot]);
        Rational inv = rows[row][col].inverse();
        for (std::size_t c = col; c < cols; ++c) rows[row][c] *= inv;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == row || rows[r][col].is_zero()) continue;
            Rational factor = rows[r][col];
            for (std::size_t c = col; c < cols; ++c) rows[r][c] -= factor * rows[row][c];
        }
        pivots.push_back(static_cast<int>(col));
        ++row;
    }
    rows.resize(pivots.size());
    return pivots;
}

// A linear subspace of ℚ^n in canonical form: RREF basis rows.
class Subspace {
public:
    explicit Subspace(int ambient) : ambient_(ambient) {}

    static Subspace span(RationalMatrix vectors, int ambient) {
        Subspace out(ambient);
        for (const auto& v : vectors) {
            if (static_cast<int>(v.size()) != ambient) throw std::invalid_argument("span: wrong vector length");
        }
        out.basis_ = std::move(vectors);
        out.pivots_ = rref(out.basis_);
        return out;
    }

    static Subspace full(int ambient) {
        RationalMatrix rows(static_cast<std::size_t>(ambient), RationalVector(ambient));
        for (int i = 0; i < ambient; ++i) rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Rational(1);
        return span(std::move(rows), ambient);
    }

    int ambient_dim() const { return ambient_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const RationalMatrix& basis() const { return basis_; }
    const std::vector<int>& pivots() const { return pivots_; }

    // Residue of v after eliminating all pivot coordinates; zero iff v lies
    // in the subspace.
    RationalVector reduce(RationalVector v) const {
        for (std::size_t r = 0; r < basis_.size(); ++r) {
            std::size_t p = static_cast<std::size_t>(pivots_[r]);
            if (v[p].is_zero()) continue;
            Rational factor = v[p];
            for (std::size_t c = 0; c < v.size(); ++c) v[c] -= factor * basis_[r][c];
        }
        return v;
    }

    bool contains(const RationalVector& v) const { return vector_is_zero(reduce(v)); }

    bool contains(const Subspace& other) const {
        for (const auto& row : other.basis_) {
            if (!contains(row)) return false;
        }
        return true;
    }

    bool operator==(const Subspace& o) const {
        return ambient_ == o.ambient_ && basis_ == o.basis_;
    }

private:
    int ambient_;
    RationalMatrix basis_;
    std::vector<int> pivots_;
};

// Right nullspace {x : A x = 0} of the matrix with the given rows.
inline Subspace nullspace(RationalMatrix rows, int cols) {
    std::vector<int> pivots = rref(rows);
    std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
    for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
    RationalMatrix basis;
    for (int free = 0; free < cols; ++free) {
        if (is_pivot[static_cast<std::size_t>(free)]) continue;
        RationalVector v(cols);
        v[static_cast<std::size_t>(free)] = Rational(1);
        for (std::size_t r = 0; r < pivots.size(); ++r) {
            v[static_cast<std::size_t>(pivots[r])] = -rows[r][static_cast<std::size_t>(free)];
        }
        basis.push_back(std::move(v));
    }
    return Subspace::span(std::move(basis), cols);
}

inline Rational determinant(RationalMatrix m) {
    std::size_t n = m.size();
    for (const auto& row : m) {
        if (row.size() != n) throw std::invalid_argument("determinant: matrix not square");
    }
    Rational det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col].is_zero()) ++pivot;
        if (pivot == n) return Rational(0);
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det *= m[col][col];
        Rational inv = m[col][col].inverse();
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m[r][col].is_zero()) continue;
            Rational factor = m[r][col] * inv;
            for (std::size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
        }
    }
    return det;
}

// Solve A x = b for square A; empty result when A is singular.
inline std::optional<RationalVector> solve_square(const RationalMatrix& a, const RationalVector& b) {
    std::size_t n = a.size();
    RationalMatrix aug = a;
    for (std::size_t r = 0; r < n; ++r) aug[r].push_back(b[r]);
    std::vector<int> pivots = rref(aug);
    if (pivots.size() != n) return std::nullopt;
    for (std::size_t r = 0; r < n; ++r) {
        if (pivots[r] != static_cast<int>(r)) return std::nullopt;  // pivot in the b column
    }
    RationalVector x(n);
    for (std::size_t r = 0; r < n; ++r) x[r] = aug[r][n];
    return x;
}

}  // namespace nilgrowth

#endif  // NILGROWTH_LINALG_HPP
