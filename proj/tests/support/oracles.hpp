#ifndef NILGROWTH_TESTS_SUPPORT_ORACLES_HPP
#define NILGROWTH_TESTS_SUPPORT_ORACLES_HPP

// Independent cross-checks used by the test suite.
//
// - witt_dimension: necklace-count formula for the rank of the weight-k
//   layer of a free Lie algebra on d generators.
// - TruncatedTensor: the free associative algebra on d letters, truncated
//   beyond degree s. Commutator trees embed via phi([a,b]) = ab - ba; this
//   realizes the free nilpotent Lie algebra inside an algebra whose
//   multiplication is independent of the Hall rewriting under test, so
//   structure constants and BCH products can be verified exactly against
//   exp/log identities.

#include "nilgrowth/hall_basis.hpp"
#include "nilgrowth/rational.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace nilgrowth::testing {

inline int moebius(int n) {
    int out = 1;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        n /= p;
        if (n % p == 0) return 0;
        out = -out;
    }
    if (n > 1) out = -out;
    return out;
}

// Number of basic commutators of total weight k on d generators.
inline long long witt_dimension(int d, int k) {
    long long sum = 0;
    for (int m = 1; m <= k; ++m) {
        if (k % m != 0) continue;
        long long power = 1;
        for (int t = 0; t < k / m; ++t) power *= d;
        sum += moebius(m) * power;
    }
    return sum / k;
}

class TruncatedTensor {
public:
    using Word = std::vector<std::uint8_t>;

    TruncatedTensor(int d, int s) : d_(d), s_(s) {}

    int d() const { return d_; }
    int s() const { return s_; }

    static TruncatedTensor letter(int g, int d, int s) {
        TruncatedTensor out(d, s);
        out.terms_[{static_cast<std::uint8_t>(g)}] = Rational(1);
        return out;
    }

    static TruncatedTensor unit(int d, int s) {
        TruncatedTensor out(d, s);
        out.terms_[{}] = Rational(1);
        return out;
    }

    TruncatedTensor& operator+=(const TruncatedTensor& o) {
        for (const auto& [w, c] : o.terms_) {
            auto it = terms_.find(w);
            if (it == terms_.end()) {
                terms_[w] = c;
            } else if ((it->second += c).is_zero()) {
                terms_.erase(it);
            }
        }
        return *this;
    }

    TruncatedTensor operator+(const TruncatedTensor& o) const {
        TruncatedTensor out = *this;
        out += o;
        return out;
    }

    TruncatedTensor operator-() const {
        TruncatedTensor out(d_, s_);
        for (const auto& [w, c] : terms_) out.terms_[w] = -c;
        return out;
    }

    TruncatedTensor operator-(const TruncatedTensor& o) const { return *this + (-o); }

    TruncatedTensor scaled(const Rational& c) const {
        TruncatedTensor out(d_, s_);
        if (c.is_zero()) return out;
        for (const auto& [w, coeff] : terms_) out.terms_[w] = c * coeff;
        return out;
    }

    TruncatedTensor operator*(const TruncatedTensor& o) const {
        TruncatedTensor out(d_, s_);
        for (const auto& [wa, ca] : terms_) {
            for (const auto& [wb, cb] : o.terms_) {
                if (static_cast<int>(wa.size() + wb.size()) > s_) continue;
                Word w = wa;
                w.insert(w.end(), wb.begin(), wb.end());
                auto it = out.terms_.find(w);
                if (it == out.terms_.end()) {
                    Rational c = ca * cb;
                    if (!c.is_zero()) out.terms_[w] = c;
                } else if ((it->second += ca * cb).is_zero()) {
                    out.terms_.erase(it);
                }
            }
        }
        return out;
    }

    TruncatedTensor commutator(const TruncatedTensor& o) const { return *this * o - o * *this; }

    // exp of an element with zero constant term (all inputs here are).
    TruncatedTensor exp() const {
        TruncatedTensor out = unit(d_, s_);
        TruncatedTensor power = unit(d_, s_);
        BigInt factorial = 1;
        for (int k = 1; k <= s_; ++k) {
            power = power * *this;
            factorial *= k;
            out += power.scaled(Rational(BigInt(1), factorial));
        }
        return out;
    }

    bool operator==(const TruncatedTensor& o) const { return terms_ == o.terms_; }
    bool is_zero() const { return terms_.empty(); }

private:
    int d_;
    int s_;
    std::map<Word, Rational> terms_;
};

// phi: Hall-basis index -> tensor image of its commutator tree.
inline TruncatedTensor tensor_image(int index, const HallBasis& basis) {
    const auto& c = basis.at(index);
    if (c.is_generator()) {
        int g = 0;
        while (c.chi[g] == 0) ++g;
        return TruncatedTensor::letter(g, basis.d(), basis.s());
    }
    return tensor_image(c.left, basis).commutator(tensor_image(c.right, basis));
}

// phi extended linearly to coordinate vectors.
inline TruncatedTensor tensor_image(const FreeLieElement& x, const HallBasis& basis) {
    TruncatedTensor out(basis.d(), basis.s());
    for (int i = 0; i < basis.dim(); ++i) {
        if (!x[i].is_zero()) out += tensor_image(i, basis).scaled(x[i]);
    }
    return out;
}

}  // namespace nilgrowth::testing

#endif  // NILGROWTH_TESTS_SUPPORT_ORACLES_HPP
