#ifndef NILGROWTH_HEIS_FIBER_HPP
#define NILGROWTH_HEIS_FIBER_HPP

// Exact set arithmetic on subsets of the integer Heisenberg group.
//
// A subset is stored fiberwise: for each abelianized point (u, v), the set
// of central coordinates w is a sorted union of disjoint integer intervals.
// Products reduce to interval Minkowski sums shifted by u1*v2, so sets whose
// fibers are a few intervals (boxes, their powers, and unions of such)
// multiply in time proportional to the number of fibers rather than the
// number of elements. This is what makes c*n^8-element product sets
// tractable exactly.

#include "nilgrowth/groups.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nilgrowth {

class HeisenbergFiberSet {
public:
    using Interval = std::pair<long long, long long>;  // [lo, hi], inclusive
    using FiberKey = std::pair<long long, long long>;  // (u, v)
    using FiberMap = std::map<FiberKey, std::vector<Interval>>;

    HeisenbergFiberSet() = default;

    static HeisenbergFiberSet singleton(const HeisenbergElement& g) {
        HeisenbergFiberSet out;
        out.fibers_[{g[0], g[1]}] = {{g[2], g[2]}};
        return out;
    }

    static HeisenbergFiberSet identity_set() { return singleton({0, 0, 0}); }

    static HeisenbergFiberSet from_elements(const std::vector<HeisenbergElement>& elements) {
        FiberMap raw;
        for (const auto& g : elements) raw[{g[0], g[1]}].push_back({g[2], g[2]});
        HeisenbergFiberSet out;
        out.fibers_ = std::move(raw);
        out.normalize();
        return out;
    }

    // The box {(u, v, w) : |u| <= a, |v| <= b, |w| <= c}.
    static HeisenbergFiberSet box(long long a, long long b, long long c) {
        HeisenbergFiberSet out;
        for (long long u = -a; u <= a; ++u) {
            for (long long v = -b; v <= b; ++v) out.fibers_[{u, v}] = {{-c, c}};
        }
        return out;
    }

    const FiberMap& fibers() const { return fibers_; }
    bool empty() const { return fibers_.empty(); }

    unsigned long long cardinality() const {
        unsigned long long total = 0;
        for (const auto& [key, intervals] : fibers_) {
            for (const auto& [lo, hi] : intervals) {
                unsigned long long len = static_cast<unsigned long long>(hi - lo) + 1;
                if (__builtin_add_overflow(total, len, &total)) {
                    throw std::overflow_error("fiber set cardinality overflows 64 bits");
                }
            }
        }
        return total;
    }

    bool contains(const HeisenbergElement& g) const {
        auto it = fibers_.find({g[0], g[1]});
        if (it == fibers_.end()) return false;
        const auto& intervals = it->second;
        auto pos = std::upper_bound(intervals.begin(), intervals.end(), Interval{g[2], std::numeric_limits<long long>::max()});
        if (pos == intervals.begin()) return false;
        --pos;
        return pos->first <= g[2] && g[2] <= pos->second;
    }

    bool contains_set(const HeisenbergFiberSet& sub) const {
        for (const auto& [key, intervals] : sub.fibers_) {
            auto it = fibers_.find(key);
            if (it == fibers_.end()) return false;
            for (const auto& need : intervals) {
                bool inside = false;
                for (const auto& have : it->second) {
                    if (have.first <= need.first && need.second <= have.second) {
                        inside = true;
                        break;
                    }
                }
                if (!inside) return false;
            }
        }
        return true;
    }

    bool operator==(const HeisenbergFiberSet& o) const { return fibers_ == o.fibers_; }

    // Least element of *this \ other in lexicographic (u, v, w) order.
    std::optional<HeisenbergElement> first_not_in(const HeisenbergFiberSet& other) const {
        for (const auto& [key, intervals] : fibers_) {
            auto it = other.fibers_.find(key);
            if (it == other.fibers_.end()) {
                return HeisenbergElement{key.first, key.second, intervals.front().first};
            }
            const auto& cover = it->second;
            for (const auto& [lo, hi] : intervals) {
                long long w = lo;
                bool uncovered = true;
                for (const auto& c : cover) {
                    if (c.second < w) continue;
                    if (c.first > w) break;
                    if (c.second >= hi) {
                        uncovered = false;  // the rest of [w, hi] is covered
                        break;
                    }
                    w = c.second + 1;
                }
                if (uncovered) return HeisenbergElement{key.first, key.second, w};
            }
        }
        return std::nullopt;
    }

    HeisenbergFiberSet multiply(const HeisenbergFiberSet& other) const {
        FiberMap raw;
        for (const auto& [ka, ia] : fibers_) {
            for (const auto& [kb, ib] : other.fibers_) {
                long long shift = detail::checked_mul(ka.first, kb.second);
                auto& bucket = raw[{detail::checked_add(ka.first, kb.first), detail::checked_add(ka.second, kb.second)}];
                for (const auto& a : ia) {
                    for (const auto& b : ib) {
                        bucket.push_back({detail::checked_add(detail::checked_add(a.first, b.first), shift),
                                          detail::checked_add(detail::checked_add(a.second, b.second), shift)});
                    }
                }
            }
        }
        HeisenbergFiberSet out;
        out.fibers_ = std::move(raw);
        out.normalize();
        return out;
    }

    HeisenbergFiberSet inverse() const {
        FiberMap raw;
        for (const auto& [key, intervals] : fibers_) {
            long long shift = detail::checked_mul(key.first, key.second);
            auto& bucket = raw[{-key.first, -key.second}];
            for (const auto& [lo, hi] : intervals) {
                bucket.push_back({detail::checked_add(-hi, shift), detail::checked_add(-lo, shift)});
            }
        }
        HeisenbergFiberSet out;
        out.fibers_ = std::move(raw);
        out.normalize();
        return out;
    }

    HeisenbergFiberSet unite(const HeisenbergFiberSet& other) const {
        HeisenbergFiberSet out = *this;
        for (const auto& [key, intervals] : other.fibers_) {
            auto& bucket = out.fibers_[key];
            bucket.insert(bucket.end(), intervals.begin(), intervals.end());
        }
        out.normalize();
        return out;
    }

    HeisenbergFiberSet power(int m) const {
        if (m < 1) throw std::invalid_argument("fiber set power requires m >= 1");
        HeisenbergFiberSet out = *this;
        for (int t = 1; t < m; ++t) out = out.multiply(*this);
        return out;
    }

    std::vector<HeisenbergElement> to_elements(std::size_t budget) const {
        if (cardinality() > budget) throw BudgetExceeded("fiber set too large to materialize");
        std::vector<HeisenbergElement> out;
        out.reserve(static_cast<std::size_t>(cardinality()));
        for (const auto& [key, intervals] : fibers_) {
            for (const auto& [lo, hi] : intervals) {
                for (long long w = lo; w <= hi; ++w) out.push_back({key.first, key.second, w});
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    void normalize() {
        for (auto it = fibers_.begin(); it != fibers_.end();) {
            auto& intervals = it->second;
            std::sort(intervals.begin(), intervals.end());
            std::vector<Interval> merged;
            for (const auto& iv : intervals) {
                if (iv.second < iv.first) continue;
                if (!merged.empty() && iv.first <= merged.back().second + 1) {
                    merged.back().second = std::max(merged.back().second, iv.second);
                } else {
                    merged.push_back(iv);
                }
            }
            if (merged.empty()) {
                it = fibers_.erase(it);
            } else {
                intervals = std::move(merged);
                ++it;
            }
        }
    }

    FiberMap fibers_;
};

}  // namespace nilgrowth

#endif  // NILGROWTH_HEIS_FIBER_HPP
