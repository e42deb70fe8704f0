#include "nilgrowth/balls.hpp"
#include "nilgrowth/groups.hpp"
#include "nilgrowth/heis_fiber.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <vector>

using namespace nilgrowth;

namespace {

// Independent oracle: materialize S^m = S * S^{m-1} as plain element sets.
template <typename Context>
std::vector<unsigned long long> naive_ball_sizes(const GeneratingSet<Context>& s, int m_max) {
    using Element = typename Context::Element;
    std::set<Element> ball = {s.context.identity()};
    std::vector<unsigned long long> sizes = {1};
    for (int m = 1; m <= m_max; ++m) {
        std::set<Element> next;
        for (const Element& g : s.elements) {
            for (const Element& h : ball) next.insert(s.context.multiply(g, h));
        }
        ball = std::move(next);
        sizes.push_back(ball.size());
    }
    return sizes;
}

std::vector<HeisenbergElement> random_heisenberg_set(std::mt19937& rng, int count, long long span) {
    std::uniform_int_distribution<long long> val(-span, span);
    std::set<HeisenbergElement> out;
    while (static_cast<int>(out.size()) < count) out.insert({val(rng), val(rng), val(rng)});
    return {out.begin(), out.end()};
}

// Frozen Heisenberg standard-generator ball sizes m = 0..30.
const std::vector<unsigned long long> kHeisenbergBalls = {
    1,     5,     17,    53,    135,   299,   593,    1069,   1793,   2845,   4309,
    6281,  8871,  12195, 16381, 21569, 27905, 35549,  44673,  55453,  68079,  82755,
    99689, 119101, 141225, 166301, 194581, 226329, 261815, 301323, 345149};

}  // namespace

TEST_CASE("fiber sets agree with brute-force set arithmetic") {
    HeisenbergContext h;
    std::mt19937 rng(41);
    for (int trial = 0; trial < 12; ++trial) {
        auto a = random_heisenberg_set(rng, 18, 3);
        auto b = random_heisenberg_set(rng, 15, 3);
        auto fa = HeisenbergFiberSet::from_elements(a);
        auto fb = HeisenbergFiberSet::from_elements(b);
        CHECK(fa.cardinality() == a.size());

        std::set<HeisenbergElement> brute;
        for (const auto& x : a) {
            for (const auto& y : b) brute.insert(h.multiply(x, y));
        }
        auto product = fa.multiply(fb);
        CHECK(product.cardinality() == brute.size());
        CHECK(product.to_elements(1 << 20) == std::vector<HeisenbergElement>(brute.begin(), brute.end()));

        std::set<HeisenbergElement> inv_brute;
        for (const auto& x : a) inv_brute.insert(h.invert(x));
        CHECK(fa.inverse().to_elements(1 << 20) == std::vector<HeisenbergElement>(inv_brute.begin(), inv_brute.end()));

        std::set<HeisenbergElement> union_brute(a.begin(), a.end());
        union_brute.insert(b.begin(), b.end());
        CHECK(fa.unite(fb).cardinality() == union_brute.size());

        for (const auto& g : a) CHECK(fa.contains(g));
        CHECK(fa.contains_set(fa));
        CHECK(fa.unite(fb).contains_set(fb));
    }

    SECTION("boxes and powers") {
        auto box = HeisenbergFiberSet::box(2, 2, 4);
        CHECK(box.cardinality() == 225);  // (2*2+1)^2 (2*4+1)
        auto s = box.unite(box.inverse());
        CHECK(s.cardinality() == 261);
        CHECK(s.power(2).cardinality() == 2057);
        CHECK(s.power(1) == s);
    }
}

TEST_CASE("ball growth on abelian lattices") {
    SECTION("the integer line") {
        auto z = integer_lattice_context(1);
        auto series = ball_growth(standard_generators(z), 5);
        std::vector<unsigned long long> balls;
        for (const auto& r : series.records) balls.push_back(r.ball);
        CHECK(balls == std::vector<unsigned long long>{1, 3, 5, 7, 9, 11});
        CHECK_FALSE(series.overflow);
    }
    SECTION("the plane follows 2m^2+2m+1") {
        auto z2 = integer_lattice_context(2);
        auto series = ball_growth(standard_generators(z2), 10);
        for (const auto& r : series.records) {
            CHECK(r.ball == 2ULL * r.m * r.m + 2 * r.m + 1);
        }
    }
    SECTION("series bookkeeping invariants") {
        auto z2 = integer_lattice_context(2);
        auto series = ball_growth(standard_generators(z2), 6);
        REQUIRE(series.records[0].ball == 1);
        for (std::size_t i = 1; i < series.records.size(); ++i) {
            const auto& prev = series.records[i - 1];
            const auto& cur = series.records[i];
            CHECK(cur.ball == prev.ball + cur.sphere);
            if (cur.sphere > 0) CHECK(cur.ball > prev.ball);
        }
    }
}

TEST_CASE("heisenberg ball growth matches the frozen series") {
    auto series = ball_growth(standard_generators(HeisenbergContext{}), 30);
    REQUIRE(series.records.size() == 31);
    for (int m = 0; m <= 30; ++m) {
        INFO("m=" << m);
        CHECK(series.records[static_cast<std::size_t>(m)].ball == kHeisenbergBalls[static_cast<std::size_t>(m)]);
    }
    CHECK_FALSE(series.overflow);
}

TEST_CASE("fiber-backed and generic BFS ball growth coincide") {
    auto s = standard_generators(HeisenbergContext{});
    auto fiber_series = ball_growth(s, 8);
    auto bfs_series = ball_growth<HeisenbergContext>(s, 8);  // force the generic template
    REQUIRE(fiber_series.records.size() == bfs_series.records.size());
    for (std::size_t i = 0; i < fiber_series.records.size(); ++i) {
        CHECK(fiber_series.records[i].ball == bfs_series.records[i].ball);
        CHECK(fiber_series.records[i].sphere == bfs_series.records[i].sphere);
    }

    // And a third representation: the same group as 3x3 unitriangular matrices.
    auto u3 = ball_growth(standard_generators(UnitriangularContext(3)), 8);
    for (std::size_t i = 0; i < u3.records.size(); ++i) CHECK(u3.records[i].ball == fiber_series.records[i].ball);
}

TEST_CASE("ball growth agrees with naive set products") {
    SECTION("heisenberg standard") {
        auto s = standard_generators(HeisenbergContext{});
        auto naive = naive_ball_sizes(s, 6);
        auto series = ball_growth(s, 6);
        for (int m = 0; m <= 6; ++m) CHECK(series.records[static_cast<std::size_t>(m)].ball == naive[static_cast<std::size_t>(m)]);
    }
    SECTION("heisenberg S(1,1)") {
        auto box = HeisenbergFiberSet::box(1, 1, 1);
        auto sset = box.unite(box.inverse());
        CHECK(sset.cardinality() == 31);
        auto gens = make_generating_set(HeisenbergContext{}, sset.to_elements(100));
        auto naive = naive_ball_sizes(gens, 3);
        auto series = ball_growth(gens, 3);
        for (int m = 0; m <= 3; ++m) CHECK(series.records[static_cast<std::size_t>(m)].ball == naive[static_cast<std::size_t>(m)]);
    }
    SECTION("free nilpotent (2,2)") {
        FreeNilpotentContext f(2, 2);
        auto s = standard_generators(f);
        auto naive = naive_ball_sizes(s, 4);
        auto series = ball_growth(s, 4);
        for (int m = 0; m <= 4; ++m) CHECK(series.records[static_cast<std::size_t>(m)].ball == naive[static_cast<std::size_t>(m)]);
    }
    SECTION("unitriangular 4") {
        auto s = standard_generators(UnitriangularContext(4));
        auto naive = naive_ball_sizes(s, 3);
        auto series = ball_growth(s, 3);
        for (int m = 0; m <= 3; ++m) CHECK(series.records[static_cast<std::size_t>(m)].ball == naive[static_cast<std::size_t>(m)]);
    }
}

TEST_CASE("finite groups exhaust and keep empty spheres") {
    CyclicContext z7(7);
    auto series = ball_growth(standard_generators(z7), 6);
    REQUIRE(series.records.size() == 7);
    CHECK(series.records[3].ball == 7);
    for (int m = 4; m <= 6; ++m) {
        CHECK(series.records[static_cast<std::size_t>(m)].ball == 7);
        CHECK(series.records[static_cast<std::size_t>(m)].sphere == 0);
    }
}

TEST_CASE("budget overflow returns the completed prefix") {
    SECTION("fiber path") {
        auto series = ball_growth(standard_generators(HeisenbergContext{}), 30, 5000);
        CHECK(series.overflow);
        CHECK(series.max_radius() == 10);  // ball(10) = 4309 fits, ball(11) = 6281 does not
        CHECK(series.ball(10) == 4309);
    }
    SECTION("generic path") {
        auto z2 = integer_lattice_context(2);
        auto series = ball_growth(standard_generators(z2), 100, 1000);
        CHECK(series.overflow);
        CHECK(series.max_radius() >= 5);
        for (const auto& r : series.records) CHECK(r.ball <= 1000);
    }
}

TEST_CASE("doubling ratios") {
    SECTION("integer line tends to 2") {
        auto z = integer_lattice_context(1);
        auto series = ball_growth(standard_generators(z), 41);
        auto entries = doubling_sequence(series, Rational(3));
        for (const auto& e : entries) {
            CHECK(e.ratio == Rational(4 * e.m + 3, 2 * e.m + 1));
            CHECK_FALSE(e.exceeds);
        }
    }
    SECTION("plane tends to 4") {
        auto z2 = integer_lattice_context(2);
        auto series = ball_growth(standard_generators(z2), 41);
        auto entries = doubling_sequence(series, Rational(5));
        for (const auto& e : entries) {
            if (e.m >= 10) {
                CHECK(e.ratio > Rational(39, 10));
                CHECK(e.ratio < Rational(9, 2));
            }
        }
    }
    SECTION("heisenberg window near 2^4") {
        auto series = ball_growth(standard_generators(HeisenbergContext{}), 29);
        auto entries = doubling_sequence(series, Rational(20));
        for (const auto& e : entries) {
            if (e.m >= 10) {
                CHECK(e.ratio > Rational(16));
                CHECK(e.ratio < Rational(20));
                CHECK_FALSE(e.exceeds);
            }
        }
        auto tight = doubling_sequence(series, Rational(16));
        bool any_flagged = false;
        for (const auto& e : tight) any_flagged |= e.exceeds;
        CHECK(any_flagged);
    }
    SECTION("insufficient series") {
        auto z = integer_lattice_context(1);
        auto series = ball_growth(standard_generators(z), 0);
        CHECK_THROWS_AS(doubling_sequence(series, Rational(2)), std::invalid_argument);
    }
}

TEST_CASE("approximate-group cover certificates") {
    SECTION("integer interval needs at most 3 translates") {
        auto z = integer_lattice_context(1);
        std::vector<RationalVector> box;
        for (long long t = -5; t <= 5; ++t) box.push_back(RationalVector{Rational(t)});
        auto cert = approx_cover(z, box);
        CHECK(cert.k() <= 3);
    }
    SECTION("plane box needs at most 9") {
        auto z2 = integer_lattice_context(2);
        std::vector<RationalVector> box;
        for (long long a = -2; a <= 2; ++a) {
            for (long long b = -2; b <= 2; ++b) box.push_back(RationalVector{Rational(a), Rational(b)});
        }
        auto cert = approx_cover(z2, box);
        CHECK(cert.k() <= 9);
    }
    SECTION("heisenberg S(2,4) reproduces the frozen greedy K") {
        auto box = HeisenbergFiberSet::box(2, 2, 4);
        auto sset = box.unite(box.inverse());
        auto a = sset.to_elements(1000);
        REQUIRE(a.size() == 261);
        HeisenbergContext h;
        auto cert = approx_cover(h, a);
        CHECK(cert.k() == 26);
        // Spot re-check of the certificate against the defining inclusion.
        std::set<HeisenbergElement> aset(a.begin(), a.end());
        std::mt19937 rng(47);
        std::uniform_int_distribution<std::size_t> pick(0, a.size() - 1);
        for (int trial = 0; trial < 200; ++trial) {
            HeisenbergElement p = h.multiply(a[pick(rng)], a[pick(rng)]);
            bool covered = false;
            for (const auto& x : cert.x) {
                if (aset.count(h.multiply(h.invert(x), p))) {
                    covered = true;
                    break;
                }
            }
            CHECK(covered);
        }
    }
    SECTION("budget enforcement") {
        auto z = integer_lattice_context(1);
        std::vector<RationalVector> box;
        for (long long t = -50; t <= 50; ++t) box.push_back(RationalVector{Rational(t)});
        CHECK_THROWS_AS(approx_cover(z, box, 100), BudgetExceeded);
    }
}

TEST_CASE("growth exponent fits") {
    SECTION("line, plane, heisenberg") {
        auto z = integer_lattice_context(1);
        auto fit1 = growth_exponent_fit(ball_growth(standard_generators(z), 50), 5, 50);
        CHECK(std::abs(fit1.slope - 1.0) < 0.05);

        auto z2 = integer_lattice_context(2);
        auto fit2 = growth_exponent_fit(ball_growth(standard_generators(z2), 40), 5, 40);
        CHECK(std::abs(fit2.slope - 2.0) < 0.15);

        auto fit4 = growth_exponent_fit(ball_growth(standard_generators(HeisenbergContext{}), 30), 5, 30);
        CHECK(std::abs(fit4.slope - 4.0) < 0.3);
    }
    SECTION("window validation") {
        auto z = integer_lattice_context(1);
        auto series = ball_growth(standard_generators(z), 10);
        CHECK_THROWS_AS(growth_exponent_fit(series, 0, 5), std::invalid_argument);
        CHECK_THROWS_AS(growth_exponent_fit(series, 5, 5), std::invalid_argument);
        CHECK_THROWS_AS(growth_exponent_fit(series, 5, 11), std::invalid_argument);
    }
}

TEST_CASE("lower growth bounds hold on the samples") {
    SECTION("sumset bound on rank-1 abelian runs") {
        auto z = integer_lattice_context(1);
        for (long long reach : {1, 3}) {
            auto gens = make_generating_set(z, {RationalVector{Rational(reach)}, RationalVector{Rational(1)}});
            auto series = ball_growth(gens, 20);
            unsigned long long s1 = series.ball(1);
            for (const auto& r : series.records) {
                if (r.m >= 1) CHECK(r.ball >= static_cast<unsigned long long>(r.m) * (s1 - 1));
            }
        }
    }
    SECTION("relative growth c stays positive and within a factor-10 band") {
        auto series = ball_growth(standard_generators(HeisenbergContext{}), 30);
        double cmin = 1e9, cmax = 0;
        for (int m = 5; m <= 30; ++m) {
            double c = static_cast<double>(series.ball(m)) / (std::pow(m, 3.0) * 5.0);
            cmin = std::min(cmin, c);
            cmax = std::max(cmax, c);
        }
        CHECK(cmin > 0);
        CHECK(cmax / cmin <= 10.0);

        auto z2 = integer_lattice_context(2);
        auto plane = ball_growth(standard_generators(z2), 40);
        cmin = 1e9, cmax = 0;
        for (int m = 5; m <= 40; ++m) {
            double c = static_cast<double>(plane.ball(m)) / (std::pow(m, 2.0) * 5.0);
            cmin = std::min(cmin, c);
            cmax = std::max(cmax, c);
        }
        CHECK(cmin > 0);
        CHECK(cmax / cmin <= 10.0);
    }
}

TEST_CASE("ball growth is deterministic") {
    auto s = standard_generators(HeisenbergContext{});
    auto a = ball_growth(s, 12);
    auto b = ball_growth(s, 12);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].ball == b.records[i].ball);
    }
}
