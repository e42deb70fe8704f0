// Side-by-side word growth of three lattices: the line, the plane, and the
// integer Heisenberg group. Prints ball sizes, doubling ratios, and the
// log-log slope next to the exponent the Bass-Guivarc'h formula predicts
// from the Lie algebra alone.

#include "nilgrowth/balls.hpp"
#include "nilgrowth/groups.hpp"
#include "nilgrowth/heisenberg.hpp"
#include "nilgrowth/lie_algebra.hpp"

#include <cstdio>
#include <string>
#include <vector>

using namespace nilgrowth;

namespace {

struct Column {
    std::string name;
    int predicted;  // homogeneous dimension of the corresponding algebra
    GrowthSeries series;
};

void print_table(const std::vector<Column>& cols, int m_max) {
    std::printf("%4s", "m");
    for (const auto& c : cols) std::printf("  %14s", c.name.c_str());
    std::printf("\n");
    for (int m = 0; m <= m_max; ++m) {
        std::printf("%4d", m);
        for (const auto& c : cols) std::printf("  %14llu", c.series.ball(m));
        std::printf("\n");
    }
}

}  // namespace

int main() {
    const int m_max = 20;

    RationalVector z_coord(3);
    z_coord[2] = Rational(1);
    LieAlgebra heis = validated(make_lie_algebra(3, {{0, 1, z_coord}}));

    std::vector<Column> cols;
    cols.push_back({"Z", homogeneous_dimension(make_lie_algebra(1, {})),
                    ball_growth(standard_generators(integer_lattice_context(1)), m_max)});
    cols.push_back({"Z^2", homogeneous_dimension(make_lie_algebra(2, {})),
                    ball_growth(standard_generators(integer_lattice_context(2)), m_max)});
    cols.push_back({"Heisenberg", homogeneous_dimension(heis),
                    ball_growth(standard_generators(HeisenbergContext{}), m_max)});

    std::printf("Word-metric ball sizes |B(m)| with standard generators\n\n");
    print_table(cols, m_max);

    const int m_half = (m_max - 1) / 2;
    std::printf("\nDoubling ratios |S^(2m+1)| / |S^m| at m = %d:\n", m_half);
    for (const auto& c : cols) {
        auto entries = doubling_sequence(c.series, Rational(1000));
        const auto& e = entries[static_cast<std::size_t>(m_half)];
        std::printf("  %-12s %s ~ %.3f\n", c.name.c_str(), e.ratio.str().c_str(), e.ratio.to_double());
    }

    std::printf("\nLog-log slope on [%d, %d] vs. the homogeneous dimension:\n", 5, m_max);
    for (const auto& c : cols) {
        GrowthFit fit = growth_exponent_fit(c.series, 5, m_max);
        std::printf("  %-12s measured %.4f, Bass-Guivarc'h exponent %d\n", c.name.c_str(), fit.slope, c.predicted);
    }

    std::printf("\nPolynomial growth of degree hdim, visible already at radius %d.\n", m_max);
    return 0;
}
