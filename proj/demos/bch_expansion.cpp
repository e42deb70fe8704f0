// The Baker-Campbell-Hausdorff series in exact rational arithmetic:
// log(exp X exp Y) expanded over a Hall basis of the free nilpotent Lie
// algebra, truncated at increasing steps. All coefficients are exact; the
// familiar 1/2, 1/12, -1/24 pattern appears with no rounding anywhere.

#include "nilgrowth/bch.hpp"
#include "nilgrowth/hall_basis.hpp"
#include "nilgrowth/rational.hpp"

#include <cstdio>

using namespace nilgrowth;

namespace {

void expand(int s) {
    StructureTable table(2, s);
    const int dim = table.dim();
    RationalVector x(static_cast<std::size_t>(dim));
    RationalVector y(static_cast<std::size_t>(dim));
    x[0] = Rational(1);
    y[1] = Rational(1);

    RationalVector z = bch_product(x, y, table);
    std::printf("step %d (dimension %d):  log(exp x exp y) =\n", s, dim);
    for (int i = 0; i < dim; ++i) {
        const Rational& c = z[static_cast<std::size_t>(i)];
        if (c.is_zero()) continue;
        std::printf("  %8s * %s\n", c.str().c_str(), table.hall().expression(i).c_str());
    }
    std::printf("\n");
}

}  // namespace

int main() {
    std::printf("BCH expansion of two free generators, exact coefficients.\n\n");
    for (int s = 1; s <= 4; ++s) expand(s);

    // Associativity is exact as well: (x*y)*x == x*(y*x) coordinate by
    // coordinate, not merely up to numerical tolerance.
    StructureTable table(2, 4);
    RationalVector x(static_cast<std::size_t>(table.dim()));
    RationalVector y(static_cast<std::size_t>(table.dim()));
    x[0] = Rational(1, 3);
    y[1] = Rational(-5, 7);
    RationalVector left = bch_product(bch_product(x, y, table), x, table);
    RationalVector right = bch_product(x, bch_product(y, x, table), table);
    std::printf("associativity with x = (1/3) f1, y = (-5/7) f2 at step 4: %s\n",
                left == right ? "exact match" : "MISMATCH");
    return 0;
}
