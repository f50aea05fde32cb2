// GH versus u_GH between a dyadic Cantor truncation and its (1+eps) dilation.
#include <mgeom/mgeom.hpp>

#include <iostream>

int main() {
    using namespace mgeom;
    ExactSpace x = enumerate_exact(CantorSpec(BranchingSequence::constant(2), sequences::geometric(1), 4));
    std::vector<Rational> eps = {Rational(1), Rational(1, 10), Rational(1, 100)};
    std::cout << "eps        gh<=        ugh        ugh/gh>=\n";
    for (const auto& row : qiu_demo(x, eps)) {
        std::cout << to_string(row.eps) << "  " << to_string(row.gh_upper) << "  " << to_string(row.ugh) << "  "
                  << to_string(row.certified_ratio) << "\n";
    }
}
