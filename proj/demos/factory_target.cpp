// Assembles an ultrametric Cantor space for a dimensional type given on the command line.
#include <mgeom/mgeom.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace mgeom;
    try {
        DimensionalType target = DimensionalType::parse(argc > 1 ? argv[1] : "0.5,0.7,1.3,2.0");
        CantorAssembly a = prescribed_factory(target);
        std::cout << "target " << target.str() << "\n";
        for (const auto& c : a.components) {
            ComponentEstimate e = component_estimate(c, 10'000);
            std::cout << "  " << c.provenance << " -> " << c.scaled.str() << ", window h ~ " << e.h.str(6)
                      << ", p ~ " << e.p.str(6) << "\n";
        }
        std::cout << "componentwise max " << a.max_of_components().str() << "\n";
        AnySpace s = enumerate_assembly(a, 128);
        std::cout << "finite truncation: " << to_float(s).size() << " points\n";
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}
