// Builds a telescope, shuffles its points and recovers (q, K) from distances alone.
#include <mgeom/mgeom.hpp>

#include <iostream>

int main() {
    using namespace mgeom;
    random::Rng rng(7);
    TelescopeSpec spec;
    spec.levels = 8;
    for (std::size_t j = 0; j <= spec.levels; ++j) spec.q.push_back(random::unit(rng));
    spec.flavor = Flavor::ultrametric_v;
    spec.scale = 3.0;
    FloatSpace t = random::permuted(telescope(spec), random::permutation(rng, 1 + 3 * (spec.levels + 1)));
    FingerprintResult f = fingerprint(t);
    if (!f.ok) {
        std::cerr << "fingerprint failed: " << f.failure << "\n";
        return 1;
    }
    std::cout << "flavor " << to_string(f.flavor) << ", K = " << f.scale << ", accumulation point "
              << t.label(f.accumulation_point) << "\n";
    for (std::size_t j = 0; j < f.q.size(); ++j)
        std::cout << "q_" << j << " = " << f.q[j] << " (built with " << spec.q[j] << ")\n";
}
