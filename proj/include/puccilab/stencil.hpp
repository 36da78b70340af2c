#pragma once

#include <array>
#include <vector>

namespace puccilab {

// Lattice directions (p, q) with gcd(|p|,|q|) = 1 and max(|p|,|q|) <= W,
// one per antipodal pair, grouped into orthogonal frames (e, e_perp) with
// e_perp = (-q, p).
struct StencilSet {
    struct Direction {
        int p, q;
        double ux, uy;          // unit vector
        double lattice_length;  // sqrt(p^2 + q^2), nominal arm in units of h
    };

    int width = 1;
    std::vector<Direction> directions;
    // Each frame stores two indices into `directions`.
    std::vector<std::array<int, 2>> frames;

    static StencilSet make(int width);
};

}  // namespace puccilab
