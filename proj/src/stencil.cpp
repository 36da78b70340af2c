#include "puccilab/stencil.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace puccilab {

namespace {

// Canonical representative of an antipodal pair: p > 0, or p == 0 and q > 0.
bool is_canonical(int p, int q) { return p > 0 || (p == 0 && q > 0); }

}  // namespace

StencilSet StencilSet::make(int width) {
    if (width < 1) throw std::invalid_argument("StencilSet: width must be >= 1");
    StencilSet s;
    s.width = width;
    for (int p = -width; p <= width; ++p) {
        for (int q = -width; q <= width; ++q) {
            if (p == 0 && q == 0) continue;
            if (!is_canonical(p, q)) continue;
            if (std::gcd(std::abs(p), std::abs(q)) != 1) continue;
            const double len = std::sqrt(double(p * p + q * q));
            s.directions.push_back({p, q, p / len, q / len, len});
        }
    }
    auto find = [&s](int p, int q) {
        if (!is_canonical(p, q)) { p = -p; q = -q; }
        for (std::size_t i = 0; i < s.directions.size(); ++i)
            if (s.directions[i].p == p && s.directions[i].q == q) return int(i);
        return -1;
    };
    for (std::size_t i = 0; i < s.directions.size(); ++i) {
        const auto& d = s.directions[i];
        const int j = find(-d.q, d.p);
        if (j < 0 || std::size_t(j) < i) continue;  // perpendicular missing or pair already seen
        s.frames.push_back({int(i), j});
    }
    return s;
}

}  // namespace puccilab
