#pragma once

#include <random>
#include <vector>

#include "iga/geometry.hpp"
#include "iga/patch.hpp"

namespace iga::testing {

inline std::mt19937& rng() {
    static std::mt19937 gen(20240117u);
    return gen;
}

inline double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng());
}

/// Random interior parametric point of a patch, kept away from the ends.
inline Vec3 random_param(const NurbsPatch& patch, double margin = 1e-3) {
    Vec3 xi;
    for (int d = 0; d < patch.dim(); ++d)
        xi[d] = uniform(patch.kv(d).front() + margin, patch.kv(d).back() - margin);
    return xi;
}

/// A spread of patches used by the property suites.
inline std::vector<NurbsPatch> property_patches() {
    std::vector<NurbsPatch> patches;
    patches.push_back(quarter_circle_arc());
    patches.push_back(line_patch(0.0, 1.0, 3, 4));
    patches.push_back(unit_square());
    patches.push_back(quarter_annulus(0.3, 0.5));
    patches.push_back(plate_with_hole(4.0, 1.0));
    patches.push_back(box_patch(1.0, 2.0, 0.5, 2, 1, 2, 2, 2, 1));
    return patches;
}

/// Naive Cox-de-Boor recursion straight from the definition; the independent
/// oracle for basis values (index i is the global function index).
inline double cox_de_boor(const std::vector<double>& U, int i, int p, double xi) {
    if (p == 0) {
        // half-open spans, with the conventional closure at the last knot
        const bool last = U[i + 1] == U.back() && xi == U.back();
        return (U[i] <= xi && (xi < U[i + 1] || last)) ? 1.0 : 0.0;
    }
    double left = 0.0, right = 0.0;
    const double dl = U[i + p] - U[i];
    const double dr = U[i + p + 1] - U[i + 1];
    if (dl > 0.0) left = (xi - U[i]) / dl * cox_de_boor(U, i, p - 1, xi);
    if (dr > 0.0) right = (U[i + p + 1] - xi) / dr * cox_de_boor(U, i + 1, p - 1, xi);
    return left + right;
}

} // namespace iga::testing
