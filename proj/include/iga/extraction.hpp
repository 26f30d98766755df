#pragma once

#include <vector>

#include "iga/knot_vector.hpp"
#include "iga/linalg.hpp"

namespace iga {

/// Bernstein polynomials of degree p on the parent interval [-1,1].
std::vector<double> bernstein(int p, double xt);

/// Per-element Bezier extraction operators C^e of an open knot vector:
/// the non-zero spline functions on element e are N^e(xi) = C^e B(xt),
/// where xt is the parent coordinate of xi inside the element.
std::vector<DenseMatrix> bezier_extract(const KnotVector& kv);

} // namespace iga
