#pragma once

#include "iga/patch.hpp"

namespace iga {

/// Insert the knot `xi_new` `times` times in one parametric direction.
/// Runs on homogeneous coordinates, so the geometry is unchanged.
NurbsPatch insert_knot(const NurbsPatch& patch, int direction, double xi_new, int times = 1);

/// Raise the degree in one parametric direction by `raise`; interior knot
/// multiplicities grow by `raise` so continuity is preserved.
NurbsPatch elevate_degree(const NurbsPatch& patch, int direction, int raise = 1);

/// One level of uniform h-refinement: insert the midpoint of every
/// non-degenerate span in every parametric direction, `levels` times.
NurbsPatch refine_uniform(const NurbsPatch& patch, int levels = 1);

} // namespace iga
