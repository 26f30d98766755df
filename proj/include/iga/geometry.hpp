#pragma once

#include "iga/patch.hpp"

namespace iga {

/// Open uniform knot vector with the given degree and span count on [0,1].
KnotVector uniform_open_knots(int degree, int n_spans);

/// 1D line segment [x0, x1], degree p, control points at Greville abscissae
/// so the parameterization is affine.
NurbsPatch line_patch(double x0, double x1, int degree, int n_spans);

/// Axis-aligned rectangle with Greville-placed control points (affine map).
NurbsPatch rectangle_patch(double lx, double ly, int px, int py, int nex, int ney);

/// Axis-aligned box, Greville-placed control points.
NurbsPatch box_patch(double lx, double ly, double lz, int px, int py, int pz,
                     int nex, int ney, int nez);

/// Bilinear unit square (one element, unit weights).
NurbsPatch unit_square();

/// Exact quarter annulus in the first quadrant, inner radius a, outer b;
/// quadratic in the arc direction, linear radially.
NurbsPatch quarter_annulus(double a, double b);

/// Exact quarter circle arc of radius 1 from (1,0) to (0,1), p=2.
NurbsPatch quarter_circle_arc();

/// Quarter plate with a circular hole (second quadrant, symmetric quarter of
/// the classical infinite-plate benchmark): side L, hole radius R, quadratic,
/// two elements along the arc direction.
NurbsPatch plate_with_hole(double L, double R);

/// One octant of a cylindrical shell volume discretized with solid NURBS:
/// quadratic exact 90-degree arc, linear through thickness and length.
NurbsPatch cylinder_octant(double radius, double thickness, double half_length);

} // namespace iga
