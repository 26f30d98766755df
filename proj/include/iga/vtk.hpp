#pragma once

#include <string>

#include "iga/mesh.hpp"
#include "iga/post.hpp"

namespace iga {

/// 17-significant-digit float formatting with a lowercase exponent; frozen
/// so emitted files are byte-stable.
std::string vtk_format(double v);

enum class VtkFormat { LegacyAscii, XmlUnstructured, XmlStructured };

/// Write the bundle on the visualization mesh. 2D/1D cases use legacy .vtk
/// or .vtu; 3D uses the structured .vts layout over the unique-knot grid.
/// Point data arrays are named `displacement` and `stress`.
void write_vtk(const ResultBundle& bundle, const VisualizationMesh& vis,
               const std::string& path, VtkFormat format);

} // namespace iga
