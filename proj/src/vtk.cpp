#include "iga/vtk.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace iga {

std::string vtk_format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void write_point_data(std::ostream& os, const ResultBundle& b, bool xml) {
    const size_t n = b.displacement.size();
    if (xml) {
        os << "      <PointData>\n";
        os << "        <DataArray type=\"Float64\" Name=\"displacement\" "
              "NumberOfComponents=\"3\" format=\"ascii\">\n";
        for (size_t i = 0; i < n; ++i)
            os << "          " << vtk_format(b.displacement[i].x) << " "
               << vtk_format(b.displacement[i].y) << " " << vtk_format(b.displacement[i].z)
               << "\n";
        os << "        </DataArray>\n";
        if (b.n_stress > 0) {
            os << "        <DataArray type=\"Float64\" Name=\"stress\" NumberOfComponents=\""
               << b.n_stress << "\" format=\"ascii\">\n";
            for (size_t i = 0; i < n; ++i) {
                os << "         ";
                for (int c = 0; c < b.n_stress; ++c) os << " " << vtk_format(b.stress[i][c]);
                os << "\n";
            }
            os << "        </DataArray>\n";
        }
        os << "      </PointData>\n";
    } else {
        os << "POINT_DATA " << n << "\n";
        os << "VECTORS displacement double\n";
        for (size_t i = 0; i < n; ++i)
            os << vtk_format(b.displacement[i].x) << " " << vtk_format(b.displacement[i].y)
               << " " << vtk_format(b.displacement[i].z) << "\n";
        if (b.n_stress > 0) {
            os << "FIELD FieldData 1\n";
            os << "stress " << b.n_stress << " " << n << " double\n";
            for (size_t i = 0; i < n; ++i) {
                for (int c = 0; c < b.n_stress; ++c)
                    os << (c ? " " : "") << vtk_format(b.stress[i][c]);
                os << "\n";
            }
        }
    }
}

void write_legacy(const ResultBundle& b, const VisualizationMesh& vis, std::ostream& os) {
    os << "# vtk DataFile Version 3.0\n";
    os << "igacore results\n";
    os << "ASCII\n";
    os << "DATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << vis.nodes.size() << " double\n";
    for (const Vec3& p : vis.nodes)
        os << vtk_format(p.x) << " " << vtk_format(p.y) << " " << vtk_format(p.z) << "\n";
    size_t total = 0;
    for (const auto& c : vis.cells) total += c.size() + 1;
    os << "CELLS " << vis.cells.size() << " " << total << "\n";
    for (const auto& c : vis.cells) {
        os << c.size();
        for (int id : c) os << " " << id;
        os << "\n";
    }
    os << "CELL_TYPES " << vis.cells.size() << "\n";
    for (size_t i = 0; i < vis.cells.size(); ++i) os << vis.vtk_cell_type << "\n";
    write_point_data(os, b, false);
}

void write_vtu(const ResultBundle& b, const VisualizationMesh& vis, std::ostream& os) {
    os << "<?xml version=\"1.0\"?>\n";
    os << "<VTKFile type=\"UnstructuredGrid\" version=\"0.1\" byte_order=\"LittleEndian\">\n";
    os << "  <UnstructuredGrid>\n";
    os << "    <Piece NumberOfPoints=\"" << vis.nodes.size() << "\" NumberOfCells=\""
       << vis.cells.size() << "\">\n";
    write_point_data(os, b, true);
    os << "      <Points>\n";
    os << "        <DataArray type=\"Float64\" NumberOfComponents=\"3\" format=\"ascii\">\n";
    for (const Vec3& p : vis.nodes)
        os << "          " << vtk_format(p.x) << " " << vtk_format(p.y) << " "
           << vtk_format(p.z) << "\n";
    os << "        </DataArray>\n      </Points>\n";
    os << "      <Cells>\n";
    os << "        <DataArray type=\"Int32\" Name=\"connectivity\" format=\"ascii\">\n";
    for (const auto& c : vis.cells) {
        os << "         ";
        for (int id : c) os << " " << id;
        os << "\n";
    }
    os << "        </DataArray>\n";
    os << "        <DataArray type=\"Int32\" Name=\"offsets\" format=\"ascii\">\n";
    size_t off = 0;
    for (const auto& c : vis.cells) {
        off += c.size();
        os << "          " << off << "\n";
    }
    os << "        </DataArray>\n";
    os << "        <DataArray type=\"UInt8\" Name=\"types\" format=\"ascii\">\n";
    for (size_t i = 0; i < vis.cells.size(); ++i) os << "          " << vis.vtk_cell_type << "\n";
    os << "        </DataArray>\n";
    os << "      </Cells>\n";
    os << "    </Piece>\n  </UnstructuredGrid>\n</VTKFile>\n";
}

void write_vts(const ResultBundle& b, const VisualizationMesh& vis, std::ostream& os) {
    const int nx = vis.grid[0] - 1, ny = vis.grid[1] - 1, nz = vis.grid[2] - 1;
    os << "<?xml version=\"1.0\"?>\n";
    os << "<VTKFile type=\"StructuredGrid\" version=\"0.1\" byte_order=\"LittleEndian\">\n";
    os << "  <StructuredGrid WholeExtent=\"0 " << nx << " 0 " << ny << " 0 " << nz << "\">\n";
    os << "    <Piece Extent=\"0 " << nx << " 0 " << ny << " 0 " << nz << "\">\n";
    write_point_data(os, b, true);
    os << "      <Points>\n";
    os << "        <DataArray type=\"Float64\" NumberOfComponents=\"3\" format=\"ascii\">\n";
    for (const Vec3& p : vis.nodes)
        os << "          " << vtk_format(p.x) << " " << vtk_format(p.y) << " "
           << vtk_format(p.z) << "\n";
    os << "        </DataArray>\n      </Points>\n";
    os << "    </Piece>\n  </StructuredGrid>\n</VTKFile>\n";
}

}  // namespace

void write_vtk(const ResultBundle& bundle, const VisualizationMesh& vis,
               const std::string& path, VtkFormat format) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    switch (format) {
        case VtkFormat::LegacyAscii: write_legacy(bundle, vis, os); break;
        case VtkFormat::XmlUnstructured: write_vtu(bundle, vis, os); break;
        case VtkFormat::XmlStructured: write_vts(bundle, vis, os); break;
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

} // namespace iga
