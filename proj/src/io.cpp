#include "supgmg/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

#include "supgmg/error.hpp"

namespace supgmg {

void write_vtk(const QuadMesh& mesh, std::ostream& out,
               std::span<const PointField> fields) {
  out << "# vtk DataFile Version 3.0\nsupgmg mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << std::setprecision(17);
  out << "POINTS " << mesh.num_nodes() << " double\n";
  for (const Point& p : mesh.nodes) out << p.x << ' ' << p.y << " 0\n";
  out << "CELLS " << mesh.num_cells() << ' ' << 5 * mesh.num_cells() << '\n';
  for (const auto& c : mesh.cells) {
    out << "4 " << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << c[3] << '\n';
  }
  out << "CELL_TYPES " << mesh.num_cells() << '\n';
  for (std::size_t i = 0; i < mesh.num_cells(); ++i) out << "9\n";
  out << "CELL_DATA " << mesh.num_cells() << "\nSCALARS region int 1\nLOOKUP_TABLE default\n";
  for (Region r : mesh.regions) out << static_cast<int>(r) << '\n';
  if (!fields.empty()) out << "POINT_DATA " << mesh.num_nodes() << '\n';
  for (const auto& [name, values] : fields) {
    require(values.size() == mesh.num_nodes(), "point field '" + name + "' has wrong size");
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : values) out << v << '\n';
  }
  if (!out) fail(ErrorCode::kIo, "failed writing VTK output");
}

void write_vtk(const QuadMesh& mesh, const std::string& path,
               std::span<const PointField> fields) {
  std::ofstream f(path);
  if (!f) fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  write_vtk(mesh, f, fields);
}

void write_partition(const Partition1D& p, std::ostream& out) {
  out << std::setprecision(17);
  for (double x : p.breakpoints()) out << x << '\n';
  if (!out) fail(ErrorCode::kIo, "failed writing partition");
}

}  // namespace supgmg
