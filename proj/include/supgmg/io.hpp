#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "supgmg/mesh.hpp"

namespace supgmg {

using PointField = std::pair<std::string, std::span<const double>>;

/// Legacy ASCII VTK unstructured grid (quads, cell type 9) with the region
/// tag as cell data and any number of scalar point fields.
void write_vtk(const QuadMesh& mesh, std::ostream& out,
               std::span<const PointField> fields = {});
void write_vtk(const QuadMesh& mesh, const std::string& path,
               std::span<const PointField> fields = {});

/// One breakpoint per line.
void write_partition(const Partition1D& p, std::ostream& out);

}  // namespace supgmg
