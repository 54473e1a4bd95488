#pragma once

#include <string>

#include "json.hpp"

#include "hdg/global_solver.hpp"
#include "hdg/mesh.hpp"
#include "hdg/postprocess.hpp"

namespace hdg {

/// Nodes, element connectivity and tagged faces.
nlohmann::json mesh_to_json(const Mesh& mesh);

/// Element-wise nodal coefficients of u, p, L and u*, face traces and element
/// mean pressures.
nlohmann::json fields_to_json(const Mesh& mesh, const SolutionFields& fields, const PostprocessedField& ustar);

/// Legacy ASCII VTK unstructured grid. Every element gets its own copy of its
/// vertices, so the point data (u, p, L, u* at the vertices) stays
/// discontinuous. Throws std::runtime_error when the file cannot be written.
void write_vtk(const std::string& path, const Mesh& mesh, const SolutionFields& fields,
               const PostprocessedField& ustar);

}  // namespace hdg
