#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace hdg {

enum class CellType { Line, Triangle, Quadrilateral, Tetrahedron, Hexahedron };

std::string_view to_string(CellType type);

int dimension(CellType type);
int vertex_count(CellType type);
int face_count(CellType type);
bool is_simplex(CellType type);
CellType face_type(CellType type);

/// Measure of the reference cell: line [-1,1] -> 2, triangle 1/2, quad 4, tet 1/6, hex 8.
double reference_measure(CellType type);

/// Reference vertex coordinates, one row per vertex.
///
/// Triangle (0,0),(1,0),(0,1); quad [-1,1]^2 counterclockwise; tet unit
/// corner; hex [-1,1]^3 with the bottom face counterclockwise first.
const Eigen::MatrixXd& reference_vertices(CellType type);

/// Local vertex lists of each face. Quadrilateral faces are listed in cyclic
/// order so that they can be parametrized bilinearly.
const std::vector<std::vector<int>>& reference_faces(CellType type);

}  // namespace hdg
