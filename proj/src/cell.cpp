#include "hdg/cell.hpp"

#include <stdexcept>

namespace hdg {

std::string_view to_string(CellType type) {
  switch (type) {
    case CellType::Line: return "line";
    case CellType::Triangle: return "triangle";
    case CellType::Quadrilateral: return "quadrilateral";
    case CellType::Tetrahedron: return "tetrahedron";
    case CellType::Hexahedron: return "hexahedron";
  }
  return "unknown";
}

int dimension(CellType type) {
  switch (type) {
    case CellType::Line: return 1;
    case CellType::Triangle:
    case CellType::Quadrilateral: return 2;
    case CellType::Tetrahedron:
    case CellType::Hexahedron: return 3;
  }
  return 0;
}

int vertex_count(CellType type) {
  switch (type) {
    case CellType::Line: return 2;
    case CellType::Triangle: return 3;
    case CellType::Quadrilateral: return 4;
    case CellType::Tetrahedron: return 4;
    case CellType::Hexahedron: return 8;
  }
  return 0;
}

int face_count(CellType type) { return static_cast<int>(reference_faces(type).size()); }

bool is_simplex(CellType type) {
  return type == CellType::Line || type == CellType::Triangle || type == CellType::Tetrahedron;
}

CellType face_type(CellType type) {
  switch (type) {
    case CellType::Triangle:
    case CellType::Quadrilateral: return CellType::Line;
    case CellType::Tetrahedron: return CellType::Triangle;
    case CellType::Hexahedron: return CellType::Quadrilateral;
    case CellType::Line: break;
  }
  throw std::invalid_argument("line cells have no face cell type");
}

double reference_measure(CellType type) {
  switch (type) {
    case CellType::Line: return 2.0;
    case CellType::Triangle: return 0.5;
    case CellType::Quadrilateral: return 4.0;
    case CellType::Tetrahedron: return 1.0 / 6.0;
    case CellType::Hexahedron: return 8.0;
  }
  return 0.0;
}

const Eigen::MatrixXd& reference_vertices(CellType type) {
  static const Eigen::MatrixXd line = (Eigen::MatrixXd(2, 1) << -1, 1).finished();
  static const Eigen::MatrixXd tri = (Eigen::MatrixXd(3, 2) << 0, 0, 1, 0, 0, 1).finished();
  static const Eigen::MatrixXd quad =
      (Eigen::MatrixXd(4, 2) << -1, -1, 1, -1, 1, 1, -1, 1).finished();
  static const Eigen::MatrixXd tet =
      (Eigen::MatrixXd(4, 3) << 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1).finished();
  static const Eigen::MatrixXd hex = (Eigen::MatrixXd(8, 3) << -1, -1, -1, 1, -1, -1, 1, 1, -1,
                                      -1, 1, -1, -1, -1, 1, 1, -1, 1, 1, 1, 1, -1, 1, 1)
                                         .finished();
  switch (type) {
    case CellType::Line: return line;
    case CellType::Triangle: return tri;
    case CellType::Quadrilateral: return quad;
    case CellType::Tetrahedron: return tet;
    case CellType::Hexahedron: return hex;
  }
  throw std::invalid_argument("unknown cell type");
}

const std::vector<std::vector<int>>& reference_faces(CellType type) {
  static const std::vector<std::vector<int>> line = {{0}, {1}};
  static const std::vector<std::vector<int>> tri = {{0, 1}, {1, 2}, {2, 0}};
  static const std::vector<std::vector<int>> quad = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  static const std::vector<std::vector<int>> tet = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
  static const std::vector<std::vector<int>> hex = {{0, 1, 2, 3}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                                    {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
  switch (type) {
    case CellType::Line: return line;
    case CellType::Triangle: return tri;
    case CellType::Quadrilateral: return quad;
    case CellType::Tetrahedron: return tet;
    case CellType::Hexahedron: return hex;
  }
  throw std::invalid_argument("unknown cell type");
}

}  // namespace hdg
