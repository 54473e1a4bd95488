#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hdg/cell.hpp"

namespace hdg {

/// Structured mesh families: quadrilaterals, triangles with a barycentre node
/// per square (tri1), triangles from one diagonal per square (tri2),
/// hexahedra, and six-tetrahedra Kuhn subdivisions of cubes.
enum class MeshFamily { Quad, Tri1, Tri2, Hex, Tet };

std::string_view to_string(MeshFamily family);
MeshFamily parse_mesh_family(std::string_view name);
int dimension(MeshFamily family);

enum class BoundaryTag { Interior, Dirichlet, Neumann };

struct Element {
  CellType type;
  std::vector<int> vertices;
};

/// One side of a face: the element, the local face number and, for every
/// vertex of the face parametrization, its local vertex index in the element.
struct FaceSide {
  int element = -1;
  int local_face = -1;
  std::vector<int> local_vertices;
};

/// A mesh face. `nodes` is the ascending sort of the global vertex ids; the
/// face parametrization (shared by both sides, so the trace is single valued)
/// uses `param`, which equals `nodes` for simplex faces and is the cyclic
/// order starting at the smallest id towards its smaller neighbour for
/// quadrilateral faces.
struct Face {
  CellType type;
  std::vector<int> nodes;
  std::vector<int> param;
  FaceSide left;
  std::optional<FaceSide> right;
  BoundaryTag tag = BoundaryTag::Interior;

  bool is_boundary() const { return !right.has_value(); }
};

/// Axis-aligned box.
struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  static Box unit(int dim);
};

/// Straight-sided conforming mesh. Immutable once built; boundary faces start
/// out tagged Dirichlet.
class Mesh {
 public:
  /// Builds faces and adjacency. Throws std::invalid_argument when an element
  /// has repeated or out-of-range vertices, a face is shared by more than two
  /// elements, or an element is inverted.
  Mesh(int dim, Eigen::MatrixXd nodes, std::vector<Element> elements);

  int dim() const { return dim_; }
  int num_nodes() const { return static_cast<int>(nodes_.rows()); }
  int num_elements() const { return static_cast<int>(elements_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }

  const Eigen::MatrixXd& nodes() const { return nodes_; }
  const std::vector<Element>& elements() const { return elements_; }
  const Element& element(int e) const { return elements_[e]; }
  const std::vector<Face>& faces() const { return faces_; }
  const Face& face(int f) const { return faces_[f]; }

  /// Mesh face id of every local face of element e.
  const std::vector<int>& element_faces(int e) const { return element_faces_[e]; }

  /// nv x dim vertex coordinates of element e.
  Eigen::MatrixXd element_vertices(int e) const;
  Eigen::VectorXd face_centroid(int f) const;

  int count_faces(BoundaryTag tag) const;
  int count_internal_faces() const;
  bool has_neumann() const { return count_faces(BoundaryTag::Neumann) > 0; }

 private:
  friend Mesh classify_boundary(Mesh mesh, const std::function<bool(const Eigen::VectorXd&)>&);
  friend Mesh permute_elements(const Mesh& mesh, const std::vector<int>& permutation);

  void build_faces();
  void validate() const;

  int dim_;
  Eigen::MatrixXd nodes_;
  std::vector<Element> elements_;
  std::vector<Face> faces_;
  std::vector<std::vector<int>> element_faces_;
};

/// Uniform mesh of `domain` with n subdivisions per axis.
Mesh generate_cartesian_mesh(const Box& domain, int n, MeshFamily family);

/// Tags every boundary face Neumann when its centroid satisfies the
/// predicate and Dirichlet otherwise.
Mesh classify_boundary(Mesh mesh, const std::function<bool(const Eigen::VectorXd&)>& neumann);

/// Same mesh with the elements listed in the order given by `permutation`
/// (new element i is old element permutation[i]).
Mesh permute_elements(const Mesh& mesh, const std::vector<int>& permutation);

}  // namespace hdg
