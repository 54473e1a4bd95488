#include "hdg/mesh.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hdg/geometry.hpp"

namespace hdg {

std::string_view to_string(MeshFamily family) {
  switch (family) {
    case MeshFamily::Quad: return "quad";
    case MeshFamily::Tri1: return "tri1";
    case MeshFamily::Tri2: return "tri2";
    case MeshFamily::Hex: return "hex";
    case MeshFamily::Tet: return "tet";
  }
  return "unknown";
}

MeshFamily parse_mesh_family(std::string_view name) {
  for (auto f : {MeshFamily::Quad, MeshFamily::Tri1, MeshFamily::Tri2, MeshFamily::Hex,
                 MeshFamily::Tet})
    if (to_string(f) == name) return f;
  throw std::invalid_argument("unknown mesh family '" + std::string(name) + "'");
}

int dimension(MeshFamily family) {
  return (family == MeshFamily::Hex || family == MeshFamily::Tet) ? 3 : 2;
}

Box Box::unit(int dim) { return Box{Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim)}; }

Mesh::Mesh(int dim, Eigen::MatrixXd nodes, std::vector<Element> elements)
    : dim_(dim), nodes_(std::move(nodes)), elements_(std::move(elements)) {
  if (dim_ != 2 && dim_ != 3) throw std::invalid_argument("Mesh: dimension must be 2 or 3");
  if (nodes_.cols() != dim_) throw std::invalid_argument("Mesh: node coordinates have wrong width");
  validate();
  build_faces();
}

void Mesh::validate() const {
  for (int e = 0; e < num_elements(); ++e) {
    const auto& el = elements_[e];
    if (dimension(el.type) != dim_)
      throw std::invalid_argument("Mesh: element " + std::to_string(e) + " has wrong dimension");
    if (static_cast<int>(el.vertices.size()) != vertex_count(el.type))
      throw std::invalid_argument("Mesh: element " + std::to_string(e) + " has wrong vertex count");
    auto sorted = el.vertices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("Mesh: element " + std::to_string(e) + " repeats a vertex");
    if (sorted.front() < 0 || sorted.back() >= num_nodes())
      throw std::invalid_argument("Mesh: element " + std::to_string(e) + " vertex out of range");
    // Multilinear maps: a positive Jacobian at the vertices and centroid.
    const Eigen::MatrixXd x = element_vertices(e);
    const auto& ref = reference_vertices(el.type);
    for (int v = 0; v <= ref.rows(); ++v) {
      const Eigen::VectorXd xi =
          v < ref.rows() ? Eigen::VectorXd(ref.row(v).transpose())
                         : Eigen::VectorXd(ref.colwise().mean().transpose());
      try {
        (void)map_physical(el.type, x, xi);
      } catch (const std::domain_error&) {
        throw std::invalid_argument("Mesh: element " + std::to_string(e) + " is inverted");
      }
    }
  }
}

namespace {

std::vector<int> quad_parametrization(const std::vector<int>& cyclic) {
  const int m = static_cast<int>(cyclic.size());
  const int start = static_cast<int>(std::min_element(cyclic.begin(), cyclic.end()) - cyclic.begin());
  const int next = cyclic[(start + 1) % m];
  const int prev = cyclic[(start + m - 1) % m];
  const int step = next < prev ? 1 : m - 1;
  std::vector<int> out(m);
  for (int i = 0; i < m; ++i) out[i] = cyclic[(start + i * step) % m];
  return out;
}

}  // namespace

void Mesh::build_faces() {
  std::map<std::vector<int>, int> lookup;
  element_faces_.assign(elements_.size(), {});
  for (int e = 0; e < num_elements(); ++e) {
    const auto& el = elements_[e];
    const auto& local_faces = reference_faces(el.type);
    for (int lf = 0; lf < static_cast<int>(local_faces.size()); ++lf) {
      std::vector<int> global;
      for (int lv : local_faces[lf]) global.push_back(el.vertices[lv]);
      std::vector<int> key = global;
      std::sort(key.begin(), key.end());

      auto [it, inserted] = lookup.try_emplace(key, num_faces());
      if (inserted) {
        Face face;
        face.type = face_type(el.type);
        face.nodes = key;
        face.param = face.type == CellType::Quadrilateral ? quad_parametrization(global) : key;
        faces_.push_back(std::move(face));
      }
      Face& face = faces_[it->second];
      FaceSide side{e, lf, {}};
      for (int g : face.param)
        side.local_vertices.push_back(static_cast<int>(
            std::find(el.vertices.begin(), el.vertices.end(), g) - el.vertices.begin()));
      if (inserted) {
        face.left = std::move(side);
      } else if (!face.right) {
        face.right = std::move(side);
      } else {
        throw std::invalid_argument("Mesh: face shared by more than two elements");
      }
      element_faces_[e].push_back(it->second);
    }
  }
  for (auto& f : faces_) f.tag = f.is_boundary() ? BoundaryTag::Dirichlet : BoundaryTag::Interior;
}

Eigen::MatrixXd Mesh::element_vertices(int e) const {
  const auto& v = elements_[e].vertices;
  Eigen::MatrixXd x(v.size(), dim_);
  for (std::size_t i = 0; i < v.size(); ++i) x.row(i) = nodes_.row(v[i]);
  return x;
}

Eigen::VectorXd Mesh::face_centroid(int f) const {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim_);
  for (int n : faces_[f].nodes) c += nodes_.row(n).transpose();
  return c / static_cast<double>(faces_[f].nodes.size());
}

int Mesh::count_faces(BoundaryTag tag) const {
  return static_cast<int>(
      std::count_if(faces_.begin(), faces_.end(), [tag](const Face& f) { return f.tag == tag; }));
}

int Mesh::count_internal_faces() const { return count_faces(BoundaryTag::Interior); }

Mesh generate_cartesian_mesh(const Box& domain, int n, MeshFamily family) {
  if (n < 1) throw std::invalid_argument("generate_cartesian_mesh: n must be >= 1");
  const int dim = dimension(family);
  if (domain.lower.size() != dim || domain.upper.size() != dim)
    throw std::invalid_argument("generate_cartesian_mesh: family '" +
                                std::string(to_string(family)) + "' needs a " +
                                std::to_string(dim) + "D domain");
  if (((domain.upper - domain.lower).array() <= 0.0).any())
    throw std::invalid_argument("generate_cartesian_mesh: empty box");

  const Eigen::VectorXd h = (domain.upper - domain.lower) / n;
  const int np = n + 1;
  std::vector<Element> elements;

  if (dim == 2) {
    const int ngrid = np * np;
    const int ncenter = family == MeshFamily::Tri1 ? n * n : 0;
    Eigen::MatrixXd nodes(ngrid + ncenter, 2);
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i)
        nodes.row(j * np + i) << domain.lower(0) + i * h(0), domain.lower(1) + j * h(1);
    auto id = [np](int i, int j) { return j * np + i; };
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const int v00 = id(i, j), v10 = id(i + 1, j), v11 = id(i + 1, j + 1), v01 = id(i, j + 1);
        switch (family) {
          case MeshFamily::Quad:
            elements.push_back({CellType::Quadrilateral, {v00, v10, v11, v01}});
            break;
          case MeshFamily::Tri2:
            elements.push_back({CellType::Triangle, {v00, v10, v11}});
            elements.push_back({CellType::Triangle, {v00, v11, v01}});
            break;
          case MeshFamily::Tri1: {
            const int c = ngrid + j * n + i;
            nodes.row(c) << domain.lower(0) + (i + 0.5) * h(0), domain.lower(1) + (j + 0.5) * h(1);
            elements.push_back({CellType::Triangle, {v00, v10, c}});
            elements.push_back({CellType::Triangle, {v10, v11, c}});
            elements.push_back({CellType::Triangle, {v11, v01, c}});
            elements.push_back({CellType::Triangle, {v01, v00, c}});
            break;
          }
          default: break;
        }
      }
    return Mesh(2, std::move(nodes), std::move(elements));
  }

  Eigen::MatrixXd nodes(np * np * np, 3);
  auto id = [np](int i, int j, int k) { return (k * np + j) * np + i; };
  for (int k = 0; k < np; ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i)
        nodes.row(id(i, j, k)) << domain.lower(0) + i * h(0), domain.lower(1) + j * h(1),
            domain.lower(2) + k * h(2);

  // Kuhn subdivision: one tetrahedron per axis permutation, all sharing the
  // main diagonal, identical in every cube so neighbouring faces match.
  static constexpr std::array<std::array<int, 3>, 6> perms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        if (family == MeshFamily::Hex) {
          elements.push_back({CellType::Hexahedron,
                              {id(i, j, k), id(i + 1, j, k), id(i + 1, j + 1, k), id(i, j + 1, k),
                               id(i, j, k + 1), id(i + 1, j, k + 1), id(i + 1, j + 1, k + 1),
                               id(i, j + 1, k + 1)}});
          continue;
        }
        for (const auto& p : perms) {
          std::array<int, 3> c = {i, j, k};
          std::vector<int> verts = {id(c[0], c[1], c[2])};
          for (int axis : p) {
            ++c[axis];
            verts.push_back(id(c[0], c[1], c[2]));
          }
          const Eigen::Vector3d a = nodes.row(verts[1]) - nodes.row(verts[0]);
          const Eigen::Vector3d b = nodes.row(verts[2]) - nodes.row(verts[0]);
          const Eigen::Vector3d d = nodes.row(verts[3]) - nodes.row(verts[0]);
          if (a.cross(b).dot(d) < 0.0) std::swap(verts[1], verts[2]);
          elements.push_back({CellType::Tetrahedron, std::move(verts)});
        }
      }
  return Mesh(3, std::move(nodes), std::move(elements));
}

Mesh classify_boundary(Mesh mesh, const std::function<bool(const Eigen::VectorXd&)>& neumann) {
  for (int f = 0; f < mesh.num_faces(); ++f) {
    Face& face = mesh.faces_[f];
    if (!face.is_boundary()) continue;
    face.tag = neumann(mesh.face_centroid(f)) ? BoundaryTag::Neumann : BoundaryTag::Dirichlet;
  }
  return mesh;
}

Mesh permute_elements(const Mesh& mesh, const std::vector<int>& permutation) {
  if (static_cast<int>(permutation.size()) != mesh.num_elements())
    throw std::invalid_argument("permute_elements: permutation has wrong length");
  std::vector<Element> elements;
  elements.reserve(permutation.size());
  for (int old : permutation) elements.push_back(mesh.element(old));
  Mesh out(mesh.dim(), mesh.nodes(), std::move(elements));

  std::map<std::vector<int>, BoundaryTag> tags;
  for (const auto& f : mesh.faces())
    if (f.is_boundary()) tags[f.nodes] = f.tag;
  for (auto& f : out.faces_)
    if (f.is_boundary()) f.tag = tags.at(f.nodes);
  return out;
}

}  // namespace hdg
