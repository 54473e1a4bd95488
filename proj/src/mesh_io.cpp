#include "hdg/mesh_io.hpp"

#include <fstream>
#include <stdexcept>

#include "hdg/report.hpp"

namespace hdg {

namespace {

std::vector<double> row_major(const Eigen::MatrixXd& m) {
  std::vector<double> v;
  v.reserve(m.size());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
  return v;
}

nlohmann::json matrix_rows(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    std::vector<double> r(m.cols());
    for (int j = 0; j < m.cols(); ++j) r[j] = m(i, j);
    rows.push_back(r);
  }
  return rows;
}

std::string_view tag_name(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Interior: return "interior";
    case BoundaryTag::Dirichlet: return "dirichlet";
    case BoundaryTag::Neumann: return "neumann";
  }
  return "?";
}

int vtk_cell_type(CellType type) {
  switch (type) {
    case CellType::Line: return 3;
    case CellType::Triangle: return 5;
    case CellType::Quadrilateral: return 9;
    case CellType::Tetrahedron: return 10;
    case CellType::Hexahedron: return 12;
  }
  return 0;
}

}  // namespace

nlohmann::json mesh_to_json(const Mesh& mesh) {
  nlohmann::json elements = nlohmann::json::array();
  for (const auto& el : mesh.elements())
    elements.push_back({{"type", std::string(to_string(el.type))}, {"vertices", el.vertices}});
  nlohmann::json faces = nlohmann::json::array();
  for (const auto& f : mesh.faces()) {
    nlohmann::json j = {{"nodes", f.nodes}, {"tag", std::string(tag_name(f.tag))}, {"left", f.left.element}};
    if (f.right) j["right"] = f.right->element;
    faces.push_back(j);
  }
  return {{"dim", mesh.dim()}, {"nodes", matrix_rows(mesh.nodes())}, {"elements", elements}, {"faces", faces}};
}

nlohmann::json fields_to_json(const Mesh& mesh, const SolutionFields& fields, const PostprocessedField& ustar) {
  nlohmann::json elements = nlohmann::json::array();
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementFields& ef = fields.elements[e];
    nlohmann::json j = {{"u", matrix_rows(ef.u)},
                        {"p", row_major(ef.p.transpose())},
                        {"L", matrix_rows(ef.L)},
                        {"rho", fields.rho(e)}};
    if (e < static_cast<int>(ustar.elements.size())) j["ustar"] = matrix_rows(ustar.elements[e]);
    elements.push_back(j);
  }
  nlohmann::json traces = nlohmann::json::array();
  for (int f = 0; f < mesh.num_faces(); ++f)
    if (fields.face_traces[f].size() > 0) traces.push_back({{"face", f}, {"uhat", matrix_rows(fields.face_traces[f])}});
  return {{"degree", fields.degree},
          {"ustar_degree", ustar.degree},
          {"nsd", fields.nsd},
          {"pure_dirichlet", fields.pure_dirichlet},
          {"elements", elements},
          {"face_traces", traces}};
}

void write_vtk(const std::string& path, const Mesh& mesh, const SolutionFields& fields,
               const PostprocessedField& ustar) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  const int nsd = mesh.dim();
  int npoints = 0, connectivity = 0;
  for (const auto& el : mesh.elements()) {
    npoints += static_cast<int>(el.vertices.size());
    connectivity += static_cast<int>(el.vertices.size()) + 1;
  }

  out << "# vtk DataFile Version 3.0\nhdg stokes solution\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << npoints << " double\n";
  for (const auto& el : mesh.elements())
    for (int v : el.vertices) {
      for (int d = 0; d < 3; ++d) out << (d ? " " : "") << format_double(d < nsd ? mesh.nodes()(v, d) : 0.0);
      out << '\n';
    }
  out << "CELLS " << mesh.num_elements() << ' ' << connectivity << '\n';
  int next = 0;
  for (const auto& el : mesh.elements()) {
    out << el.vertices.size();
    for (std::size_t i = 0; i < el.vertices.size(); ++i) out << ' ' << next++;
    out << '\n';
  }
  out << "CELL_TYPES " << mesh.num_elements() << '\n';
  for (const auto& el : mesh.elements()) out << vtk_cell_type(el.type) << '\n';

  // Nodal bases list the vertices first, so vertex values are coefficients.
  const auto vectors = [&](const char* name, auto&& coefficients) {
    out << "VECTORS " << name << " double\n";
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const Eigen::MatrixXd& c = coefficients(e);
      for (std::size_t v = 0; v < mesh.element(e).vertices.size(); ++v) {
        for (int d = 0; d < 3; ++d) out << (d ? " " : "") << format_double(d < nsd ? c(d, v) : 0.0);
        out << '\n';
      }
    }
  };
  out << "POINT_DATA " << npoints << '\n';
  vectors("u", [&](int e) -> const Eigen::MatrixXd& { return fields.elements[e].u; });
  vectors("ustar", [&](int e) -> const Eigen::MatrixXd& { return ustar.elements[e]; });
  out << "SCALARS p double 1\nLOOKUP_TABLE default\n";
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (std::size_t v = 0; v < mesh.element(e).vertices.size(); ++v)
      out << format_double(fields.elements[e].p(v)) << '\n';
  const int msd = static_cast<int>(fields.elements.empty() ? 0 : fields.elements[0].L.rows());
  out << "FIELD mixed 1\nL " << msd << ' ' << npoints << " double\n";
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (std::size_t v = 0; v < mesh.element(e).vertices.size(); ++v) {
      for (int r = 0; r < msd; ++r) out << (r ? " " : "") << format_double(fields.elements[e].L(r, v));
      out << '\n';
    }
  if (!out) throw std::runtime_error("error while writing " + path);
}

}  // namespace hdg
