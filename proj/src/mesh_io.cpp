#include "wingcrack/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>

#include "wingcrack/error.hpp"

namespace wingcrack {

void write_vtk(std::ostream& out, const Mesh& mesh, const VtkFields& fields) {
  out << "# vtk DataFile Version 3.0\nwingcrack\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << std::setprecision(17);
  out << "POINTS " << mesh.nodes.size() << " double\n";
  for (const Point& p : mesh.nodes) out << p.x << ' ' << p.y << " 0\n";
  out << "CELLS " << mesh.elements.size() << ' ' << mesh.elements.size() * 7 << '\n';
  for (const Element& e : mesh.elements) {
    out << 6;
    for (int n : e.nodes) out << ' ' << n;
    out << '\n';
  }
  out << "CELL_TYPES " << mesh.elements.size() << '\n';
  for (std::size_t i = 0; i < mesh.elements.size(); ++i) out << "22\n";
  if (!fields.cell_scalars.empty()) {
    out << "CELL_DATA " << mesh.elements.size() << '\n';
    for (const auto& [name, values] : fields.cell_scalars) {
      if (values.size() != mesh.elements.size()) throw Error("vtk cell field '" + name + "' has the wrong length");
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : values) out << v << '\n';
    }
  }
  if (!fields.point_scalars.empty() || !fields.point_vectors.empty()) {
    out << "POINT_DATA " << mesh.nodes.size() << '\n';
    for (const auto& [name, values] : fields.point_vectors) {
      if (values.size() != mesh.nodes.size()) throw Error("vtk point field '" + name + "' has the wrong length");
      out << "VECTORS " << name << " double\n";
      for (const Vec2& v : values) out << v.x << ' ' << v.y << " 0\n";
    }
    for (const auto& [name, values] : fields.point_scalars) {
      if (values.size() != mesh.nodes.size()) throw Error("vtk point field '" + name + "' has the wrong length");
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : values) out << v << '\n';
    }
  }
}

void write_vtk(const std::string& path, const Mesh& mesh, const VtkFields& fields) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_vtk(out, mesh, fields);
}

void write_mesh_text(std::ostream& out, const Mesh& mesh) {
  out << std::setprecision(17);
  out << "wingcrack-mesh 1\nnodes " << mesh.nodes.size() << '\n';
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
    out << mesh.nodes[i].x << ' ' << mesh.nodes[i].y << ' ' << static_cast<int>(mesh.kinds[i]) << '\n';
  out << "elements " << mesh.elements.size() << '\n';
  for (const Element& e : mesh.elements) {
    for (int k = 0; k < 6; ++k) out << (k ? " " : "") << e.nodes[static_cast<std::size_t>(k)];
    out << '\n';
  }
  out << "boundary_edges " << mesh.boundary_edges.size() << '\n';
  for (const BoundaryEdge& b : mesh.boundary_edges)
    out << b.nodes[0] << ' ' << b.nodes[1] << ' ' << b.nodes[2] << ' ' << b.domain_edge << '\n';
  out << "face_pairs " << mesh.fracture_face_pairs.size() << '\n';
  for (const FacePair& f : mesh.fracture_face_pairs)
    out << f.fracture << ' ' << f.plus[0] << ' ' << f.plus[1] << ' ' << f.plus[2] << ' ' << f.minus[0] << ' '
        << f.minus[1] << ' ' << f.minus[2] << '\n';
}

namespace {

std::size_t expect_section(std::istream& in, const std::string& name) {
  std::string word;
  std::size_t count = 0;
  if (!(in >> word >> count) || word != name) throw Error("mesh listing: expected section '" + name + "'");
  return count;
}

}  // namespace

Mesh read_mesh_text(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "wingcrack-mesh" || version != 1)
    throw Error("mesh listing: missing 'wingcrack-mesh 1' header");
  Mesh mesh;
  const std::size_t n = expect_section(in, "nodes");
  mesh.nodes.resize(n);
  mesh.kinds.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    int kind = 0;
    if (!(in >> mesh.nodes[i].x >> mesh.nodes[i].y >> kind) || kind < 0 || kind > 6)
      throw Error("mesh listing: bad node line " + std::to_string(i));
    mesh.kinds[i] = static_cast<NodeKind>(kind);
  }
  auto check_id = [&](int id) {
    if (id < 0 || static_cast<std::size_t>(id) >= n) throw Error("mesh listing: node id out of range");
  };
  const std::size_t ne = expect_section(in, "elements");
  mesh.elements.resize(ne);
  for (Element& e : mesh.elements) {
    for (int& id : e.nodes) {
      if (!(in >> id)) throw Error("mesh listing: truncated element section");
      check_id(id);
    }
  }
  const std::size_t nb = expect_section(in, "boundary_edges");
  mesh.boundary_edges.resize(nb);
  for (BoundaryEdge& b : mesh.boundary_edges) {
    if (!(in >> b.nodes[0] >> b.nodes[1] >> b.nodes[2] >> b.domain_edge)) throw Error("mesh listing: truncated boundary section");
    for (int id : b.nodes) check_id(id);
  }
  const std::size_t nf = expect_section(in, "face_pairs");
  mesh.fracture_face_pairs.resize(nf);
  for (FacePair& f : mesh.fracture_face_pairs) {
    if (!(in >> f.fracture >> f.plus[0] >> f.plus[1] >> f.plus[2] >> f.minus[0] >> f.minus[1] >> f.minus[2]))
      throw Error("mesh listing: truncated face-pair section");
    for (int id : f.plus) check_id(id);
    for (int id : f.minus) check_id(id);
  }
  return mesh;
}

}  // namespace wingcrack
