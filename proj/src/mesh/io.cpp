#include "sgmix/mesh/io.hpp"

#include <fstream>

namespace sgmix {

LoadedMesh mesh_from_json(const nlohmann::json& j) {
  require(j.is_object() && j.contains("vertices") && j.contains("triangles"),
          "mesh JSON needs 'vertices' and 'triangles'");
  LoadedMesh out;
  std::vector<Vec2> verts;
  std::vector<std::array<int, 3>> tris;
  try {
    for (const auto& p : j.at("vertices")) {
      require(p.is_array() && p.size() == 2, "vertex entries must be [x, y]");
      verts.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    for (const auto& t : j.at("triangles")) {
      require(t.is_array() && t.size() == 3, "triangle entries must be [i, j, k]");
      tris.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed mesh JSON: ") + e.what());
  }
  for (std::size_t t = 0; t < tris.size(); ++t) {
    auto& tri = tris[t];
    bool valid = true;
    for (int v : tri) valid = valid && v >= 0 && v < static_cast<int>(verts.size());
    if (!valid) continue;  // reported by the Triangulation constructor
    if (signed_area(verts[tri[0]], verts[tri[1]], verts[tri[2]]) < 0.0) {
      std::swap(tri[1], tri[2]);
      out.warnings.push_back("triangle " + std::to_string(t) + " was clockwise and has been reoriented");
    }
  }
  std::optional<GridCells> grid;
  if (j.contains("quads")) {
    GridCells g;
    g.nx = j.value("grid_nx", 0);
    g.ny = j.value("grid_ny", 0);
    for (const auto& q : j.at("quads")) g.quads.push_back({q[0].get<int>(), q[1].get<int>(), q[2].get<int>(), q[3].get<int>()});
    require(g.nx * g.ny == static_cast<int>(g.quads.size()), "grid_nx * grid_ny must equal the number of quads");
    grid = std::move(g);
  }
  out.mesh = Triangulation(std::move(verts), std::move(tris), std::move(grid));
  return out;
}

LoadedMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open mesh file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError("cannot parse mesh file '" + path + "': " + e.what());
  }
  return mesh_from_json(j);
}

nlohmann::json mesh_to_json(const Triangulation& mesh) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (const auto& p : mesh.vertices()) j["vertices"].push_back({p.x(), p.y()});
  j["triangles"] = nlohmann::json::array();
  for (const auto& t : mesh.triangles()) j["triangles"].push_back({t[0], t[1], t[2]});
  if (mesh.grid()) {
    j["grid_nx"] = mesh.grid()->nx;
    j["grid_ny"] = mesh.grid()->ny;
    j["quads"] = nlohmann::json::array();
    for (const auto& q : mesh.grid()->quads) j["quads"].push_back({q[0], q[1], q[2], q[3]});
  }
  return j;
}

void save_mesh(const Triangulation& mesh, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "cannot write mesh file '" + path + "'");
  out << mesh_to_json(mesh).dump() << '\n';
}

nlohmann::json classification_to_json(const std::vector<VertexClass>& classes) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : classes) {
    nlohmann::json e;
    e["vertex"] = c.vertex;
    e["kind"] = to_string(c.kind);
    if (c.kind == VertexKind::Boundary) {
      e["theta_I"] = nullptr;
      e["theta_II"] = nullptr;
    } else {
      e["theta_I"] = c.theta_I;
      e["theta_II"] = c.theta_II;
    }
    e["m"] = c.m;
    arr.push_back(e);
  }
  return arr;
}

}  // namespace sgmix
