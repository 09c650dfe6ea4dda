#pragma once

#include "sgmix/mesh/star.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace sgmix {

struct LoadedMesh {
  Triangulation mesh;
  std::vector<std::string> warnings;
};

/// Parses {"vertices": [[x, y], ...], "triangles": [[i, j, k], ...]} with an
/// optional "quads" array of grid cells. Clockwise triangles are reoriented
/// and reported as warnings; everything else invalid throws PreconditionError.
LoadedMesh mesh_from_json(const nlohmann::json& j);
LoadedMesh load_mesh(const std::string& path);

nlohmann::json mesh_to_json(const Triangulation& mesh);
void save_mesh(const Triangulation& mesh, const std::string& path);

nlohmann::json classification_to_json(const std::vector<VertexClass>& classes);

}  // namespace sgmix
