#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace tdie {

struct MeshEdge {
  int v0 = -1;                 // v0 < v1
  int v1 = -1;
  std::array<int, 2> tri = {-1, -1};  // second entry is -1 on a boundary edge
  bool interior() const { return tri[1] >= 0; }
};

/// Flat-triangle surface mesh, validated and consistently oriented. Closed
/// components have outward normals.
class SurfaceMesh {
 public:
  SurfaceMesh() = default;

  /// Validates and orients. Throws std::invalid_argument on a bad index, a
  /// degenerate triangle (area <= 1e-12 m^2), a non-manifold edge, or orientation
  /// that propagation cannot make consistent.
  SurfaceMesh(std::vector<Eigen::Vector3d> vertices, std::vector<std::array<int, 3>> triangles);

  const std::vector<Eigen::Vector3d>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<MeshEdge>& edges() const { return edges_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const Eigen::Vector3d& vertex(int i) const { return vertices_[i]; }
  const Eigen::Vector3d& normal(int t) const { return normals_[t]; }
  double area(int t) const { return areas_[t]; }
  Eigen::Vector3d centroid(int t) const;
  Eigen::Vector3d corner(int t, int k) const { return vertices_[triangles_[t][k]]; }

  bool closed() const { return closed_; }
  int num_interior_edges() const;
  double min_edge_length() const;
  double max_edge_length() const;
  /// Largest vertex-to-vertex distance.
  double diameter() const;
  double total_area() const;

 private:
  std::vector<Eigen::Vector3d> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Eigen::Vector3d> normals_;
  std::vector<double> areas_;
  std::vector<MeshEdge> edges_;
  bool closed_ = false;
};

/// Wavefront OBJ subset (v and f records, triangles only; "f a/b/c" index forms accepted).
SurfaceMesh load_obj(const std::string& path);

/// {"vertices": [[x,y,z], ...], "triangles": [[i,j,k], ...]} with 0-based indices.
SurfaceMesh load_json_mesh(const std::string& path);

/// Picks the loader from the extension (.obj or .json).
SurfaceMesh load_mesh(const std::string& path);

/// Subdivided icosahedron projected onto a sphere of the given radius:
/// 20 * 4^level triangles.
SurfaceMesh make_icosphere(int level, double radius);

/// "icosphere:LEVEL:RADIUS" or a mesh file path.
SurfaceMesh mesh_from_argument(const std::string& arg);

/// Rao-Wilton-Glisson function on an interior edge. On the plus triangle
/// S = L/(2A+) (r - v+), on the minus triangle S = L/(2A-) (v- - r).
struct RwgFunction {
  int edge = -1;
  std::array<int, 2> tri = {-1, -1};   // plus, minus
  std::array<int, 2> free_vertex = {-1, -1};
  double length = 0.0;
  std::array<double, 2> area = {0.0, 0.0};

  /// +1 on the plus triangle, -1 on the minus triangle, 0 elsewhere.
  int side(int triangle) const { return triangle == tri[0] ? 1 : triangle == tri[1] ? -1 : 0; }
};

/// One function per interior edge, plus triangle is the one that traverses the
/// edge as v0 -> v1 in its orientation.
std::vector<RwgFunction> build_rwg(const SurfaceMesh& mesh);

/// S(r) on the given triangle (zero if the triangle is not in the support).
Eigen::Vector3d rwg_value(const SurfaceMesh& mesh, const RwgFunction& f, int triangle, const Eigen::Vector3d& r);

/// Surface divergence on the given triangle: +L/A+, -L/A-, or 0.
double rwg_divergence(const RwgFunction& f, int triangle);

/// Per-triangle list of (rwg index, side) pairs.
struct TriangleRwg {
  int index;
  int side;
};
std::vector<std::vector<TriangleRwg>> rwg_by_triangle(const SurfaceMesh& mesh, const std::vector<RwgFunction>& rwg);

}  // namespace tdie
