#include "tdie/geometry.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace tdie {

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

// True when triangle t walks the edge a -> b.
bool walks(const std::array<int, 3>& t, int a, int b) {
  for (int k = 0; k < 3; ++k) {
    if (t[k] == a && t[(k + 1) % 3] == b) return true;
  }
  return false;
}

}  // namespace

SurfaceMesh::SurfaceMesh(std::vector<Eigen::Vector3d> vertices, std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const int nv = static_cast<int>(vertices_.size());
  const int nt = static_cast<int>(triangles_.size());
  if (nt == 0) throw std::invalid_argument("mesh: no triangles");
  for (int t = 0; t < nt; ++t) {
    for (int i : triangles_[t]) {
      if (i < 0 || i >= nv) throw std::invalid_argument("mesh: triangle " + std::to_string(t) + " has a bad vertex index");
    }
    const auto& v = triangles_[t];
    if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2]) {
      throw std::invalid_argument("mesh: triangle " + std::to_string(t) + " repeats a vertex");
    }
    const double a = 0.5 * (vertices_[v[1]] - vertices_[v[0]]).cross(vertices_[v[2]] - vertices_[v[0]]).norm();
    if (!(a > 1e-12)) throw std::invalid_argument("mesh: degenerate triangle " + std::to_string(t));
  }

  std::map<EdgeKey, std::vector<int>> incident;
  for (int t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) incident[key(triangles_[t][k], triangles_[t][(k + 1) % 3])].push_back(t);
  }
  std::vector<std::vector<std::pair<int, EdgeKey>>> neighbours(nt);
  for (const auto& [k, tris] : incident) {
    if (tris.size() > 2) {
      throw std::invalid_argument("mesh: non-manifold edge (" + std::to_string(k.first) + ", " +
                                  std::to_string(k.second) + ")");
    }
    if (tris.size() == 2) {
      if (tris[0] == tris[1]) throw std::invalid_argument("mesh: triangle uses an edge twice");
      neighbours[tris[0]].push_back({tris[1], k});
      neighbours[tris[1]].push_back({tris[0], k});
    }
  }

  // Breadth-first orientation propagation per connected component.
  std::vector<int> component(nt, -1);
  int num_components = 0;
  for (int seed = 0; seed < nt; ++seed) {
    if (component[seed] >= 0) continue;
    const int c = num_components++;
    component[seed] = c;
    std::queue<int> queue;
    queue.push(seed);
    while (!queue.empty()) {
      const int t = queue.front();
      queue.pop();
      for (const auto& [u, k] : neighbours[t]) {
        const bool t_forward = walks(triangles_[t], k.first, k.second);
        if (component[u] < 0) {
          component[u] = c;
          if (walks(triangles_[u], k.first, k.second) == t_forward) std::swap(triangles_[u][1], triangles_[u][2]);
          queue.push(u);
        } else if (walks(triangles_[u], k.first, k.second) == t_forward) {
          throw std::invalid_argument("mesh: orientation cannot be made consistent (non-orientable surface)");
        }
      }
    }
  }

  edges_.reserve(incident.size());
  closed_ = true;
  std::vector<bool> component_closed(num_components, true);
  for (const auto& [k, tris] : incident) {
    MeshEdge e;
    e.v0 = k.first;
    e.v1 = k.second;
    e.tri[0] = tris[0];
    if (tris.size() == 2) e.tri[1] = tris[1];
    else component_closed[component[tris[0]]] = false;
    edges_.push_back(e);
  }
  for (bool b : component_closed) closed_ = closed_ && b;

  // Outward normals on closed components: positive enclosed volume.
  std::vector<double> volume(num_components, 0.0);
  for (int t = 0; t < nt; ++t) {
    const auto& v = triangles_[t];
    volume[component[t]] += vertices_[v[0]].dot(vertices_[v[1]].cross(vertices_[v[2]])) / 6.0;
  }
  for (int t = 0; t < nt; ++t) {
    if (component_closed[component[t]] && volume[component[t]] < 0.0) std::swap(triangles_[t][1], triangles_[t][2]);
  }

  normals_.resize(nt);
  areas_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& v = triangles_[t];
    const Eigen::Vector3d n = (vertices_[v[1]] - vertices_[v[0]]).cross(vertices_[v[2]] - vertices_[v[0]]);
    areas_[t] = 0.5 * n.norm();
    normals_[t] = n.normalized();
  }
}

Eigen::Vector3d SurfaceMesh::centroid(int t) const {
  const auto& v = triangles_[t];
  return (vertices_[v[0]] + vertices_[v[1]] + vertices_[v[2]]) / 3.0;
}

int SurfaceMesh::num_interior_edges() const {
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [](const MeshEdge& e) { return e.interior(); }));
}

double SurfaceMesh::min_edge_length() const {
  double h = std::numeric_limits<double>::infinity();
  for (const auto& e : edges_) h = std::min(h, (vertices_[e.v1] - vertices_[e.v0]).norm());
  return h;
}

double SurfaceMesh::max_edge_length() const {
  double h = 0.0;
  for (const auto& e : edges_) h = std::max(h, (vertices_[e.v1] - vertices_[e.v0]).norm());
  return h;
}

double SurfaceMesh::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices_.size(); ++j) d = std::max(d, (vertices_[i] - vertices_[j]).norm());
  }
  return d;
}

double SurfaceMesh::total_area() const {
  double a = 0.0;
  for (double x : areas_) a += x;
  return a;
}

SurfaceMesh load_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open mesh file: " + path);
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Eigen::Vector3d p;
      if (!(ss >> p.x() >> p.y() >> p.z())) throw std::invalid_argument("obj: bad vertex on line " + std::to_string(lineno));
      vertices.push_back(p);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ss >> tok) {
        const int i = std::stoi(tok.substr(0, tok.find('/')));
        idx.push_back(i < 0 ? static_cast<int>(vertices.size()) + i : i - 1);
      }
      if (idx.size() != 3) throw std::invalid_argument("obj: only triangles are supported (line " + std::to_string(lineno) + ")");
      triangles.push_back({idx[0], idx[1], idx[2]});
    }
  }
  return SurfaceMesh(std::move(vertices), std::move(triangles));
}

SurfaceMesh load_json_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open mesh file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("json mesh: ") + e.what());
  }
  if (!j.contains("vertices") || !j.contains("triangles")) {
    throw std::invalid_argument("json mesh: needs 'vertices' and 'triangles'");
  }
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> triangles;
  try {
    for (const auto& v : j["vertices"]) vertices.emplace_back(v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>());
    for (const auto& t : j["triangles"]) {
      if (t.size() != 3) throw std::invalid_argument("json mesh: triangles need 3 indices");
      triangles.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("json mesh: ") + e.what());
  }
  return SurfaceMesh(std::move(vertices), std::move(triangles));
}

SurfaceMesh load_mesh(const std::string& path) {
  auto ends_with = [&](const std::string& s) {
    return path.size() >= s.size() && std::equal(s.rbegin(), s.rend(), path.rbegin(),
                                                 [](char a, char b) { return std::tolower(a) == std::tolower(b); });
  };
  if (ends_with(".obj")) return load_obj(path);
  if (ends_with(".json")) return load_json_mesh(path);
  throw std::invalid_argument("unknown mesh format (expected .obj or .json): " + path);
}

SurfaceMesh make_icosphere(int level, double radius) {
  if (level < 0) throw std::invalid_argument("icosphere: level must be >= 0");
  if (!(radius > 0.0)) throw std::invalid_argument("icosphere: radius must be positive");
  const double g = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> v = {{-1, g, 0}, {1, g, 0},  {-1, -g, 0}, {1, -g, 0}, {0, -1, g},  {0, 1, g},
                                    {0, -1, -g}, {0, 1, -g}, {g, 0, -1},  {g, 0, 1},  {-g, 0, -1}, {-g, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<std::array<int, 3>> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                       {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                       {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                       {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<EdgeKey, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto k = key(a, b);
      auto it = mid.find(k);
      if (it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int i = static_cast<int>(v.size()) - 1;
      mid.emplace(k, i);
      return i;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(4 * f.size());
    for (const auto& t : f) {
      const int a = midpoint(t[0], t[1]);
      const int b = midpoint(t[1], t[2]);
      const int c = midpoint(t[2], t[0]);
      next.push_back({t[0], a, c});
      next.push_back({t[1], b, a});
      next.push_back({t[2], c, b});
      next.push_back({a, b, c});
    }
    f = std::move(next);
  }
  for (auto& p : v) p *= radius;
  return SurfaceMesh(std::move(v), std::move(f));
}

SurfaceMesh mesh_from_argument(const std::string& arg) {
  const std::string prefix = "icosphere:";
  if (arg.rfind(prefix, 0) == 0) {
    const std::string rest = arg.substr(prefix.size());
    const auto colon = rest.find(':');
    try {
      const int level = std::stoi(rest.substr(0, colon));
      const double radius = colon == std::string::npos ? 1.0 : std::stod(rest.substr(colon + 1));
      return make_icosphere(level, radius);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("bad icosphere spec '" + arg + "' (expected icosphere:LEVEL:RADIUS)");
    }
  }
  return load_mesh(arg);
}

std::vector<RwgFunction> build_rwg(const SurfaceMesh& mesh) {
  std::vector<RwgFunction> out;
  const auto& edges = mesh.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const MeshEdge& me = edges[e];
    if (!me.interior()) continue;
    RwgFunction f;
    f.edge = static_cast<int>(e);
    const bool first_forward = walks(mesh.triangles()[me.tri[0]], me.v0, me.v1);
    f.tri = first_forward ? std::array<int, 2>{me.tri[0], me.tri[1]} : std::array<int, 2>{me.tri[1], me.tri[0]};
    for (int s = 0; s < 2; ++s) {
      for (int k : mesh.triangles()[f.tri[s]]) {
        if (k != me.v0 && k != me.v1) f.free_vertex[s] = k;
      }
      f.area[s] = mesh.area(f.tri[s]);
    }
    f.length = (mesh.vertex(me.v1) - mesh.vertex(me.v0)).norm();
    out.push_back(f);
  }
  return out;
}

Eigen::Vector3d rwg_value(const SurfaceMesh& mesh, const RwgFunction& f, int triangle, const Eigen::Vector3d& r) {
  const int s = f.side(triangle);
  if (s == 0) return Eigen::Vector3d::Zero();
  const int i = s > 0 ? 0 : 1;
  return s * f.length / (2.0 * f.area[i]) * (r - mesh.vertex(f.free_vertex[i]));
}

double rwg_divergence(const RwgFunction& f, int triangle) {
  const int s = f.side(triangle);
  if (s == 0) return 0.0;
  return s * f.length / f.area[s > 0 ? 0 : 1];
}

std::vector<std::vector<TriangleRwg>> rwg_by_triangle(const SurfaceMesh& mesh, const std::vector<RwgFunction>& rwg) {
  std::vector<std::vector<TriangleRwg>> out(mesh.num_triangles());
  for (std::size_t n = 0; n < rwg.size(); ++n) {
    out[rwg[n].tri[0]].push_back({static_cast<int>(n), 1});
    out[rwg[n].tri[1]].push_back({static_cast<int>(n), -1});
  }
  return out;
}

}  // namespace tdie
