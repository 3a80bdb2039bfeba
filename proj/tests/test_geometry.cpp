#include <doctest.h>

#include "tdie/geometry.hpp"
#include "tdie/quadrature.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

using namespace tdie;
using Eigen::Vector3d;

namespace {

SurfaceMesh tetrahedron(bool flip_one = false) {
  std::vector<Vector3d> v = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  std::vector<std::array<int, 3>> t = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  if (flip_one) std::swap(t[2][1], t[2][2]);
  return SurfaceMesh(v, t);
}

// Triangulated Moebius strip: a non-orientable surface.
SurfaceMesh moebius(int n = 12) {
  std::vector<Vector3d> v;
  for (int i = 0; i < n; ++i) {
    const double u = 2.0 * M_PI * i / n;
    for (double w : {-0.3, 0.3}) {
      v.emplace_back((1 + w * std::cos(u / 2)) * std::cos(u), (1 + w * std::cos(u / 2)) * std::sin(u),
                     w * std::sin(u / 2));
    }
  }
  std::vector<std::array<int, 3>> t;
  for (int i = 0; i < n; ++i) {
    const int a = 2 * i, b = 2 * i + 1;
    int c = 2 * ((i + 1) % n), d = c + 1;
    if (i == n - 1) std::swap(c, d);  // the half twist
    t.push_back({a, b, d});
    t.push_back({a, d, c});
  }
  return SurfaceMesh(v, t);
}

Vector3d weighted_normal_sum(const SurfaceMesh& m) {
  Vector3d s = Vector3d::Zero();
  for (std::size_t t = 0; t < m.num_triangles(); ++t) s += m.area(t) * m.normal(t);
  return s;
}

}  // namespace

TEST_CASE("mesh: tetrahedron counts and outward normals") {
  for (bool flip : {false, true}) {
    const auto m = tetrahedron(flip);
    CHECK(m.num_triangles() == 4);
    CHECK(m.num_edges() == 6);
    CHECK(m.closed());
    CHECK(static_cast<int>(m.num_vertices()) - static_cast<int>(m.num_edges()) + static_cast<int>(m.num_triangles()) == 2);
    for (int t = 0; t < 4; ++t) CHECK(m.normal(t).dot(m.centroid(t)) > 0.0);
    CHECK(weighted_normal_sum(m).norm() <= 1e-10 * m.total_area());
    CHECK(build_rwg(m).size() == 6);
  }
}

TEST_CASE("mesh: icosphere combinatorics") {
  // Construction oracle: each level quadruples faces; E = 3F/2; V = E - F + 2.
  int F = 20;
  for (int level = 0; level <= 3; ++level) {
    const auto m = make_icosphere(level, 1.0);
    const int E = 3 * F / 2;
    CHECK(static_cast<int>(m.num_triangles()) == F);
    CHECK(static_cast<int>(m.num_edges()) == E);
    CHECK(static_cast<int>(m.num_vertices()) == E - F + 2);
    CHECK(m.closed());
    F *= 4;
  }
  const auto m = make_icosphere(2, 1.0);
  CHECK(m.num_triangles() == 320);
  CHECK(m.num_edges() == 480);
  CHECK(m.num_vertices() == 162);
  CHECK(weighted_normal_sum(m).norm() <= 1e-10 * m.total_area());
  for (std::size_t t = 0; t < m.num_triangles(); ++t) CHECK(m.normal(t).dot(m.centroid(t)) > 0.0);
  for (const auto& v : m.vertices()) CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(build_rwg(m).size() == 480);
}

TEST_CASE("mesh: open strip") {
  const SurfaceMesh m({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, {{0, 1, 2}, {0, 2, 3}});
  CHECK_FALSE(m.closed());
  CHECK(m.num_interior_edges() == 1);
  const auto rwg = build_rwg(m);
  REQUIRE(rwg.size() == 1);
  CHECK(rwg[0].length == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("mesh: validation errors") {
  std::vector<Vector3d> v = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, -1}};
  CHECK_THROWS_AS(SurfaceMesh(v, {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}}), std::invalid_argument);  // non-manifold
  CHECK_THROWS_AS(SurfaceMesh(v, {{0, 1, 7}}), std::invalid_argument);
  CHECK_THROWS_AS(SurfaceMesh({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {{0, 1, 2}}), std::invalid_argument);  // degenerate
  CHECK_THROWS_AS(SurfaceMesh({{0, 0, 0}, {1e-7, 0, 0}, {0, 1e-6, 0}}, {{0, 1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(moebius(), std::invalid_argument);
  CHECK_THROWS_AS(make_icosphere(-1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(mesh_from_argument("icosphere:x:1"), std::invalid_argument);
  CHECK_THROWS_AS(load_mesh("/nonexistent/mesh.obj"), std::invalid_argument);
  CHECK_THROWS_AS(load_mesh("mesh.stl"), std::invalid_argument);
}

TEST_CASE("rwg: charge neutrality, divergence and normal continuity") {
  const auto m = make_icosphere(1, 0.7);
  const auto rwg = build_rwg(m);
  const TriangleRule rule = triangle_rule(2);
  for (const auto& f : rwg) {
    // divergence integrates to zero over the pair
    double q = 0.0;
    for (int s = 0; s < 2; ++s) {
      for (std::size_t i = 0; i < rule.size(); ++i) q += m.area(f.tri[s]) * rule.weights[i] * rwg_divergence(f, f.tri[s]);
    }
    CHECK(std::abs(q) <= 1e-12 * f.length);
    CHECK(rwg_divergence(f, f.tri[0]) == doctest::Approx(f.length / f.area[0]));

    // numerical surface divergence on the plus triangle by the flux through its boundary
    const MeshEdge& e = m.edges()[f.edge];
    const Vector3d a = m.vertex(e.v0), b = m.vertex(e.v1);
    const Vector3d mid = 0.5 * (a + b);
    const Vector3d along = (b - a).normalized();
    const Vector3d m_plus = along.cross(m.normal(f.tri[0]));
    const Vector3d m_minus = along.cross(m.normal(f.tri[1]));
    // in-plane edge normals pointing out of each triangle
    const Vector3d out_plus = (m_plus.dot(mid - m.vertex(f.free_vertex[0])) > 0 ? 1.0 : -1.0) * m_plus;
    const Vector3d out_minus = (m_minus.dot(mid - m.vertex(f.free_vertex[1])) > 0 ? 1.0 : -1.0) * m_minus;
    const double flux_out = rwg_value(m, f, f.tri[0], mid).dot(out_plus);
    const double flux_in = -rwg_value(m, f, f.tri[1], mid).dot(out_minus);
    CHECK(flux_out == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(flux_in == doctest::Approx(flux_out).epsilon(1e-12));
    CHECK(rwg_value(m, f, -1, mid).norm() == 0.0);
  }
}

TEST_CASE("rwg: permutation invariance of supports") {
  const auto m = make_icosphere(1, 1.0);
  std::vector<int> perm(m.num_vertices());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937(11));
  std::vector<Vector3d> v(m.num_vertices());
  for (std::size_t i = 0; i < perm.size(); ++i) v[perm[i]] = m.vertex(i);
  std::vector<std::array<int, 3>> t;
  for (const auto& tri : m.triangles()) t.push_back({perm[tri[0]], perm[tri[1]], perm[tri[2]]});
  const SurfaceMesh p(v, t);

  auto supports = [](const SurfaceMesh& mesh) {
    std::set<std::vector<double>> out;
    for (const auto& f : build_rwg(mesh)) {
      std::vector<double> s;
      for (int k = 0; k < 2; ++k) {
        const Vector3d c = mesh.centroid(f.tri[k]);
        s.insert(s.end(), {std::round(c.x() * 1e9), std::round(c.y() * 1e9), std::round(c.z() * 1e9)});
      }
      // unordered pair
      if (std::lexicographical_compare(s.begin() + 3, s.end(), s.begin(), s.begin() + 3)) {
        std::rotate(s.begin(), s.begin() + 3, s.end());
      }
      out.insert(s);
    }
    return out;
  };
  CHECK(supports(m) == supports(p));
}

TEST_CASE("mesh: OBJ and JSON loaders") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto obj = (dir / "tdie_tet.obj").string();
  {
    std::ofstream out(obj);
    out << "# tetrahedron\nv 1 1 1\nv 1 -1 -1\nv -1 1 -1\nv -1 -1 1\nf 1 2 3\nf 1/1 4/1 2/1\nf 1 3 4\nf 2 4 3\n";
  }
  const auto a = load_mesh(obj);
  CHECK(a.num_triangles() == 4);
  CHECK(a.closed());
  const auto js = (dir / "tdie_tet.json").string();
  {
    std::ofstream out(js);
    out << R"({"vertices": [[1,1,1],[1,-1,-1],[-1,1,-1],[-1,-1,1]], "triangles": [[0,1,2],[0,3,1],[0,2,3],[1,3,2]]})";
  }
  const auto b = mesh_from_argument(js);
  CHECK(b.num_edges() == 6);
  const auto bad = (dir / "tdie_quad.obj").string();
  {
    std::ofstream out(bad);
    out << "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n";
  }
  CHECK_THROWS_AS(load_mesh(bad), std::invalid_argument);
  const auto s = mesh_from_argument("icosphere:1:2.5");
  CHECK(s.num_triangles() == 80);
  CHECK(s.vertex(0).norm() == doctest::Approx(2.5));
}
