#include "tdie/mot_solver.hpp"

#include "tdie/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace tdie {

PlaneWaveRhs::PlaneWaveRhs(const SurfaceMesh& mesh, const std::vector<RwgFunction>& rwg, const PlaneWave& pw,
                           double alpha, int degree)
    : owners_(rwg_by_triangle(mesh, rwg)), mesh_(&mesh), rwg_(&rwg), pw_(pw), alpha_(alpha) {
  pw_.validate();
  const TriangleRule rule = triangle_rule(degree);
  points_.resize(mesh.num_triangles());
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    if (owners_[t].empty()) continue;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const auto& b = rule.barycentric[i];
      const Eigen::Vector3d r = b[0] * mesh.corner(t, 0) + b[1] * mesh.corner(t, 1) + b[2] * mesh.corner(t, 2);
      points_[t].push_back({r, mesh.normal(t), rule.weights[i] * mesh.area(t)});
    }
  }
}

Eigen::VectorXd PlaneWaveRhs::operator()(double t) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rwg_->size()));
  for (std::size_t tri = 0; tri < points_.size(); ++tri) {
    for (const auto& pt : points_[tri]) {
      const Eigen::Vector3d E = incident_field(pw_, pt.r, t);
      Eigen::Vector3d f = E;
      if (alpha_ != 0.0) f += alpha_ * pt.n.cross(pw_.k_hat.cross(E));
      for (const auto& o : owners_[tri]) {
        v[o.index] += pt.w * rwg_value(*mesh_, (*rwg_)[o.index], static_cast<int>(tri), pt.r).dot(f);
      }
    }
  }
  return v;
}

Eigen::VectorXd rhs(const PlaneWave& pw, const SurfaceMesh& mesh, const std::vector<RwgFunction>& rwg,
                    const SolverConfig& config, int i) {
  return PlaneWaveRhs(mesh, rwg, pw, config.alpha)(i * config.time_step());
}

std::vector<double> CurrentHistory::norms() const {
  std::vector<double> out(J.cols());
  for (Eigen::Index i = 0; i < J.cols(); ++i) out[i] = J.col(i).norm();
  return out;
}

CurrentHistory march(const MotSystem& system, const RhsProvider& rhs, int steps) {
  if (steps < 0) throw std::invalid_argument("march: steps must be >= 0");
  const int n = system.unknowns;
  const int K = system.k_max;
  // [D_K ... D_1] against the contiguous slice J_{j-K} .. J_{j-1}
  Eigen::MatrixXd Dcat(n, static_cast<Eigen::Index>(n) * K);
  for (int k = 1; k <= K; ++k) Dcat.middleCols(static_cast<Eigen::Index>(K - k) * n, n) = system.D[k];
  Eigen::MatrixXd buffer = Eigen::MatrixXd::Zero(n, K + steps);
  Eigen::VectorXd charge_sum = Eigen::VectorXd::Zero(n);  // sum of J_i for i < j

  for (int j = 0; j < steps; ++j) {
    Eigen::VectorXd b = rhs(j);
    if (b.size() != n) throw std::invalid_argument("march: rhs has the wrong length");
    if (K > 0) {
      const Eigen::Map<const Eigen::VectorXd> hist(buffer.col(j).data(), static_cast<Eigen::Index>(n) * K);
      b.noalias() -= Dcat * hist;
    }
    b.noalias() -= system.Z_static * charge_sum;
    const Eigen::VectorXd x = system.lu.solve(b);
    if (!x.allFinite()) throw std::runtime_error("march: non-finite current at step " + std::to_string(j));
    buffer.col(K + j) = x;
    charge_sum += x;
  }
  CurrentHistory h;
  h.dt = system.dt;
  h.J = buffer.rightCols(steps);
  return h;
}

StabilityReport stability_metric(const std::vector<double>& norms, double window_fraction) {
  if (norms.size() < 100) throw std::invalid_argument("stability_metric: need at least 100 steps");
  if (!(window_fraction > 0.0) || window_fraction > 1.0) {
    throw std::invalid_argument("stability_metric: window_fraction must be in (0, 1]");
  }
  StabilityReport rep;
  const std::size_t n = norms.size();
  const std::size_t w = std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(window_fraction * n)));
  const std::size_t first = n - w;
  double global = 0.0, late = 0.0;
  for (std::size_t i = 0; i < n; ++i) global = std::max(global, norms[i]);
  for (std::size_t i = first; i < n; ++i) late = std::max(late, norms[i]);
  if (global == 0.0) {
    rep.all_zero = true;
    return rep;
  }
  rep.late_peak_ratio = late / global;
  // fit over the samples that are not exactly zero
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = first; i < n; ++i) {
    if (norms[i] <= 0.0) continue;
    const double x = static_cast<double>(i), y = std::log(norms[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2) {
    const double den = m * sxx - sx * sx;
    rep.growth_rate = den != 0.0 ? (m * sxy - sx * sy) / den : 0.0;
  }
  return rep;
}

}  // namespace tdie
