#include "tdie/far_field.hpp"

#include "tdie/constants.hpp"
#include "tdie/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace tdie {

namespace {

struct SourcePoint {
  Eigen::Vector3d r;
  int triangle;
  double w;
};

std::vector<SourcePoint> source_points(const SurfaceMesh& mesh, int degree) {
  const TriangleRule rule = triangle_rule(degree);
  std::vector<SourcePoint> pts;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const auto& b = rule.barycentric[i];
      pts.push_back({b[0] * mesh.corner(t, 0) + b[1] * mesh.corner(t, 1) + b[2] * mesh.corner(t, 2),
                     static_cast<int>(t), rule.weights[i] * mesh.area(t)});
    }
  }
  return pts;
}

Eigen::Matrix3d transverse(const Eigen::Vector3d& d) { return Eigen::Matrix3d::Identity() - d * d.transpose(); }

}  // namespace

std::complex<double> basis_spectrum(const TemporalBasis& basis, double f) {
  const double w = 2.0 * kPi * f;
  const PiecewisePolynomial& T = basis.profile();
  std::complex<double> sum = 0.0;
  for (std::size_t j = 0; j < T.num_pieces(); ++j) {
    const double a = T.knots()[j], b = T.knots()[j + 1];
    const int panels = 1 + static_cast<int>(std::abs(w) * (b - a));
    const double h = (b - a) / panels;
    for (int s = 0; s < panels; ++s) {
      sum += integrate_gauss(
          [&](double t) { return T.eval_piece(j, t - a) * std::polar(1.0, -w * t); }, a + s * h, a + (s + 1) * h,
          T.degree(j) / 2 + 8);
    }
  }
  return sum;
}

std::vector<Eigen::Vector3d> far_field(const CurrentHistory& history, const SurfaceMesh& mesh,
                                       const std::vector<RwgFunction>& rwg, int order,
                                       const Eigen::Vector3d& direction, const std::vector<double>& times,
                                       int degree) {
  if (std::abs(direction.norm() - 1.0) > 1e-9) throw std::invalid_argument("far_field: direction must be a unit vector");
  if (history.J.rows() != static_cast<Eigen::Index>(rwg.size())) throw std::invalid_argument("far_field: history does not match the basis");
  const double dt = history.dt;
  const TemporalBasis basis(order, dt);
  const auto owners = rwg_by_triangle(mesh, rwg);
  const auto pts = source_points(mesh, degree);
  const int steps = history.steps();
  const Eigen::Matrix3d proj = transverse(direction);
  std::vector<Eigen::Vector3d> out(times.size(), Eigen::Vector3d::Zero());
  for (std::size_t k = 0; k < times.size(); ++k) {
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    for (const auto& sp : pts) {
      const double t = times[k] + direction.dot(sp.r) / kSpeedOfLight;
      // T_i'(t) = T'(t - i dt) is nonzero for i dt in [t - p dt, t + dt)
      const int i_lo = std::max(0, static_cast<int>(std::floor(t / dt)) - order);
      const int i_hi = std::min(steps - 1, static_cast<int>(std::ceil(t / dt)) + 1);
      for (int i = i_lo; i <= i_hi; ++i) {
        const double dT = basis.derivative(t - i * dt);
        if (dT == 0.0) continue;
        for (const auto& o : owners[sp.triangle]) {
          sum += (sp.w * dT * history.J(o.index, i)) * rwg_value(mesh, rwg[o.index], sp.triangle, sp.r);
        }
      }
    }
    out[k] = -kMu0 / (4.0 * kPi) * (proj * sum);
  }
  return out;
}

std::vector<Vector3cd> far_field_spectrum(const CurrentHistory& history, const SurfaceMesh& mesh,
                                          const std::vector<RwgFunction>& rwg, int order,
                                          const Eigen::Vector3d& direction, const std::vector<double>& freqs,
                                          int degree) {
  if (std::abs(direction.norm() - 1.0) > 1e-9) throw std::invalid_argument("far_field: direction must be a unit vector");
  if (history.J.rows() != static_cast<Eigen::Index>(rwg.size())) throw std::invalid_argument("far_field: history does not match the basis");
  const double dt = history.dt;
  const TemporalBasis basis(order, dt);
  const auto pts = source_points(mesh, degree);
  const auto owners = rwg_by_triangle(mesh, rwg);
  const Eigen::Matrix3d proj = transverse(direction);
  const std::complex<double> j(0.0, 1.0);
  std::vector<Vector3cd> out;
  out.reserve(freqs.size());
  for (double f : freqs) {
    const double w = 2.0 * kPi * f;
    // sum_i J_ni exp(-j w i dt) for every n
    Eigen::VectorXcd coeff = Eigen::VectorXcd::Zero(history.J.rows());
    const std::complex<double> step = std::polar(1.0, -w * dt);
    std::complex<double> phase = 1.0;
    for (int i = 0; i < history.steps(); ++i) {
      coeff += phase * history.J.col(i).cast<std::complex<double>>();
      phase *= step;
      if ((i & 1023) == 1023) phase /= std::abs(phase);
    }
    Vector3cd sum = Vector3cd::Zero();
    for (const auto& sp : pts) {
      const std::complex<double> e = sp.w * std::polar(1.0, w * direction.dot(sp.r) / kSpeedOfLight);
      for (const auto& o : owners[sp.triangle]) {
        sum += (e * coeff[o.index]) * rwg_value(mesh, rwg[o.index], sp.triangle, sp.r).cast<std::complex<double>>();
      }
    }
    const std::complex<double> scale = -kMu0 / (4.0 * kPi) * j * w * basis_spectrum(basis, f);
    out.push_back(scale * (proj.cast<std::complex<double>>() * sum));
  }
  return out;
}

}  // namespace tdie
