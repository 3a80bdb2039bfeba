#include "tdie/mot_solver.hpp"

#include "tdie/constants.hpp"
#include "tdie/parallel.hpp"
#include "tdie/quadrature.hpp"
#include "tdie/special_functions.hpp"
#include "tdie/triangle_integrals.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>

namespace tdie {

namespace {

using Eigen::Vector3d;

struct TriangleGeom {
  std::array<Vector3d, 3> v;
  Vector3d c;
  Vector3d n;
  double radius = 0.0;
  double area = 0.0;
};

struct QuadPoints {
  std::vector<Vector3d> r;
  std::vector<double> w;  // includes the area
};

struct PairPlan {
  LegendreMap map;
  int N = 0;
  bool near = false;
  bool touching = false;  // shares a vertex: source points in polar form about each test point
  int k_static = 0;
  int test_degree = 0;
  int source_degree = 0;
};

// Rules are shared across triangles; points are mapped per use.
class RuleCache {
 public:
  RuleCache(int levels) : levels_(levels) {}
  const TriangleRule& plain(int degree) { return get(plain_, degree, 0); }
  const TriangleRule& refined(int degree) { return get(refined_, degree, levels_); }
  const TriangleRule& singular(int degree, int levels) { return get(singular_, degree * 64 + levels, levels, degree); }

 private:
  const TriangleRule& get(std::map<int, TriangleRule>& m, int key, int levels, int degree = -1) {
    if (degree < 0) degree = key;
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = m.find(key);
    if (it == m.end()) {
      TriangleRule r = degree <= 20 ? triangle_rule(degree) : triangle_product_rule(degree / 2 + 1);
      if (levels > 0) r = subdivide(r, levels);
      it = m.emplace(key, std::move(r)).first;
    }
    return it->second;
  }
  int levels_;
  std::mutex mutex_;
  std::map<int, TriangleRule> plain_, refined_, singular_;
};

QuadPoints map_rule(const TriangleRule& rule, const TriangleGeom& g) {
  QuadPoints q;
  q.r.resize(rule.size());
  q.w.resize(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const auto& b = rule.barycentric[i];
    q.r[i] = b[0] * g.v[0] + b[1] * g.v[1] + b[2] * g.v[2];
    q.w[i] = rule.weights[i] * g.area;
  }
  return q;
}

// Spatial moments of one triangle pair, per Legendre index l.
// E(l, :) = integrals of A_l(R) times {1, r (3), r' (3), r.r'} with
//   A_l(R) = (2l+1)/2 k1 P_l(k1 R/c + k2) / R.
// M(l, :) = MFIE moments {a1, a2 (3), a3 (3), a4 (3)} of D_l = A_l'(R) (r - r')/R built from
//   U(r) = int D_l dA', W(r) = int D_l x r' dA'.
struct PairMoments {
  Eigen::MatrixXd E;
  Eigen::MatrixXd M;
};

void pair_moments(const QuadPoints& test, const QuadPoints& singular_test, const QuadPoints& src, const TriangleGeom& Q,
                  const Vector3d& n_test, const PairPlan& plan, bool mfie, PairMoments& out) {
  const int N = plan.N;
  const double k1 = plan.map.k1;
  const double k2 = plan.map.k2;
  const double kc = k1 / kSpeedOfLight;
  out.E.setZero(N + 1, 8);
  if (mfie) out.M.setZero(N + 1, 10);

  std::vector<double> half(N + 1), sing(N + 1, 0.0), p(N + 1), dp(N + 1), sing_d(N + 1, 0.0);
  for (int l = 0; l <= N; ++l) half[l] = 0.5 * (2 * l + 1) * k1;
  if (plan.near) {
    std::vector<double> pk(N + 1), dpk(N + 1);
    legendre_all_with_derivative(k2, std::span<double>(pk), std::span<double>(dpk));
    for (int l = 0; l <= N; ++l) {
      sing[l] = half[l] * pk[l];
      sing_d[l] = half[l] * dpk[l] * kc;  // limit of (A_l R - sing_l)/R at R = 0
    }
  }
  const double scale = 2.0 * Q.radius;

  std::vector<double> acc0(N + 1);
  std::vector<Vector3d> accr(N + 1), U(N + 1), W(N + 1);
  QuadPoints polar;
  for (std::size_t q = 0; q < test.r.size(); ++q) {
    const Vector3d& r = test.r[q];
    if (plan.touching) {
      polar_points(Q.v[0], Q.v[1], Q.v[2], r, N / 2 + 3, N / 2 + 4, polar.r, polar.w);
    }
    const QuadPoints& src_q = plan.touching ? polar : src;
    std::fill(acc0.begin(), acc0.end(), 0.0);
    for (auto& v : accr) v.setZero();
    if (mfie) {
      for (auto& v : U) v.setZero();
      for (auto& v : W) v.setZero();
    }
    for (std::size_t s = 0; s < src_q.r.size(); ++s) {
      const Vector3d& rp = src_q.r[s];
      const double w = src_q.w[s];
      const Vector3d d = r - rp;
      const double R = d.norm();
      if (R <= 1e-12 * scale) {
        // coincident points only occur on near pairs, where the integrand is the
        // finite limit of the regular part
        for (int l = 0; l <= N; ++l) {
          acc0[l] += w * sing_d[l];
          accr[l] += w * sing_d[l] * rp;
        }
        continue;
      }
      const double x = kc * R + k2;
      if (mfie) {
        legendre_all_with_derivative(x, std::span<double>(p), std::span<double>(dp));
      } else {
        legendre_all(x, std::span<double>(p));
      }
      const double inv = 1.0 / R;
      for (int l = 0; l <= N; ++l) {
        const double a = (half[l] * p[l] - sing[l]) * inv;
        acc0[l] += w * a;
        accr[l] += (w * a) * rp;
      }
      if (mfie) {
        const Vector3d dir = d * inv;
        const Vector3d dir_x_rp = dir.cross(rp);
        for (int l = 0; l <= N; ++l) {
          const double ap = half[l] * (dp[l] * kc * inv - p[l] * inv * inv) + sing[l] * inv * inv;
          U[l] += (w * ap) * dir;
          W[l] += (w * ap) * dir_x_rp;
        }
      }
    }
    const double wq = test.w[q];
    const Vector3d rxn = r.cross(n_test);
    for (int l = 0; l <= N; ++l) {
      out.E(l, 0) += wq * acc0[l];
      out.E.block<1, 3>(l, 1) += (wq * acc0[l]) * r.transpose();
      out.E.block<1, 3>(l, 4) += wq * accr[l].transpose();
      out.E(l, 7) += wq * r.dot(accr[l]);
      if (mfie) {
        out.M(l, 0) += wq * W[l].dot(rxn);
        out.M.block<1, 3>(l, 1) += wq * W[l].transpose();
        out.M.block<1, 3>(l, 4) += wq * rxn.cross(U[l]).transpose();
        out.M.block<1, 3>(l, 7) += wq * U[l].transpose();
      }
    }
  }
  if (!plan.near) return;

  // Extracted sing_l / R part: the same moments for every l, from the closed-form
  // potential on a rule of its own (its gradient is log-singular on shared edges).
  Eigen::Matrix<double, 1, 8> Es = Eigen::Matrix<double, 1, 8>::Zero();
  Eigen::Matrix<double, 1, 10> Ms = Eigen::Matrix<double, 1, 10>::Zero();
  for (std::size_t q = 0; q < singular_test.r.size(); ++q) {
    const Vector3d& r = singular_test.r[q];
    const double wq = singular_test.w[q];
    const auto pi = potential_integrals(Q.v[0], Q.v[1], Q.v[2], r);
    const Vector3d first = pi.rho * pi.scalar + pi.vector;
    Es[0] += wq * pi.scalar;
    Es.segment<3>(1) += (wq * pi.scalar) * r.transpose();
    Es.segment<3>(4) += wq * first.transpose();
    Es[7] += wq * r.dot(first);
    if (mfie) {
      const Vector3d rxn = r.cross(n_test);
      const Vector3d Wq = pi.gradient.cross(r);
      Ms[0] += wq * Wq.dot(rxn);
      Ms.segment<3>(1) += wq * Wq.transpose();
      Ms.segment<3>(4) += wq * rxn.cross(pi.gradient).transpose();
      Ms.segment<3>(7) += wq * pi.gradient.transpose();
    }
  }
  for (int l = 0; l <= N; ++l) {
    out.E.row(l) += sing[l] * Es;
    if (mfie) out.M.row(l) += sing[l] * Ms;
  }
}

int ceil_int(double x) { return static_cast<int>(std::ceil(x - 1e-9)); }

}  // namespace

double SolverConfig::time_step() const {
  if (dt > 0.0) return dt;
  if (f_max > 0.0) return 1.0 / (20.0 * f_max);
  throw std::invalid_argument("solver config: need dt or f_max");
}

Eigen::MatrixXd MotSystem::Z(int k) const {
  if (k < 0) return Eigen::MatrixXd::Zero(unknowns, unknowns);
  if (k > k_max) return Z_static;
  return D[k] + Z_static;
}

MotSystem assemble(const SurfaceMesh& mesh, const std::vector<RwgFunction>& rwg, const SolverConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (config.alpha < 0.0) throw std::invalid_argument("solver config: alpha must be >= 0");
  if (config.alpha > 0.0 && !mesh.closed()) throw std::invalid_argument("solver config: alpha > 0 needs a closed mesh");
  if (config.order < 1) throw std::invalid_argument("solver config: temporal basis order must be >= 1");
  if (!(config.tol > 0.0)) throw std::invalid_argument("solver config: tol must be positive");
  if (rwg.empty()) throw std::invalid_argument("assemble: mesh has no interior edges");
  const double dt = config.time_step();
  if (!(dt > 0.0)) throw std::invalid_argument("solver config: dt must be positive");
  const double f_max = config.f_max > 0.0 ? config.f_max : 1.0 / (20.0 * dt);
  const double h_min = config.h_min > 0.0 ? config.h_min : mesh.min_edge_length();
  const BandLimits band = BandLimits::from_mesh(f_max, h_min);
  const double c = kSpeedOfLight;
  const int p = config.order;
  const bool mfie = config.alpha > 0.0;

  const int nt = static_cast<int>(mesh.num_triangles());
  std::vector<TriangleGeom> geom(nt);
  for (int t = 0; t < nt; ++t) {
    auto& g = geom[t];
    for (int k = 0; k < 3; ++k) g.v[k] = mesh.corner(t, k);
    g.c = mesh.centroid(t);
    g.n = mesh.normal(t);
    g.area = mesh.area(t);
    for (int k = 0; k < 3; ++k) g.radius = std::max(g.radius, (g.v[k] - g.c).norm());
  }

  // Plan every pair: window, order, quadrature.
  std::vector<PairPlan> plans(static_cast<std::size_t>(nt) * nt);
  std::map<long, int> order_cache;
  int k_max = 0;
  AssemblyStats stats;
  stats.N_min = 1 << 30;
  double n_sum = 0.0;
  for (int P = 0; P < nt; ++P) {
    for (int Q = 0; Q < nt; ++Q) {
      PairPlan& plan = plans[static_cast<std::size_t>(P) * nt + Q];
      const double dc = (geom[P].c - geom[Q].c).norm();
      plan.near = P == Q || dc < config.near_factor * (geom[P].radius + geom[Q].radius);
      for (int i : mesh.triangles()[P]) {
        for (int j : mesh.triangles()[Q]) plan.touching |= i == j;
      }
      double r_hi = 0.0;
      for (const auto& a : geom[P].v) {
        for (const auto& b : geom[Q].v) r_hi = std::max(r_hi, (a - b).norm());
      }
      const double r_lo = plan.near ? 0.0 : std::max(0.0, dc - geom[P].radius - geom[Q].radius);
      const double alpha = plan.near ? 0.0 : std::max(0.0, r_lo / c - config.window_margin * dt);
      const double beta = r_hi / c + config.window_margin * dt;
      plan.map = make_map(alpha, beta);
      if (config.forced_N > 0) {
        plan.N = config.forced_N;
      } else {
        // the order depends on the window width only
        const long key = std::lround(plan.map.width() / dt * 1e6);
        auto it = order_cache.find(key);
        if (it == order_cache.end()) it = order_cache.emplace(key, select_order(band, plan.map, config.tol, config.floor_rule)).first;
        plan.N = it->second;
      }
      if (plan.N > config.N_cap) {
        const std::string why = config.forced_N > 0 ? "forced_N" : "expansion tolerance " + std::to_string(config.tol) + " needs";
        throw std::runtime_error(why + " N = " + std::to_string(plan.N) + " above the cap " + std::to_string(config.N_cap));
      }
      plan.k_static = ceil_int(beta / dt + p);
      k_max = std::max(k_max, plan.k_static - 1);
      const double span = (r_hi - r_lo) / (c * plan.map.width());
      const int extra = static_cast<int>(std::ceil(plan.N * span));
      if (plan.near) {
        const int refine = 1 << config.near_subdivision;
        plan.test_degree = config.test_degree + 2 + extra;
        plan.source_degree = config.source_degree + (extra + refine - 1) / refine;
      } else {
        plan.test_degree = config.test_degree + extra;
        plan.source_degree = config.source_degree + extra;
      }
      stats.pairs++;
      if (plan.near) stats.near_pairs++;
      stats.N_min = std::min(stats.N_min, plan.N);
      stats.N_max = std::max(stats.N_max, plan.N);
      stats.N_histogram[plan.N]++;
      n_sum += plan.N;
    }
  }
  stats.N_mean = n_sum / static_cast<double>(stats.pairs);
  stats.k_max_nominal = ceil_int((mesh.diameter() / c + (p + 1) * dt) / dt) + 1;

  const int n = static_cast<int>(rwg.size());
  const auto owners = rwg_by_triangle(mesh, rwg);
  const TemporalBasis basis(p, dt);
  const PiecewisePolynomial& T = basis.profile();
  const PiecewisePolynomial& dT = basis.derivative_profile();
  const PiecewisePolynomial& Ic = basis.charge_profile();
  const double mu = kMu0 / (4.0 * kPi);
  const double ke = 1.0 / (4.0 * kPi * kEps0);
  const double km = -config.alpha * kEta0 / (4.0 * kPi);

  const int workers = worker_count(config.threads);
  std::vector<std::vector<Eigen::MatrixXd>> Dw(workers);
  std::vector<Eigen::MatrixXd> Sw(workers);
  RuleCache rules(config.near_subdivision);
  const TriangleRule gram_rule = triangle_rule(2);

  parallel_blocks(nt, workers, [&](int w, int begin, int end) {
    auto& D = Dw[w];
    D.assign(k_max + 1, Eigen::MatrixXd::Zero(n, n));
    Sw[w] = Eigen::MatrixXd::Zero(n, n);
    PairMoments mom;
    for (int P = begin; P < end; ++P) {
      if (owners[P].empty()) continue;
      for (int Q = 0; Q < nt; ++Q) {
        if (owners[Q].empty()) continue;
        const PairPlan& plan = plans[static_cast<std::size_t>(P) * nt + Q];
        const QuadPoints test = map_rule(rules.plain(plan.test_degree), geom[P]);
        const QuadPoints src =
            map_rule(plan.near ? rules.refined(plan.source_degree) : rules.plain(plan.source_degree), geom[Q]);
        // MFIE vanishes on coplanar pairs (n x (R x S) with every vector in the plane)
        const bool coplanar = geom[P].n.cross(geom[Q].n).norm() < 1e-12 &&
                              std::abs((geom[P].c - geom[Q].c).dot(geom[Q].n)) < 1e-12 * geom[Q].radius;
        const bool pair_mfie = mfie && P != Q && !coplanar;
        const QuadPoints singular_test =
            plan.touching ? map_rule(rules.singular(config.singular_degree, config.singular_subdivision), geom[P]) : test;
        pair_moments(test, singular_test, src, geom[Q], geom[P].n, plan, pair_mfie, mom);

        const int N = plan.N;
        Eigen::VectorXd cI_inf = Eigen::VectorXd::Zero(N + 1);
        cI_inf[0] = 2.0 * dt / plan.map.k1;
        const double static_moment = cI_inf.dot(mom.E.col(0));

        for (const auto& om : owners[P]) {
          const double div_m = om.side * rwg[om.index].length / geom[P].area;
          for (const auto& on : owners[Q]) {
            const RwgFunction& fn = rwg[on.index];
            const double div_n = on.side * fn.length / geom[Q].area;
            Sw[w](om.index, on.index) += ke * div_m * div_n * static_moment;
          }
        }

        for (int k = 0; k < plan.k_static; ++k) {
          const double t = k * dt;
          const auto cA = temporal_coefficients(dT, N, t, plan.map);
          auto cI = temporal_coefficients(Ic, N, t, plan.map);
          const auto st = step_coefficients(N, t, T.support_end(), plan.map);
          for (int l = 0; l <= N; ++l) cI[l] += dt * st[l] - cI_inf[l];
          const Eigen::Map<const Eigen::VectorXd> vA(cA.data(), N + 1), vI(cI.data(), N + 1);
          const Eigen::Matrix<double, 1, 8> EA = vA.transpose() * mom.E;
          const double EPhi = vI.dot(mom.E.col(0));
          Eigen::Matrix<double, 1, 10> MF = Eigen::Matrix<double, 1, 10>::Zero();
          if (pair_mfie) {
            const auto cT = temporal_coefficients(T, N, t, plan.map);
            const Eigen::Map<const Eigen::VectorXd> vT(cT.data(), N + 1);
            MF = vT.transpose() * mom.M;
          }
          const Vector3d E_r = EA.segment<3>(1).transpose();
          const Vector3d E_rp = EA.segment<3>(4).transpose();
          const Vector3d a2 = MF.segment<3>(1).transpose();
          const Vector3d a3 = MF.segment<3>(4).transpose();
          const Vector3d a4 = MF.segment<3>(7).transpose();
          for (const auto& om : owners[P]) {
            const RwgFunction& fm = rwg[om.index];
            const Vector3d& vm = mesh.vertex(fm.free_vertex[om.side > 0 ? 0 : 1]);
            const double am = om.side * fm.length / (2.0 * geom[P].area);
            const double div_m = 2.0 * am;
            const Vector3d vmxn = vm.cross(geom[P].n);
            for (const auto& on : owners[Q]) {
              const RwgFunction& fn = rwg[on.index];
              const Vector3d& vn = mesh.vertex(fn.free_vertex[on.side > 0 ? 0 : 1]);
              const double an = on.side * fn.length / (2.0 * geom[Q].area);
              const double div_n = 2.0 * an;
              const double SS = EA[7] - vn.dot(E_r) - vm.dot(E_rp) + vm.dot(vn) * EA[0];
              double value = mu * am * an * SS + ke * div_m * div_n * EPhi;
              if (pair_mfie) {
                const double term = MF[0] - vn.dot(a3) - a2.dot(vmxn) + vn.dot(vmxn.cross(a4));
                value += km * am * an * term;
              }
              D[k](om.index, on.index) += value;
            }
          }
        }
      }
      if (mfie) {
        // identity part of the MFIE with the 1/2 residue of a smooth closed surface
        const QuadPoints g = map_rule(gram_rule, geom[P]);
        for (const auto& om : owners[P]) {
          for (const auto& on : owners[P]) {
            double gram = 0.0;
            for (std::size_t q = 0; q < g.r.size(); ++q) {
              gram += g.w[q] * rwg_value(mesh, rwg[om.index], P, g.r[q]).dot(rwg_value(mesh, rwg[on.index], P, g.r[q]));
            }
            D[0](om.index, on.index) += 0.5 * config.alpha * kEta0 * gram;
          }
        }
      }
    }
  });

  MotSystem sys;
  sys.unknowns = n;
  sys.k_max = k_max;
  sys.dt = dt;
  sys.D = std::move(Dw[0]);
  sys.Z_static = std::move(Sw[0]);
  for (int w = 1; w < workers; ++w) {
    if (Dw[w].empty()) continue;
    for (int k = 0; k <= k_max; ++k) sys.D[k] += Dw[w][k];
    sys.Z_static += Sw[w];
  }
  const Eigen::MatrixXd Z0 = sys.D[0] + sys.Z_static;
  sys.lu.compute(Z0);
  sys.rcond = sys.lu.rcond();
  if (!std::isfinite(sys.rcond) || sys.rcond < 1e-15) {
    throw std::runtime_error("Z_0 is numerically singular (rcond = " + std::to_string(sys.rcond) + ")");
  }
  stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  sys.stats = stats;
  return sys;
}

}  // namespace tdie
