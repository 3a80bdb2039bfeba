#pragma once

// Marching-on-in-time solver for the combined field integral equation on a PEC
// surface: RWG functions in space (Galerkin), shifted Lagrange functions in time
// (collocation at t_j = j dt), retarded kernel replaced by the truncated Legendre
// expansion on a per-triangle-pair window.
//
// Sign convention: the EFIE rows test -E^s, so the system reads
//   sum_k Z_k J_{j-k} = < S_m, E^i + alpha n x (k x E^i) >(t_j)
// and the MFIE rows are scaled by eta0 so alpha is dimensionless.

#include "tdie/excitation.hpp"
#include "tdie/geometry.hpp"
#include "tdie/temporal_basis.hpp"
#include "tdie/truncation_bounds.hpp"

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <vector>

namespace tdie {

struct SolverConfig {
  double dt = 0.0;             // s; 0 selects 1/(20 f_max)
  int steps = 1000;
  double alpha = 0.0;          // CFIE weight, >= 0; > 0 needs a closed mesh
  int order = 1;               // temporal basis order p >= 1
  double tol = 1e-3;           // expansion tolerance for select_order
  int test_degree = 2;         // base triangle-rule degrees
  int source_degree = 4;
  int N_cap = 64;
  int forced_N = 0;            // > 0 overrides select_order
  double window_margin = 1.0;  // padding of each pair window, in units of dt
  double f_max = 0.0;          // Hz, temporal band edge used to select N
  double h_min = 0.0;          // m, spatial feature size; 0 uses the shortest edge
  OrderFloorRule floor_rule = OrderFloorRule::kMax;
  double near_factor = 1.5;    // centroid distance / (radius sum) below which a pair is near
  int near_subdivision = 2;    // source rule refinement levels on near pairs
  int singular_degree = 8;     // test rule for the extracted 1/R part on pairs sharing a vertex
  int singular_subdivision = 3;
  int threads = 0;             // 0: TDIE_THREADS or hardware concurrency

  /// dt, or 1/(20 f_max) when dt is 0.
  double time_step() const;
};

struct AssemblyStats {
  long pairs = 0;
  long near_pairs = 0;
  int N_min = 0;
  int N_max = 0;
  double N_mean = 0.0;
  std::map<int, long> N_histogram;  // N -> number of triangle pairs
  int k_max_nominal = 0;  // ceil((diam/c + (p+1) dt)/dt) + 1
  double seconds = 0.0;
};

/// Interaction matrices. Z_k = D_k + Z_static for k <= k_max and Z_k = Z_static
/// beyond: the only late-time interaction is the Coulomb field of the charge the
/// currents have deposited, which never switches off.
struct MotSystem {
  int unknowns = 0;
  int k_max = 0;
  double dt = 0.0;
  std::vector<Eigen::MatrixXd> D;  // k = 0..k_max
  Eigen::MatrixXd Z_static;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  double rcond = 0.0;
  AssemblyStats stats;

  Eigen::MatrixXd Z(int k) const;
};

/// Throws std::invalid_argument for an invalid configuration (alpha > 0 on an open
/// mesh, dt <= 0, order < 1, missing band), std::runtime_error when the tolerance
/// needs N above N_cap or Z_0 is numerically singular.
MotSystem assemble(const SurfaceMesh& mesh, const std::vector<RwgFunction>& rwg, const SolverConfig& config);

/// Tests E^i + alpha n x (k x E^i) against every RWG function at a given time.
class PlaneWaveRhs {
 public:
  PlaneWaveRhs(const SurfaceMesh& mesh, const std::vector<RwgFunction>& rwg, const PlaneWave& pw, double alpha,
               int degree = 4);

  Eigen::VectorXd operator()(double t) const;

 private:
  struct Point {
    Eigen::Vector3d r;
    Eigen::Vector3d n;
    double w;
  };
  std::vector<std::vector<Point>> points_;  // per triangle
  std::vector<std::vector<TriangleRwg>> owners_;
  const SurfaceMesh* mesh_;
  const std::vector<RwgFunction>* rwg_;
  PlaneWave pw_;
  double alpha_;
};

Eigen::VectorXd rhs(const PlaneWave& pw, const SurfaceMesh& mesh, const std::vector<RwgFunction>& rwg,
                    const SolverConfig& config, int i);

/// Coefficients J(:, i) of every RWG function at t_i = i dt.
struct CurrentHistory {
  double dt = 0.0;
  Eigen::MatrixXd J;

  int steps() const { return static_cast<int>(J.cols()); }
  std::vector<double> norms() const;
};

using RhsProvider = std::function<Eigen::VectorXd(int)>;

/// Z_0 J_i = V_i - sum_{k>=1} Z_k J_{i-k}, J_i = 0 for i < 0.
CurrentHistory march(const MotSystem& system, const RhsProvider& rhs, int steps);

struct StabilityReport {
  double growth_rate = 0.0;      // per step
  double late_peak_ratio = 0.0;
  bool all_zero = false;
};

/// Least-squares slope of log ||J_i|| over the trailing window_fraction of the
/// norms, and the trailing peak relative to the global peak. Needs >= 100 samples.
StabilityReport stability_metric(const std::vector<double>& norms, double window_fraction = 0.25);

}  // namespace tdie
