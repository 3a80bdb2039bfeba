// tdie: command-line front end. Exit codes: 0 ok, 1 numerical failure, 2 usage or
// configuration error.

#include "tdie/constants.hpp"
#include "tdie/excitation.hpp"
#include "tdie/far_field.hpp"
#include "tdie/geometry.hpp"
#include "tdie/mie.hpp"
#include "tdie/mot_solver.hpp"
#include "tdie/spectral_verify.hpp"
#include "tdie/sphere_validation.hpp"
#include "tdie/truncation_bounds.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace tdie;

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 14695981039346656037ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string mesh_checksum(const SurfaceMesh& mesh) {
  std::uint64_t h = 14695981039346656037ull;
  for (const auto& v : mesh.vertices()) h = fnv1a(v.data(), 3 * sizeof(double), h);
  for (const auto& t : mesh.triangles()) h = fnv1a(t.data(), 3 * sizeof(int), h);
  return hex(h);
}

// %.17g round-trips doubles and never depends on the locale's stream state
std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw UsageError("cannot write " + (dir_ / name).string());
    out << content;
    files_.push_back({{"file", name}, {"bytes", content.size()}, {"fnv1a64", hex(fnv1a(content.data(), content.size()))}});
  }

  const json& files() const { return files_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  json files_ = json::array();
};

// Reads key from obj into value if present; every key seen is struck off so the
// leftovers can be reported.
template <class T>
void take(json& obj, const char* key, T& value) {
  if (!obj.contains(key)) return;
  try {
    value = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("config: bad type for '") + key + "'");
  }
  obj.erase(key);
}

void reject_leftovers(const json& obj, const std::string& where) {
  if (!obj.empty()) throw UsageError("config: unknown key '" + obj.begin().key() + "' in " + where);
}

Eigen::Vector3d vec3(const std::vector<double>& v, const char* what) {
  if (v.size() != 3) throw UsageError(std::string("config: ") + what + " needs 3 components");
  return {v[0], v[1], v[2]};
}

// ---------------------------------------------------------------- mesh-info

int cmd_mesh_info(const std::string& arg, bool as_json) {
  const SurfaceMesh mesh = mesh_from_argument(arg);
  const auto rwg = build_rwg(mesh);
  json j;
  j["source"] = arg;
  j["vertices"] = mesh.num_vertices();
  j["triangles"] = mesh.num_triangles();
  j["edges"] = mesh.num_edges();
  j["interior_edges"] = mesh.num_interior_edges();
  j["rwg_functions"] = rwg.size();
  j["closed"] = mesh.closed();
  j["min_edge"] = mesh.min_edge_length();
  j["max_edge"] = mesh.max_edge_length();
  j["diameter"] = mesh.diameter();
  j["area"] = mesh.total_area();
  j["checksum"] = mesh_checksum(mesh);
  if (as_json) {
    std::cout << j.dump(2) << "\n";
  } else {
    for (auto it = j.begin(); it != j.end(); ++it) std::cout << it.key() << ": " << it.value().dump() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumArgs {
  double dt = 0.0;
  double R = 1.0;
  double window = 3.0;
  int order = 1;
  std::vector<int> N;
  double band_lo = 0.0, band_hi = 0.0;
  int frequencies = 201;
  std::string method = "continuous";
  bool weighted = false;
  std::string out = "spectrum_out";
};

int cmd_spectrum(const SpectrumArgs& a) {
  if (!(a.dt > 0.0)) throw UsageError("spectrum: --dt must be > 0");
  SpectrumStudy s;
  s.order = a.order;
  s.dt = a.dt;
  s.R = a.R;
  s.window = a.window;
  if (!a.N.empty()) s.N_list = a.N;
  s.band_lo = a.band_lo;
  s.band_hi = a.band_hi;
  s.num_frequencies = a.frequencies;
  s.signal_weighted = a.weighted;
  if (a.method == "dft") {
    s.method = SpectrumMethod::kDft;
  } else if (a.method != "continuous") {
    throw UsageError("spectrum: --method must be continuous or dft");
  }
  const auto reports = run_spectrum_study(s);
  OutputSet out(a.out);
  std::string summary = "N,inband_l2_error\n";
  for (const auto& r : reports) {
    std::string csv = "frequency,exact_mag,approx_mag\n";
    for (std::size_t i = 0; i < r.frequencies.size(); ++i) {
      csv += num(r.frequencies[i]) + "," + num(r.exact_mag[i]) + "," + num(r.approx_mag[i]) + "\n";
    }
    out.write("spectrum_N" + std::to_string(r.N) + ".csv", csv);
    summary += std::to_string(r.N) + "," + num(r.inband_l2_error) + "\n";
    std::printf("N = %3d  in-band L2 error %.3e\n", r.N, r.inband_l2_error);
  }
  out.write("summary.csv", summary);
  return 0;
}

// ---------------------------------------------------------------- bound-table

struct BoundArgs {
  std::vector<int> N;
  std::vector<double> omega, lambda;
  double alpha = 0.0, beta = 0.0;
  double dt = 0.0, window = 3.0;
  std::string out;
};

int cmd_bound_table(const BoundArgs& a) {
  if (a.N.empty() || a.omega.empty() || a.lambda.empty()) throw UsageError("bound-table: empty grid");
  LegendreMap map;
  if (a.beta > a.alpha) {
    map = make_map(a.alpha, a.beta);
  } else if (a.dt > 0.0) {
    map = make_map(0.0, a.window * a.dt);
  } else {
    throw UsageError("bound-table: give --dt or a window --alpha < --beta");
  }
  for (double l : a.lambda) {
    if (!(l > 0.0)) throw UsageError("bound-table: lambda must be > 0");
  }
  std::string csv = "N,omega,lambda,z_t,z_s,bound_tight,bound_closed,measured_error,convergent\n";
  for (int N : a.N) {
    if (N < 1) throw UsageError("bound-table: N must be >= 1");
    for (double w : a.omega) {
      for (double l : a.lambda) {
        BoundQuery q;
        q.N = N;
        q.omega = w;
        q.lambda = l;
        q.map = map;
        const ErrorEstimate closed = tail_bound_closed(N, q);
        double tight = std::numeric_limits<double>::quiet_NaN();  // envelope not valid below the turning point
        try {
          tight = tail_bound_tight(N, q);
        } catch (const std::domain_error&) {
        }
        const double C = 8.0 * kPi * kSpeedOfLight / (l * map.k1);
        // the tail is super-exponential past max(x_t, x_s), so 60 more terms is the full sum
        const int full = N + 60 + static_cast<int>(std::max(q.temporal_argument(), q.spatial_argument()));
        const double measured = std::abs(truncated_spectrum(full, w, l, map) - truncated_spectrum(N, w, l, map)) / C;
        csv += std::to_string(N) + "," + num(w) + "," + num(l) + "," + num(closed.z_t) + "," + num(closed.z_s) + "," +
               num(tight) + "," + num(closed.bound) + "," + num(measured) + "," + (closed.convergent ? "1" : "0") + "\n";
      }
    }
  }
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(a.out, std::ios::binary);
    if (!f) throw UsageError("cannot write " + a.out);
    f << csv;
  }
  return 0;
}

// ---------------------------------------------------------------- mie

struct MieArgs {
  double radius = 1.0;
  std::vector<double> freqs;
  int angles = 19;
  std::string plane = "E";
  std::string out;
};

int cmd_mie(const MieArgs& a) {
  if (a.freqs.empty()) throw UsageError("mie: give at least one --freq");
  if (a.angles < 2) throw UsageError("mie: --angles must be >= 2");
  if (a.plane != "E" && a.plane != "H") throw UsageError("mie: --plane must be E or H");
  const double phi = a.plane == "E" ? 0.0 : 0.5 * kPi;
  std::string csv = "frequency,theta_deg,phi_deg,re_E_theta,im_E_theta,re_E_phi,im_E_phi,magnitude,rcs_m2,terms\n";
  for (double f : a.freqs) {
    for (int i = 0; i < a.angles; ++i) {
      const double th = kPi * i / (a.angles - 1);
      const MieResult m = mie_far_field(a.radius, f, th, phi);
      const double mag = m.magnitude();
      csv += num(f) + "," + num(th * 180.0 / kPi) + "," + num(phi * 180.0 / kPi) + "," + num(m.E_theta.real()) + "," +
             num(m.E_theta.imag()) + "," + num(m.E_phi.real()) + "," + num(m.E_phi.imag()) + "," + num(mag) + "," +
             num(4.0 * kPi * mag * mag) + "," + std::to_string(m.terms) + "\n";
    }
  }
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(a.out, std::ios::binary);
    if (!f) throw UsageError("cannot write " + a.out);
    f << csv;
  }
  return 0;
}

// ---------------------------------------------------------------- run

struct RunArgs {
  std::string config;
  std::string mesh;
  std::string out = "run_out";
  int steps = -1;
  double alpha = -1.0;
  int forced_N = -1;
  int threads = -1;
  double validate_radius = 0.0;
  std::vector<double> freqs;
  bool full_currents = false;
  int coefficients = 8;
  bool deterministic = false;
};

struct RunSetup {
  std::string mesh = "icosphere:2:1.0";
  PlaneWave pw;
  SolverConfig solver;
  double window_fraction = 0.25;
  std::vector<Eigen::Vector3d> directions;  // far-field directions; empty means backscatter
};

RunSetup parse_config(const std::string& path) {
  RunSetup s;
  s.pw.f0 = 75e6;
  s.pw.B = 60e6;
  if (path.empty()) return s;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config: top level must be an object");
  take(j, "mesh", s.mesh);
  take(j, "stability_window", s.window_fraction);
  if (j.contains("excitation")) {
    json e = j["excitation"];
    j.erase("excitation");
    if (!e.is_object()) throw UsageError("config: excitation must be an object");
    take(e, "f0", s.pw.f0);
    take(e, "B", s.pw.B);
    take(e, "amplitude", s.pw.amplitude);
    std::vector<double> k, u;
    take(e, "k_hat", k);
    take(e, "u_hat", u);
    if (!k.empty()) s.pw.k_hat = vec3(k, "k_hat");
    if (!u.empty()) s.pw.u_hat = vec3(u, "u_hat");
    reject_leftovers(e, "excitation");
  }
  if (j.contains("solver")) {
    json c = j["solver"];
    j.erase("solver");
    if (!c.is_object()) throw UsageError("config: solver must be an object");
    SolverConfig& sc = s.solver;
    take(c, "dt", sc.dt);
    take(c, "steps", sc.steps);
    take(c, "alpha", sc.alpha);
    take(c, "order", sc.order);
    take(c, "tol", sc.tol);
    take(c, "test_degree", sc.test_degree);
    take(c, "source_degree", sc.source_degree);
    take(c, "N_cap", sc.N_cap);
    take(c, "forced_N", sc.forced_N);
    take(c, "window_margin", sc.window_margin);
    take(c, "h_min", sc.h_min);
    take(c, "near_factor", sc.near_factor);
    take(c, "near_subdivision", sc.near_subdivision);
    take(c, "singular_degree", sc.singular_degree);
    take(c, "singular_subdivision", sc.singular_subdivision);
    take(c, "threads", sc.threads);
    std::string rule = "max";
    take(c, "floor_rule", rule);
    if (rule == "max") {
      sc.floor_rule = OrderFloorRule::kMax;
    } else if (rule == "min") {
      sc.floor_rule = OrderFloorRule::kMin;
    } else {
      throw UsageError("config: floor_rule must be max or min");
    }
    reject_leftovers(c, "solver");
  }
  if (j.contains("far_field_directions")) {
    std::vector<std::vector<double>> dirs;
    take(j, "far_field_directions", dirs);
    for (const auto& d : dirs) {
      const Eigen::Vector3d v = vec3(d, "far_field_directions entry");
      if (!(v.norm() > 0.0)) throw UsageError("config: zero far-field direction");
      s.directions.push_back(v.normalized());
    }
  }
  reject_leftovers(j, "config");
  return s;
}

json config_snapshot(const RunSetup& s) {
  const SolverConfig& c = s.solver;
  json j;
  j["mesh"] = s.mesh;
  j["excitation"] = {{"f0", s.pw.f0},
                     {"B", s.pw.B},
                     {"amplitude", s.pw.amplitude},
                     {"k_hat", {s.pw.k_hat.x(), s.pw.k_hat.y(), s.pw.k_hat.z()}},
                     {"u_hat", {s.pw.u_hat.x(), s.pw.u_hat.y(), s.pw.u_hat.z()}},
                     {"sigma", s.pw.sigma()},
                     {"t_p", s.pw.t_p()}};
  j["solver"] = {{"dt", c.time_step()},
                 {"steps", c.steps},
                 {"alpha", c.alpha},
                 {"order", c.order},
                 {"tol", c.tol},
                 {"test_degree", c.test_degree},
                 {"source_degree", c.source_degree},
                 {"N_cap", c.N_cap},
                 {"forced_N", c.forced_N},
                 {"window_margin", c.window_margin},
                 {"f_max", c.f_max},
                 {"h_min", c.h_min},
                 {"floor_rule", c.floor_rule == OrderFloorRule::kMax ? "max" : "min"},
                 {"near_factor", c.near_factor},
                 {"near_subdivision", c.near_subdivision},
                 {"singular_degree", c.singular_degree},
                 {"singular_subdivision", c.singular_subdivision},
                 {"threads", c.threads}};
  j["stability_window"] = s.window_fraction;
  json dirs = json::array();
  for (const auto& d : s.directions) dirs.push_back({d.x(), d.y(), d.z()});
  j["far_field_directions"] = dirs;
  return j;
}

int cmd_run(const RunArgs& a) {
  RunSetup s = parse_config(a.config);
  if (!a.mesh.empty()) s.mesh = a.mesh;
  if (a.steps >= 0) s.solver.steps = a.steps;
  if (a.alpha >= 0.0) s.solver.alpha = a.alpha;
  if (a.forced_N >= 0) s.solver.forced_N = a.forced_N;
  if (a.threads >= 0) s.solver.threads = a.threads;
  if (a.deterministic) s.solver.threads = 1;
  s.solver.f_max = s.pw.f_max();
  if (s.solver.steps < 100) throw UsageError("run: need at least 100 steps for the stability metric");
  if (!(s.window_fraction > 0.0) || s.window_fraction > 1.0) throw UsageError("run: stability_window must be in (0, 1]");
  s.pw.validate();

  std::vector<double> freqs = a.freqs;
  if (a.validate_radius < 0.0) throw UsageError("run: --validate-sphere needs a positive radius");
  if (a.validate_radius > 0.0 && freqs.empty()) freqs = {s.pw.f0 - 0.5 * s.pw.B, s.pw.f0, s.pw.f0 + 0.5 * s.pw.B};
  for (double f : freqs) {
    if (!(f > 0.0)) throw UsageError("run: frequencies must be > 0");
  }

  const auto t0 = std::chrono::steady_clock::now();
  const SurfaceMesh mesh = mesh_from_argument(s.mesh);
  const auto rwg = build_rwg(mesh);
  if (rwg.empty()) throw UsageError("run: mesh has no interior edges");
  // config errors (open mesh with alpha > 0 and the like) surface here, before any work
  const MotSystem sys = assemble(mesh, rwg, s.solver);
  const auto t1 = std::chrono::steady_clock::now();
  std::fprintf(stderr, "assembled %d unknowns, k_max %d, N %d..%d in %.1f s\n", sys.unknowns, sys.k_max, sys.stats.N_min,
               sys.stats.N_max, sys.stats.seconds);

  const PlaneWaveRhs V(mesh, rwg, s.pw, s.solver.alpha);
  const CurrentHistory h = march(sys, [&](int j) { return V(j * sys.dt); }, s.solver.steps);
  const auto t2 = std::chrono::steady_clock::now();
  const auto norms = h.norms();
  const StabilityReport rep = stability_metric(norms, s.window_fraction);

  OutputSet out(a.out);
  {
    const int shown = a.full_currents ? static_cast<int>(h.J.rows())
                                      : std::clamp(a.coefficients, 0, static_cast<int>(h.J.rows()));
    std::string csv = "step,time,norm";
    for (int n = 0; n < shown; ++n) csv += ",J" + std::to_string(n);
    csv += "\n";
    for (int i = 0; i < h.steps(); ++i) {
      csv += std::to_string(i) + "," + num(i * h.dt) + "," + num(norms[i]);
      for (int n = 0; n < shown; ++n) csv += "," + num(h.J(n, i));
      csv += "\n";
    }
    out.write("currents.csv", csv);
  }
  {
    std::vector<Eigen::Vector3d> dirs = s.directions;
    if (dirs.empty()) dirs.push_back(-s.pw.k_hat);
    std::vector<double> times(h.steps());
    for (int i = 0; i < h.steps(); ++i) times[i] = i * h.dt;
    std::string csv = "direction,dx,dy,dz,time,Ex,Ey,Ez\n";
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      const auto E = far_field(h, mesh, rwg, s.solver.order, dirs[d], times);
      for (std::size_t i = 0; i < times.size(); ++i) {
        csv += std::to_string(d) + "," + num(dirs[d].x()) + "," + num(dirs[d].y()) + "," + num(dirs[d].z()) + "," +
               num(times[i]) + "," + num(E[i].x()) + "," + num(E[i].y()) + "," + num(E[i].z()) + "\n";
      }
    }
    out.write("farfield.csv", csv);
  }
  {
    json st;
    st["steps"] = h.steps();
    st["window_fraction"] = s.window_fraction;
    st["growth_rate"] = rep.growth_rate;
    st["late_peak_ratio"] = rep.late_peak_ratio;
    st["all_zero"] = rep.all_zero;
    st["peak_norm"] = *std::max_element(norms.begin(), norms.end());
    st["final_norm"] = norms.back();
    out.write("stability.json", st.dump(2) + "\n");
  }
  double worst = 0.0;
  if (a.validate_radius > 0.0) {
    const auto rows = compare_with_mie(h, mesh, rwg, s.solver.order, s.pw, a.validate_radius, freqs, 19,
                                       {ScatteringPlane::kE, ScatteringPlane::kH});
    std::string csv = "frequency,plane,theta_deg,mot_magnitude,mie_magnitude,deviation_db\n";
    for (const auto& r : rows) {
      csv += num(r.frequency) + "," + (r.plane == ScatteringPlane::kE ? "E" : "H") + "," + num(r.theta * 180.0 / kPi) +
             "," + num(r.mot_magnitude) + "," + num(r.mie_magnitude) + "," + num(r.deviation_db) + "\n";
    }
    out.write("comparison.csv", csv);
    worst = worst_deviation_db(rows);
    std::fprintf(stderr, "worst deviation from Mie: %.3f dB\n", worst);
  }
  const auto t3 = std::chrono::steady_clock::now();

  json m;
  m["tool"] = "tdie";
  m["version"] = kVersion;
  m["command"] = "run";
  m["deterministic"] = a.deterministic;
  m["config"] = config_snapshot(s);
  m["mesh"] = {{"source", s.mesh},
               {"checksum", mesh_checksum(mesh)},
               {"triangles", mesh.num_triangles()},
               {"closed", mesh.closed()},
               {"unknowns", sys.unknowns}};
  json hist = json::object();
  for (const auto& [N, count] : sys.stats.N_histogram) hist[std::to_string(N)] = count;
  m["assembly"] = {{"k_max", sys.k_max},
                   {"k_max_nominal", sys.stats.k_max_nominal},
                   {"pairs", sys.stats.pairs},
                   {"near_pairs", sys.stats.near_pairs},
                   {"N_min", sys.stats.N_min},
                   {"N_max", sys.stats.N_max},
                   {"N_mean", sys.stats.N_mean},
                   {"N_histogram", hist},
                   {"rcond", sys.rcond}};
  m["timing"] = {{"assembly_s", std::chrono::duration<double>(t1 - t0).count()},
                 {"march_s", std::chrono::duration<double>(t2 - t1).count()},
                 {"post_s", std::chrono::duration<double>(t3 - t2).count()}};
  m["stability"] = {{"growth_rate", rep.growth_rate}, {"late_peak_ratio", rep.late_peak_ratio}};
  if (a.validate_radius > 0.0) m["validation"] = {{"radius", a.validate_radius}, {"freqs", freqs}, {"worst_db", worst}};
  m["outputs"] = out.files();
  std::ofstream mf(out.dir() / "manifest.json", std::ios::binary);
  mf << m.dump(2) << "\n";

  std::printf("growth_rate %.4e  late_peak_ratio %.4e  outputs in %s\n", rep.growth_rate, rep.late_peak_ratio,
              out.dir().string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-domain integral equation solver with a separable retarded-kernel expansion"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string mesh_arg;
  bool mesh_json = false;
  auto* info = app.add_subcommand("mesh-info", "Mesh statistics and RWG count");
  info->add_option("mesh", mesh_arg, "Mesh file (.obj, .json) or icosphere:LEVEL:RADIUS")->required();
  info->add_flag("--json", mesh_json, "Print JSON");

  SpectrumArgs sa;
  auto* spec = app.add_subcommand("spectrum", "In-band error of the truncated kernel expansion");
  spec->add_option("--dt", sa.dt, "Time step (s)")->required();
  spec->add_option("--R", sa.R, "Source-observer distance (m)");
  spec->add_option("--window", sa.window, "Window width in units of dt");
  spec->add_option("--order", sa.order, "Temporal basis order");
  spec->add_option("--N", sa.N, "Expansion orders (repeatable)");
  spec->add_option("--band-lo", sa.band_lo, "Lower band edge (Hz)");
  spec->add_option("--band-hi", sa.band_hi, "Upper band edge (Hz), default 1/(20 dt)");
  spec->add_option("--frequencies", sa.frequencies, "Frequency samples in the band");
  spec->add_option("--method", sa.method, "continuous or dft");
  spec->add_flag("--weighted", sa.weighted, "Weight the error by a band-limited signal");
  spec->add_option("--out", sa.out, "Output directory");

  BoundArgs ba;
  auto* bt = app.add_subcommand("bound-table", "Truncation bounds against the measured tail on a grid");
  bt->add_option("--N", ba.N, "Orders (repeatable)");
  bt->add_option("--omega", ba.omega, "Angular frequencies (rad/s, repeatable)");
  bt->add_option("--lambda", ba.lambda, "Spatial frequencies (rad/m, repeatable)");
  bt->add_option("--alpha", ba.alpha, "Window start (s)");
  bt->add_option("--beta", ba.beta, "Window end (s)");
  bt->add_option("--dt", ba.dt, "Time step (s); window [0, window dt] when --alpha/--beta are absent");
  bt->add_option("--window", ba.window, "Window width in units of dt");
  bt->add_option("--out", ba.out, "CSV file (default stdout)");

  MieArgs ma;
  auto* mie = app.add_subcommand("mie", "Mie series far field of a PEC sphere");
  mie->add_option("--radius", ma.radius, "Sphere radius (m)");
  mie->add_option("--freq", ma.freqs, "Frequencies (Hz, repeatable)");
  mie->add_option("--angles,--theta-grid", ma.angles, "Number of angles over [0, 180] deg");
  mie->add_option("--plane", ma.plane, "E or H");
  mie->add_option("--out", ma.out, "CSV file (default stdout)");

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Assemble, march and post-process one scattering run");
  run->add_option("--config", ra.config, "JSON configuration");
  run->add_option("--mesh", ra.mesh, "Mesh, overrides the config");
  run->add_option("--out", ra.out, "Output directory");
  run->add_option("--steps", ra.steps, "Time steps");
  run->add_option("--alpha", ra.alpha, "CFIE weight");
  run->add_option("--forced-N", ra.forced_N, "Use this expansion order everywhere (0 selects from tol)");
  run->add_option("--threads", ra.threads, "Worker threads (0: TDIE_THREADS or all cores)");
  run->add_option("--validate-sphere", ra.validate_radius, "Compare the far field with Mie for a sphere of this radius");
  run->add_option("--freqs", ra.freqs, "Comparison frequencies (Hz)")->delimiter(',');
  run->add_option("--coefficients", ra.coefficients, "Coefficients J0.. written to currents.csv");
  run->add_flag("--full-currents", ra.full_currents, "Write every coefficient to currents.csv");
  run->add_flag("--deterministic", ra.deterministic, "Single-threaded assembly for bitwise-reproducible outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*info) return cmd_mesh_info(mesh_arg, mesh_json);
    if (*spec) return cmd_spectrum(sa);
    if (*bt) return cmd_bound_table(ba);
    if (*mie) return cmd_mie(ma);
    if (*run) return cmd_run(ra);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
