#include "rrshift/acceptance.hpp"
#include "rrshift/lorentz_dirac.hpp"
#include "rrshift/parallel.hpp"
#include "rrshift/scenario.hpp"
#include "rrshift/semiclassical.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace rrshift;

namespace {

constexpr int kPass = 0;
constexpr int kResidualFail = 1;
constexpr int kInputError = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw InputError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void write_row(std::ostream& os, const std::vector<double>& xs) {
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << csv_number(xs[i]);
  os << '\n';
}

std::vector<double> sample_times(const Trajectory& traj, int points) {
  std::vector<double> ts;
  for (int i = 0; i < points; ++i) ts.push_back(traj.t_min() * (1.0 - static_cast<double>(i) / (points - 1)));
  return ts;
}

void write_trajectory_csv(const Trajectory& traj, int points, std::ostream& os) {
  os << "t,x,y,z,Px,Py,Pz,vx,vy,vz,gamma\n";
  for (double t : sample_times(traj, points)) {
    const State s = traj.state(t);
    const Kinematics k = traj.kinematics_at(s);
    write_row(os, {t, s.x[0], s.x[1], s.x[2], s.P[0], s.P[1], s.P[2], k.v[0], k.v[1], k.v[2], k.gamma});
  }
}

void write_force_csv(const Trajectory& traj, double alpha_c, int points, std::ostream& os) {
  os << "t,vx,vy,vz,ax,ay,az,gamma,Fext_x,Fext_y,Fext_z,Fld_x,Fld_y,Fld_z,Fld4_0,Fld4_1,Fld4_2,Fld4_3\n";
  for (double t : sample_times(traj, points)) {
    const State s = traj.state(t);
    const Kinematics k = traj.kinematics_at(s);
    const Vec3 fe = traj.external_force_at(s);
    const Vec3 f = ld_coordinate_force(k, alpha_c);
    const Vec4 F = ld_four_force(k, alpha_c);
    write_row(os, {t, k.v[0], k.v[1], k.v[2], k.a[0], k.a[1], k.a[2], k.gamma, fe[0], fe[1], fe[2], f[0], f[1], f[2],
                   F[0], F[1], F[2], F[3]});
  }
}

std::vector<Vec3> parse_directions(const std::string& text) {
  std::vector<Vec3> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    std::stringstream is(item);
    Vec3 n;
    char comma;
    if (!(is >> n[0] >> comma >> n[1] >> comma >> n[2]) || n.norm() == 0.0) {
      throw InputError("bad direction '" + item + "', expected nx,ny,nz");
    }
    out.push_back(n.normalized());
  }
  return out;
}

void write_spectrum_csv(const Scenario& sc, const Trajectory& traj, const std::vector<Vec3>& dirs, int nk,
                        double k_max_taper, std::ostream& os) {
  os << "nx,ny,nz,k,d2E_dk_dOmega,d2N_dk_dOmega,re_A0,im_A0,re_A1,im_A1,re_A2,im_A2,re_A3,im_A3\n";
  const double norm = 1.0 / (2.0 * std::pow(2.0 * std::numbers::pi, 3));
  for (const Vec3& n : dirs) {
    const CutoffWindow w = sc.window.for_direction(traj, n);
    const double k_max = k_max_taper / w.taper;
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(nk));
    parallel_for(rows.size(), [&](std::size_t i) {
      const double k = k_max * static_cast<double>(i + 1) / nk;
      const CVec4 A = amplitude_classical(traj, k, n, sc.charge, w).A;
      const double aa = -std::real(minkowski(A, CVec4(A.conjugate())));
      rows[i] = {n[0], n[1], n[2], k, norm * k * k * aa, norm * k * aa, A[0].real(), A[0].imag(), A[1].real(),
                 A[1].imag(), A[2].real(), A[2].imag(), A[3].real(), A[3].imag()};
    });
    for (const auto& r : rows) write_row(os, r);
  }
}

std::vector<Route> parse_routes(const std::string& text) {
  std::vector<Route> out;
  if (text.empty() || text == "all") return {all_routes.begin(), all_routes.end()};
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto r = parse_route(item);
    if (!r) throw InputError("unknown route '" + item + "' (direct, green, quantum, quadrature)");
    out.push_back(*r);
  }
  return out;
}

std::vector<Vec3> default_directions(const Trajectory& traj) {
  const Vec3 v = traj.v_future().norm() > 0 ? traj.v_future().normalized() : Vec3::UnitZ();
  Vec3 perp = v.cross(Vec3::UnitX());
  if (perp.norm() < 1e-8) perp = v.cross(Vec3::UnitY());
  return {v, perp.normalized(), -v};
}

int cmd_shift(const std::string& path, std::string out, const std::string& routes, bool timings) {
  const Scenario sc = load_scenario(path);
  const auto route_list = parse_routes(routes);
  const Trajectory traj = build_trajectory(sc);
  const ShiftReport rep = compare_routes(traj, sc.alpha_c(), sc.shift, route_list);
  if (out.empty()) out = sc.report_path;
  Output o(out);
  o.stream() << report_to_json(sc, rep, timings).dump(2) << '\n';
  if (!sc.trajectory_csv.empty()) {
    Output t(sc.trajectory_csv);
    write_trajectory_csv(traj, 401, t.stream());
  }
  if (!sc.force_csv.empty()) {
    Output f(sc.force_csv);
    write_force_csv(traj, sc.alpha_c(), 401, f.stream());
  }
  if (!sc.spectrum_csv.empty()) {
    Output s(sc.spectrum_csv);
    write_spectrum_csv(sc, traj, default_directions(traj), 200, 16.0, s.stream());
  }
  std::cerr << (rep.pass ? "PASS" : "FAIL") << "  max residual " << rep.max_residual << " (threshold "
            << rep.threshold << ")\n";
  return rep.pass ? kPass : kResidualFail;
}

int cmd_jacobi(const std::string& path, const std::string& out, int points, double kick) {
  const Scenario sc = load_scenario(path);
  const Trajectory traj = build_trajectory(sc);
  if (!traj.in_domain(kick)) throw InputError("kick time outside [t_min, 0]");
  const std::array<JacobiField, 3> f{jacobi_field(traj, 0, kick), jacobi_field(traj, 1, kick),
                                     jacobi_field(traj, 2, kick)};
  Output o(out);
  auto& os = o.stream();
  os << "t";
  for (int i = 0; i < 3; ++i) {
    for (const char* c : {"x", "y", "z"}) os << ",dx" << i << "_" << c;
    for (const char* c : {"x", "y", "z"}) os << ",dP" << i << "_" << c;
  }
  os << '\n';
  for (double t : sample_times(traj, points)) {
    std::vector<double> row{t};
    for (const auto& fi : f) {
      const Vec3 x = fi.dx(t), P = fi.dP(t);
      row.insert(row.end(), {x[0], x[1], x[2], P[0], P[1], P[2]});
    }
    write_row(os, row);
  }
  return kPass;
}

int cmd_convergence(const std::string& path, const std::string& out, std::vector<double> hbars) {
  const Scenario sc = load_scenario(path);
  const Trajectory traj = build_trajectory(sc);
  if (hbars.empty()) hbars = sc.hbar;
  const double dur = traj.acceleration_duration();
  const std::vector<std::pair<double, Vec3>> kn = {{0.5 / dur, Vec3(0, 0, 1)},
                                                   {1.0 / dur, Vec3(1, 0, 0)},
                                                   {1.5 / dur, Vec3(0.6, 0, 0.8)},
                                                   {0.8 / dur, Vec3(0.6, 0, -0.8)},
                                                   {1.2 / dur, Vec3(0, 0.8, 0.6)}};
  const auto res = hbar_convergence(traj, sc.charge, hbars, kn, sc.window);
  Output o(out);
  o.stream() << "k,nx,ny,nz,hbar,relative_error,ratio_to_next\n";
  for (const auto& c : res) {
    for (std::size_t i = 0; i < c.hbar.size(); ++i) {
      const double ratio = i < c.ratio.size() ? c.ratio[i] : std::nan("");
      write_row(o.stream(), {c.k, c.n[0], c.n[1], c.n[2], c.hbar[i], c.error[i], ratio});
    }
  }
  return kPass;
}

int cmd_verify(const std::string& suite_name) {
  const auto suite = parse_suite(suite_name);
  if (!suite) throw InputError("unknown suite '" + suite_name + "' (fast, full)");
  const auto results =
      run_acceptance(*suite, [](const CriterionResult& r) { std::cout << format_result(r) << std::endl; });
  const bool ok = all_passed(results);
  std::cout << (ok ? "ALL PASS" : "SOME CRITERIA FAILED") << '\n';
  return ok ? kPass : kResidualFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radiation-reaction position shift: classical and quantum routes"};
  app.require_subcommand(1);
  bool serial = false;
  app.add_flag("--serial", serial, "single-threaded, bit-reproducible run");
  app.fallthrough();

  std::string scenario, out, routes, suite, dirs;
  bool timings = false;
  int points = 401, nk = 200;
  double kick = 0.0, kmax_taper = 16.0;
  std::vector<double> hbars;

  auto* shift = app.add_subcommand("shift", "run every shift route and write the JSON report");
  shift->add_option("--scenario", scenario, "scenario JSON")->required();
  shift->add_option("--out", out, "report path (default: outputs.report, else stdout)");
  shift->add_option("--routes", routes, "comma list of direct,green,quantum,quadrature");
  shift->add_flag("--timings", timings, "include wall times in the report");

  auto* spectrum = app.add_subcommand("spectrum", "classical emission spectrum along directions");
  spectrum->add_option("--scenario", scenario)->required();
  spectrum->add_option("--out", out, "CSV path (default stdout)");
  spectrum->add_option("--directions", dirs, "nx,ny,nz;nx,ny,nz;...");
  spectrum->add_option("--nk", nk, "k samples per direction");
  spectrum->add_option("--kmax", kmax_taper, "largest k in units of 1/taper");

  auto* force = app.add_subcommand("force-profile", "kinematics, external and radiation-reaction forces");
  force->add_option("--scenario", scenario)->required();
  force->add_option("--out", out);
  force->add_option("--points", points);

  auto* jacobi = app.add_subcommand("jacobi-dump", "Jacobi fields for unit kicks at one time");
  jacobi->add_option("--scenario", scenario)->required();
  jacobi->add_option("--out", out);
  jacobi->add_option("--points", points);
  jacobi->add_option("--kick-time", kick);

  auto* conv = app.add_subcommand("convergence", "finite-hbar amplitude vs classical amplitude");
  conv->add_option("--scenario", scenario)->required();
  conv->add_option("--out", out);
  conv->add_option("--hbar", hbars, "hbar values (default: scenario list)");

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--suite", suite, "fast or full")->default_val("fast");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }
  set_serial(serial);

  try {
    if (*shift) return cmd_shift(scenario, out, routes, timings);
    if (*verify) return cmd_verify(suite);
    if (*jacobi) return cmd_jacobi(scenario, out, points, kick);
    if (*conv) return cmd_convergence(scenario, out, hbars);
    const Scenario sc = load_scenario(scenario);
    const Trajectory traj = build_trajectory(sc);
    Output o(out);
    if (*force) {
      write_force_csv(traj, sc.alpha_c(), points, o.stream());
    } else {
      const auto d = dirs.empty() ? default_directions(traj) : parse_directions(dirs);
      write_spectrum_csv(sc, traj, d, nk, kmax_taper, o.stream());
    }
    return kPass;
  } catch (const ScenarioError& e) {
    std::cerr << "error: invalid scenario\n";
    for (const auto& p : e.problems) std::cerr << "  " << p << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
}
