#include "sqw/harness/runners.hpp"

#include <unistd.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "json.hpp"
#include "sqw/errors.hpp"
#include "sqw/io.hpp"
#include "sqw/quasidist.hpp"

namespace sqw::harness {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::pair<int, int> kMomentOrders[] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 2}, {2, 0}};

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

json ordering_json(const OrderingVector& r) { return json::array({cjson(r.r1), cjson(r.r2), cjson(r.r3)}); }

std::string moment_key(int m, int n) { return std::to_string(m) + "," + std::to_string(n); }

std::string indexed(const char* prefix, std::size_t i, const char* ext) {
  std::ostringstream os;
  os << prefix << std::setw(3) << std::setfill('0') << i << ext;
  return os.str();
}

// Files go to a hidden sibling directory that replaces out/<stem> on commit.
class AtomicDir {
 public:
  AtomicDir(const fs::path& out, const std::string& stem) : final_(out / stem) {
    fs::create_directories(out);
    tmp_ = out / ("." + stem + ".tmp." + std::to_string(::getpid()));
    fs::remove_all(tmp_);
    fs::create_directories(tmp_);
  }
  ~AtomicDir() {
    std::error_code ec;
    if (!committed_) fs::remove_all(tmp_, ec);
  }
  AtomicDir(const AtomicDir&) = delete;
  AtomicDir& operator=(const AtomicDir&) = delete;

  fs::path file(const std::string& name) const { return tmp_ / name; }
  void commit() {
    fs::remove_all(final_);
    fs::rename(tmp_, final_);
    committed_ = true;
  }
  const fs::path& final_path() const { return final_; }

 private:
  fs::path final_;
  fs::path tmp_;
  bool committed_ = false;
};

void write_json(const fs::path& p, const json& j) {
  std::ofstream os(p);
  if (!os) throw ConfigError("cannot write " + p.string());
  os << j.dump(2) << '\n';
}

Metadata grid_meta(const Scenario& sc, double t, Frame frame, const char* what) {
  return {{"scenario", sc.name}, {"t", format_double(t)}, {"frame", frame == Frame::lab ? "lab" : "rotating"},
          {"quantity", what}};
}

// Rotating-frame grid seen in the lab frame: W_lab(a) = W_rot(e^{i Omega t} a).
// The rotated corners reach sqrt(2) further out, so w0 is zero-padded first.
PhaseSpaceGrid lab_view_of_grid(const PhaseSpaceGrid& w0, const Scenario& sc, double t, const GridSpec& spec) {
  const int pad = static_cast<int>(std::ceil(0.21 * std::max(w0.spec.nx, w0.spec.ny))) + 2;
  const PhaseSpaceGrid wide = pad_grid(w0, pad);
  const PhaseSpaceGrid rot = propagate_grid(wide, sc.bath, sc.drive, t, wide.spec);
  const cplx ph = std::polar(1.0, sc.bath.Omega * t);
  return sample(spec, [&](ComplexPoint a) { return interpolate_bicubic(rot, ph * a.value()); });
}

// Below this step the RK4 truncation error sinks into round-off and the
// halving ratio stops meaning anything.
constexpr double kOrderCheckMinStep = 0.02;

// Moments from a sampled Wigner function. Symmetric moments convert to normal
// order for m + n <= 2 by subtracting 1/2 from <a^dag a>.
std::vector<std::pair<std::string, cplx>> grid_moments(const PhaseSpaceGrid& w) {
  std::vector<std::pair<std::string, cplx>> out;
  for (auto [m, n] : kMomentOrders) {
    cplx s{0.0};
    for (int iy = 0; iy < w.spec.ny; ++iy) {
      cplx row{0.0};
      for (int ix = 0; ix < w.spec.nx; ++ix) {
        const cplx a = w.spec.point(ix, iy).value();
        row += w.at(ix, iy) * std::pow(std::conj(a), m) * std::pow(a, n);
      }
      s += row;
    }
    s *= w.spec.cell_measure();
    out.emplace_back(moment_key(m, n), s);
  }
  // m = n = 1 is the only mixed order here.
  out[3].second -= 0.5 * out[0].second;
  return out;
}

std::vector<std::pair<std::string, cplx>> rho_moments(const FockDensityMatrix& rho) {
  std::vector<std::pair<std::string, cplx>> out;
  for (auto [m, n] : kMomentOrders) out.emplace_back(moment_key(m, n), moments(rho, m, n));
  return out;
}

json moments_json(const std::vector<std::pair<std::string, cplx>>& ms) {
  json j = json::object();
  for (const auto& [k, v] : ms) j[k] = cjson(v);
  return j;
}

GaussianPhaseFunction require_gaussian(const Scenario& sc, const char* who) {
  auto f = initial_wigner(sc);
  if (!f) throw ConfigError(std::string(who) + ": the analytic path needs a Gaussian initial state");
  return *f;
}

std::vector<TrajectoryPoint> oracle_trajectory(const Scenario& sc) {
  IntegratorConfig cfg;
  cfg.dt = oracle_time_step(sc);
  cfg.t_end = sc.times.back();
  cfg.record_times = sc.times;
  cfg.frame = Frame::rotating;
  return integrate(initial_density(sc, sc.oracle.N), sc.bath, sc.drive, cfg);
}

template <class F>
int guarded(std::ostream& log, const std::string& who, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << who << ": configuration error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const NumericalError& e) {
    log << who << ": numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    log << who << ": failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace

PathKind parse_path_kind(const std::string& s) {
  if (s == "analytic") return PathKind::analytic;
  if (s == "grid") return PathKind::grid;
  if (s == "oracle") return PathKind::oracle;
  if (s == "series") return PathKind::series;
  throw ConfigError("unknown path kind '" + s + "'");
}

const char* path_name(PathKind p) {
  switch (p) {
    case PathKind::analytic: return "analytic";
    case PathKind::grid: return "grid";
    case PathKind::oracle: return "oracle";
    case PathKind::series: return "series";
  }
  return "?";
}

std::vector<PathSample> run_path(const Scenario& sc, PathKind path) {
  const GridSpec spec = sc.grid.spec();
  std::vector<PathSample> out;
  switch (path) {
    case PathKind::analytic: {
      const GaussianPhaseFunction f0 = require_gaussian(sc, "analytic");
      for (double t : sc.times) {
        const GaussianPhaseFunction ft = propagate_gaussian(f0, sc.bath, sc.drive, t);
        PathSample s;
        s.wigner = sample_function(ft, spec);
        for (auto [m, n] : kMomentOrders) s.moments.emplace_back(moment_key(m, n), normal_ordered_moment(ft, m, n));
        s.trace_drift = std::abs(ft.mass() - 1.0);
        out.push_back(std::move(s));
      }
      break;
    }
    case PathKind::grid: {
      const auto f0 = initial_wigner(sc);
      const PhaseSpaceGrid w0 =
          f0 ? sample_function(*f0, spec) : wigner_grid(initial_density(sc, sc.oracle.N), spec);
      for (double t : sc.times) {
        PathSample s;
        s.wigner = propagate_grid(w0, sc.bath, sc.drive, t, spec);
        s.moments = grid_moments(s.wigner);
        s.trace_drift = std::abs(s.moments[0].second - 1.0);
        out.push_back(std::move(s));
      }
      break;
    }
    case PathKind::oracle: {
      for (const auto& p : oracle_trajectory(sc)) {
        PathSample s;
        s.wigner = wigner_grid(p.rho, spec);
        s.moments = rho_moments(p.rho);
        s.trace_drift = p.monitors.trace_drift;
        out.push_back(std::move(s));
      }
      break;
    }
    case PathKind::series: {
      const FockDensityMatrix rho0 = initial_density(sc, sc.oracle.N);
      for (double t : sc.times) {
        const SeriesResult r = series_propagate(rho0, sc.bath, sc.drive, t);
        PathSample s;
        s.wigner = wigner_grid(r.rho, spec);
        s.moments = rho_moments(r.rho);
        s.trace_drift = std::abs(r.trace - 1.0);
        out.push_back(std::move(s));
      }
      break;
    }
  }
  return out;
}

ComparisonReport compare_scenario(const Scenario& sc, PathKind lhs, PathKind rhs) {
  const auto a = run_path(sc, lhs);
  const auto b = lhs == rhs ? a : run_path(sc, rhs);
  ComparisonReport rep;
  rep.scenario = sc.name;
  rep.lhs = path_name(lhs);
  rep.rhs = path_name(rhs);
  const Tolerances& tol = sc.tolerances;
  for (std::size_t i = 0; i < sc.times.size(); ++i) {
    TimeRecord r;
    r.t = sc.times[i];
    r.linf_wigner = linf_distance(a[i].wigner, b[i].wigner);
    r.l2_wigner = l2_distance(a[i].wigner, b[i].wigner);
    r.trace_drift = std::max(a[i].trace_drift, b[i].trace_drift);
    bool ok = r.linf_wigner <= tol.linf && r.l2_wigner <= tol.l2 && r.trace_drift <= tol.trace;
    for (std::size_t k = 0; k < a[i].moments.size(); ++k) {
      const double e = std::abs(a[i].moments[k].second - b[i].moments[k].second);
      r.moment_errors.emplace_back(a[i].moments[k].first, e);
      ok = ok && e <= tol.moment;
    }
    r.pass = ok;
    rep.pass = rep.pass && ok;
    rep.records.push_back(std::move(r));
  }
  return rep;
}

int run_kernel(const Scenario& sc, const std::string& stem, const RunOptions& opt, std::ostream& log) {
  return guarded(log, "kernel", [&] {
    AtomicDir dir(opt.out_dir, stem);
    const GridSpec spec = sc.grid.spec();
    json coeffs = json::array();
    bool verified = true;
    if (!sc.bath.is_physical()) log << "kernel: warning: |M|^2 > nbar (nbar + 1), the map may not preserve positivity\n";
    for (std::size_t i = 0; i < sc.times.size(); ++i) {
      const double t = sc.times[i];
      const PropagatorCoefficients c = propagator_coefficients(sc.bath, sc.drive, t);
      coeffs.push_back({{"t", t},
                        {"lambda1", cjson(c.lambda1)},
                        {"lambda2", cjson(c.lambda2)},
                        {"T", c.T},
                        {"A", c.A},
                        {"r", ordering_json(c.ordering)}});
      if (t == 0.0) {
        log << "kernel: t = 0 is the identity (delta kernel), no grid written\n";
        continue;
      }
      GaussianPhaseFunction k = evolution_kernel(sc.bath, t);
      if (opt.frame == Frame::lab) k = to_lab_frame(k, sc.bath.Omega, t);
      const PhaseSpaceGrid g = sample_function(k, spec);
      for (const auto& w : g.warnings) log << "kernel: t = " << t << ": " << w << '\n';
      const fs::path file = dir.file(indexed("kernel_", i, ".csv"));
      save_grid_csv(file, g, grid_meta(sc, t, opt.frame, "evolution_kernel"));
      if (opt.verify) {
        const double mass = std::abs(grid_integral(load_grid_csv(file)) - 1.0);
        const bool ok = mass <= 1e-8;
        verified = verified && ok;
        log << "kernel: verify t = " << t << " |integral - 1| = " << mass << (ok ? " ok" : " FAIL") << '\n';
      }
    }
    write_json(dir.file("coefficients.json"), coeffs);
    dir.commit();
    return verified ? kOk : kToleranceFailure;
  });
}

int run_propagate(const Scenario& sc, const std::string& stem, const RunOptions& opt, std::ostream& log) {
  return guarded(log, "propagate", [&] {
    AtomicDir dir(opt.out_dir, stem);
    const GridSpec spec = sc.grid.spec();
    const auto f0 = initial_wigner(sc);
    json report = {{"scenario", sc.name},
                   {"path", f0 ? "analytic" : "grid"},
                   {"frame", opt.frame == Frame::lab ? "lab" : "rotating"}};
    if (!f0) report["note"] = "non-Gaussian initial state: grid path only";
    const PhaseSpaceGrid w0 =
        f0 ? sample_function(*f0, spec) : wigner_grid(initial_density(sc, sc.oracle.N), spec);
    const double mass0 = grid_integral(w0).real();
    json records = json::array();
    bool ok = true;
    for (std::size_t i = 0; i < sc.times.size(); ++i) {
      const double t = sc.times[i];
      json rec = {{"t", t}};
      PhaseSpaceGrid w;
      if (f0) {
        GaussianPhaseFunction ft = propagate_gaussian(*f0, sc.bath, sc.drive, t);
        rec["mean"] = cjson(ft.mean.value());
        rec["ordering"] = ordering_json(ft.ordering);
        rec["weight"] = ft.weight;
        rec["scale"] = ft.scale;
        if (opt.frame == Frame::lab) ft = to_lab_frame(ft, sc.bath.Omega, t);
        w = sample_function(ft, spec);
      } else if (opt.frame == Frame::lab) {
        w = lab_view_of_grid(w0, sc, t, spec);
      } else {
        w = propagate_grid(w0, sc.bath, sc.drive, t, spec);
      }
      const double mass = grid_integral(w).real();
      rec["grid_mass"] = mass;
      if (opt.verify && std::abs(mass - mass0) > 1e-4) {
        ok = false;
        log << "propagate: mass drift at t = " << t << ": " << mass - mass0 << '\n';
      }
      records.push_back(rec);
      save_grid_csv(dir.file(indexed("wigner_", i, ".csv")), w, grid_meta(sc, t, opt.frame, "wigner"));
    }
    report["records"] = records;
    write_json(dir.file("propagate.json"), report);
    dir.commit();
    return ok ? kOk : kToleranceFailure;
  });
}

int run_oracle(const Scenario& sc, const std::string& stem, const RunOptions& opt, std::ostream& log) {
  return guarded(log, "oracle", [&] {
    AtomicDir dir(opt.out_dir, stem);
    const GridSpec spec = sc.grid.spec();
    const auto traj = oracle_trajectory(sc);
    std::ofstream jl(dir.file("trajectory.jsonl"));
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const auto& p = traj[i];
      const FockDensityMatrix shown =
          opt.frame == Frame::lab ? rotate_frame(p.rho, sc.bath.Omega, p.t, Rotation::to_lab) : p.rho;
      const json rec = {{"t", p.t},
                        {"trace", p.rho.trace().real()},
                        {"herm_drift", p.monitors.herm_drift},
                        {"min_eig", p.monitors.min_eig},
                        {"tail", p.monitors.tail},
                        {"moments", moments_json(rho_moments(shown))}};
      jl << rec.dump() << '\n';
      if (p.monitors.truncation_warning) log << "oracle: TruncationWarning at t = " << p.t << ", tail " << p.monitors.tail << '\n';
      save_grid_csv(dir.file(indexed("wigner_", i, ".csv")), wigner_grid(shown, spec),
                    grid_meta(sc, p.t, opt.frame, "wigner"));
      if (opt.dump_rho) {
        save_matrix_csv(dir.file(indexed("rho_", i, ".csv")), shown.entries,
                        {{"t", format_double(p.t)}, {"N", std::to_string(shown.dim())}});
      }
    }
    jl.close();
    if (opt.order_check) {
      const OrderCheck c = rk4_order_check(initial_density(sc, sc.oracle.N), sc.bath, sc.drive, sc.times.back(),
                                           std::max(oracle_time_step(sc), kOrderCheckMinStep));
      write_json(dir.file("order_check.json"),
                 {{"dt", c.dt}, {"error_dt", c.error_dt}, {"error_half", c.error_half}, {"ratio", c.ratio}});
      log << "oracle: RK4 order check ratio " << c.ratio << " (dt = " << c.dt << ")\n";
    }
    dir.commit();
    return kOk;
  });
}

int run_compare(const Scenario& sc, const std::string& stem, const RunOptions& opt, std::ostream& log) {
  return guarded(log, "compare", [&] {
    AtomicDir dir(opt.out_dir, stem);
    const ComparisonReport rep = compare_scenario(sc, opt.lhs, opt.rhs);
    json recs = json::array();
    log << "compare " << sc.name << " (" << rep.lhs << " vs " << rep.rhs << ")\n";
    for (const auto& r : rep.records) {
      json me = json::object();
      double worst = 0.0;
      for (const auto& [k, v] : r.moment_errors) {
        me[k] = v;
        worst = std::max(worst, v);
      }
      recs.push_back({{"t", r.t},
                      {"linf_wigner", r.linf_wigner},
                      {"l2_wigner", r.l2_wigner},
                      {"moment_errors", me},
                      {"trace_drift", r.trace_drift},
                      {"pass", r.pass}});
      log << "  t=" << r.t << " linf=" << r.linf_wigner << " l2=" << r.l2_wigner << " moment=" << worst
          << " trace=" << r.trace_drift << (r.pass ? "  pass" : "  FAIL") << '\n';
    }
    write_json(dir.file("report.json"),
               {{"scenario", rep.scenario}, {"lhs", rep.lhs}, {"rhs", rep.rhs}, {"records", recs}, {"pass", rep.pass}});
    dir.commit();
    return rep.pass ? kOk : kToleranceFailure;
  });
}

int run_quasidist(const Scenario& sc, const std::string& stem, const RunOptions& opt, std::ostream& log) {
  return guarded(log, "quasidist", [&] {
    if (!sc.quasidist) throw ConfigError("quasidist: scenario has no 'quasidist' section");
    const QuasidistConfig& q = *sc.quasidist;
    AtomicDir dir(opt.out_dir, stem);
    const GridSpec spec = sc.grid.spec();
    const FockDensityMatrix rho = initial_density(sc, q.N);
    const PhaseSpaceGrid w = quasi_distribution(rho, q.r, spec);
    const double spot = quasi_distribution_spot_check(w, rho, q.r);
    const double mass = std::abs(grid_integral(w) - 1.0);
    const FockDensityMatrix back = reconstruct_rho(w, q.r, q.N);
    const double frob = (back.entries - rho.entries).norm();
    const OrderedProductSpec ps{q.m, q.n, q.r};
    const Matrix R = ordered_product(ps, q.N);
    const std::vector<ComplexPoint> probes{{0.0, 0.0}, {0.5, 0.2}, {-0.7, 0.4}, {1.0, -1.0}, {0.3, 1.2}};
    const double rule = verify_ordered_product(ps, R, q.N, probes);

    std::ostringstream rs;
    rs << "[" << format_double(q.r.r1.real()) << "+" << format_double(q.r.r1.imag()) << "i, "
       << format_double(q.r.r2.real()) << "+" << format_double(q.r.r2.imag()) << "i, " << format_double(q.r.r3.real())
       << "+" << format_double(q.r.r3.imag()) << "i]";
    save_grid_csv(dir.file("quasi.csv"), w, {{"scenario", sc.name}, {"r", rs.str()}});
    save_matrix_csv(dir.file("ordered_product.csv"), R,
                    {{"m", std::to_string(q.m)}, {"n", std::to_string(q.n)}, {"r", rs.str()}, {"N", std::to_string(q.N)}});
    write_json(dir.file("quasidist.json"), {{"r", ordering_json(q.r)},
                                            {"N", q.N},
                                            {"spot_check", spot},
                                            {"mass_error", mass},
                                            {"reconstruction_frobenius", frob},
                                            {"ordered_product", {{"m", q.m}, {"n", q.n}, {"rule_deviation", rule}}}});
    log << "quasidist: spot " << spot << ", mass " << mass << ", round trip " << frob << ", ordering rule " << rule
        << '\n';
    dir.commit();
    if (opt.verify && !(spot <= 1e-4 && mass <= 1e-4 && frob <= 1e-3 && rule <= 1e-3)) return kToleranceFailure;
    return kOk;
  });
}

std::uint64_t seed_from_env() {
  if (const char* s = std::getenv("SQW_SEED")) {
    try {
      return std::stoull(s, nullptr, 0);
    } catch (const std::exception&) {
      throw ConfigError(std::string("SQW_SEED is not an integer: ") + s);
    }
  }
  return 0xC0FFEE;
}

}  // namespace sqw::harness
