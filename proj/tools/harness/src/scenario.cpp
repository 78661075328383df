#include "sqw/harness/scenario.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sqw/errors.hpp"
#include "sqw/quasidist.hpp"

namespace sqw::harness {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("scenario " + where + ": " + what);
}

double num(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

double num_or(const json& obj, const char* key, double def, const std::string& where) {
  return obj.contains(key) ? num(obj.at(key), where + "." + key) : def;
}

cplx complex_value(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {num(j[0], where + "[0]"), num(j[1], where + "[1]")};
  fail(where, "expected a number or [re, im]");
}

OrderingVector ordering_value(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) fail(where, "expected [r1, r2, r3]");
  return {complex_value(j[0], where + "[0]"), complex_value(j[1], where + "[1]"), complex_value(j[2], where + "[2]")};
}

const json& need(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(where, std::string("missing field '") + key + "'");
  return obj.at(key);
}

DriveSpec parse_drive(const json& j) {
  if (j.is_null()) return NoDrive{};
  const std::string type = need(j, "type", "drive").get<std::string>();
  if (type == "none") return NoDrive{};
  if (type == "constant") return ConstantDrive{num(need(j, "f0", "drive"), "drive.f0")};
  if (type == "cosine") {
    return CosineDrive{num(need(j, "f0", "drive"), "drive.f0"), num(need(j, "omega", "drive"), "drive.omega"),
                       num_or(j, "phase", 0.0, "drive")};
  }
  if (type == "tabulated") {
    TabulatedDrive d;
    for (const auto& s : need(j, "samples", "drive")) {
      if (!s.is_array() || s.size() != 2) fail("drive.samples", "expected [t, f] pairs");
      d.samples.emplace_back(num(s[0], "drive.samples"), num(s[1], "drive.samples"));
    }
    validate_drive(d);
    return d;
  }
  fail("drive.type", "unknown drive type '" + type + "'");
}

InitialState parse_initial(const json& j) {
  const std::string type = need(j, "type", "initial").get<std::string>();
  if (type == "coherent") return CoherentInit{complex_value(need(j, "alpha0", "initial"), "initial.alpha0")};
  if (type == "thermal") {
    const double n0 = num(need(j, "nbar0", "initial"), "initial.nbar0");
    if (n0 < 0.0) fail("initial.nbar0", "must be >= 0");
    return ThermalInit{n0};
  }
  if (type == "gaussian") {
    GaussianInit g;
    g.s = ordering_value(need(j, "s", "initial"), "initial.s");
    if (j.contains("mu0")) g.mu0 = complex_value(j.at("mu0"), "initial.mu0");
    g.weight = num_or(j, "weight", 1.0, "initial");
    g.scale = num_or(j, "scale", 1.0, "initial");
    if (!(g.weight > 0.0) || !(g.scale > 0.0)) fail("initial", "weight and scale must be positive");
    return g;
  }
  if (type == "fock") {
    const json& k = need(j, "k", "initial");
    if (!k.is_number_integer() || k.get<int>() < 0) fail("initial.k", "expected a non-negative integer");
    return FockInit{k.get<int>()};
  }
  fail("initial.type", "unknown initial state '" + type + "'");
}

Scenario build(const json& j, const std::string& name) {
  if (!j.is_object()) fail("root", "expected a JSON object");
  Scenario sc;
  sc.name = name;
  const std::string units = j.value("units", std::string("absolute"));
  if (units != "absolute" && units != "omega") fail("units", "expected 'absolute' or 'omega'");

  const json& b = need(j, "bath", "root");
  sc.bath.kappa = num(need(b, "kappa", "bath"), "bath.kappa");
  sc.bath.nbar = num_or(b, "nbar", 0.0, "bath");
  sc.bath.M = b.contains("M") ? complex_value(b.at("M"), "bath.M") : cplx{0.0};
  sc.bath.Omega = num_or(b, "Omega", 1.0, "bath");
  sc.drive = parse_drive(j.contains("drive") ? j.at("drive") : json());
  sc.initial = parse_initial(need(j, "initial", "root"));

  for (const auto& t : need(j, "times", "root")) sc.times.push_back(num(t, "times"));
  if (sc.times.empty()) fail("times", "need at least one time");

  if (units == "omega") {
    const double w = sc.bath.Omega;
    if (!(w > 0.0)) fail("units", "'omega' units need a positive Omega");
    sc.bath.kappa *= w;
    for (double& t : sc.times) t /= w;
    if (auto* c = std::get_if<ConstantDrive>(&sc.drive)) c->f0 *= w;
    if (auto* c = std::get_if<CosineDrive>(&sc.drive)) {
      c->f0 *= w;
      c->omega *= w;
    }
    if (auto* c = std::get_if<TabulatedDrive>(&sc.drive)) {
      for (auto& [t, f] : c->samples) {
        t /= w;
        f *= w;
      }
    }
  }

  for (std::size_t i = 0; i < sc.times.size(); ++i) {
    if (!(sc.times[i] >= 0.0)) fail("times", "must be non-negative");
    if (i > 0 && sc.times[i] <= sc.times[i - 1]) fail("times", "must be strictly ascending");
  }

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    if (g.contains("n")) sc.grid.n = g.at("n").get<int>();
    sc.grid.half_extent = num_or(g, "half_extent", sc.grid.half_extent, "grid");
    if (g.contains("center")) sc.grid.center = complex_value(g.at("center"), "grid.center");
    if (sc.grid.n < 2 || !(sc.grid.half_extent > 0.0)) fail("grid", "need n >= 2 and a positive half_extent");
  }
  if (j.contains("oracle")) {
    const json& o = j.at("oracle");
    if (o.contains("N")) sc.oracle.N = o.at("N").get<int>();
    sc.oracle.dt = num_or(o, "dt", 0.0, "oracle");
    if (sc.oracle.N < 2 || sc.oracle.dt < 0.0) fail("oracle", "need N >= 2 and dt >= 0");
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    sc.tolerances.linf = num_or(t, "linf", sc.tolerances.linf, "tolerances");
    sc.tolerances.l2 = num_or(t, "l2", sc.tolerances.l2, "tolerances");
    sc.tolerances.moment = num_or(t, "moment", sc.tolerances.moment, "tolerances");
    sc.tolerances.trace = num_or(t, "trace", sc.tolerances.trace, "tolerances");
    // Zero is allowed: it forces a comparison to fail.
    if (sc.tolerances.linf < 0.0 || sc.tolerances.l2 < 0.0 || sc.tolerances.moment < 0.0 || sc.tolerances.trace < 0.0) {
      fail("tolerances", "must be non-negative");
    }
  }
  if (j.contains("quasidist")) {
    const json& q = j.at("quasidist");
    QuasidistConfig c;
    if (q.contains("r")) c.r = ordering_value(q.at("r"), "quasidist.r");
    if (q.contains("N")) c.N = q.at("N").get<int>();
    if (q.contains("m")) c.m = q.at("m").get<int>();
    if (q.contains("n")) c.n = q.at("n").get<int>();
    if (c.N < 2 || c.m < 0 || c.n < 0 || c.m + c.n > 4) fail("quasidist", "need N >= 2, m, n >= 0, m + n <= 4");
    sc.quasidist = c;
  }
  sc.bath.validate();
  return sc;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text, const std::string& name) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario: invalid JSON: " + std::string(e.what()));
  }
  try {
    return build(j, name);
  } catch (const json::exception& e) {
    throw ConfigError("scenario: " + std::string(e.what()));
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open scenario " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_scenario(ss.str(), path.stem().string());
}

std::optional<GaussianPhaseFunction> initial_wigner(const Scenario& sc) {
  if (const auto* c = std::get_if<CoherentInit>(&sc.initial)) {
    GaussianPhaseFunction f;
    f.mean = c->alpha0;
    return f;
  }
  if (const auto* t = std::get_if<ThermalInit>(&sc.initial)) {
    GaussianPhaseFunction f;
    f.ordering = {0.0, 0.0, 2.0 * t->nbar0 + 1.0};
    return f;
  }
  if (const auto* g = std::get_if<GaussianInit>(&sc.initial)) {
    return GaussianPhaseFunction{g->mu0, g->s, g->weight, g->scale};
  }
  return std::nullopt;
}

FockDensityMatrix initial_density(const Scenario& sc, int N) {
  if (const auto* c = std::get_if<CoherentInit>(&sc.initial)) return coherent_state(c->alpha0, N);
  if (const auto* t = std::get_if<ThermalInit>(&sc.initial)) return thermal_state(t->nbar0, N);
  if (const auto* k = std::get_if<FockInit>(&sc.initial)) return fock_state(k->k, N);
  return density_from_phase_function(*initial_wigner(sc), N);
}

double oracle_time_step(const Scenario& sc) {
  return sc.oracle.dt > 0.0 ? sc.oracle.dt : default_time_step(sc.bath);
}

}  // namespace sqw::harness
