#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sqw/bath.hpp"
#include "sqw/fock.hpp"
#include "sqw/grid.hpp"
#include "sqw/kernel.hpp"

namespace sqw::harness {

struct CoherentInit {
  cplx alpha0{0.0};
};
struct ThermalInit {
  double nbar0 = 0.0;
};
// weight * g_s(scale * a - mu0)
struct GaussianInit {
  OrderingVector s{0.0, 0.0, 1.0};
  cplx mu0{0.0};
  double weight = 1.0;
  double scale = 1.0;
};
struct FockInit {
  int k = 0;
};

using InitialState = std::variant<CoherentInit, ThermalInit, GaussianInit, FockInit>;

struct GridConfig {
  int n = 256;
  double half_extent = 5.0;
  ComplexPoint center;

  GridSpec spec() const { return GridSpec::square(n, half_extent, center); }
};

struct OracleConfig {
  int N = 40;
  double dt = 0.0;  // 0 picks the default step for the bath
};

struct Tolerances {
  double linf = 2e-3;
  double l2 = 1e-3;
  double moment = 1e-4;
  double trace = 1e-6;
};

struct QuasidistConfig {
  OrderingVector r{0.0, 0.0, 1.0};
  int N = 16;
  int m = 1;
  int n = 1;
};

struct Scenario {
  std::string name;
  BathParams bath;
  DriveSpec drive = NoDrive{};
  InitialState initial = CoherentInit{};
  std::vector<double> times;
  GridConfig grid;
  OracleConfig oracle;
  Tolerances tolerances;
  std::optional<QuasidistConfig> quasidist;
};

// Parses scenario JSON text. Throws ConfigError with a field path on bad input.
// With "units": "omega", kappa, drive amplitude and frequency are multiples of
// Omega and times are in units of 1/Omega.
Scenario parse_scenario(const std::string& json_text, const std::string& name = "scenario");
Scenario load_scenario(const std::filesystem::path& path);

// Wigner function of the initial state when it is Gaussian.
std::optional<GaussianPhaseFunction> initial_wigner(const Scenario& sc);
FockDensityMatrix initial_density(const Scenario& sc, int N);

double oracle_time_step(const Scenario& sc);

}  // namespace sqw::harness
