#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sqw/harness/scenario.hpp"

namespace sqw::harness {

enum ExitCode : int { kOk = 0, kConfigFailure = 1, kNumericalFailure = 2, kToleranceFailure = 3 };

enum class PathKind { analytic, grid, oracle, series };

PathKind parse_path_kind(const std::string& s);
const char* path_name(PathKind p);

struct RunOptions {
  std::filesystem::path out_dir = "out";
  Frame frame = Frame::rotating;  // display frame for emitted grids
  bool verify = false;
  bool order_check = false;
  bool dump_rho = false;
  PathKind lhs = PathKind::analytic;
  PathKind rhs = PathKind::oracle;
};

struct TimeRecord {
  double t = 0.0;
  double linf_wigner = 0.0;
  double l2_wigner = 0.0;
  std::vector<std::pair<std::string, double>> moment_errors;  // key "m,n"
  double trace_drift = 0.0;
  bool pass = true;
};

struct ComparisonReport {
  std::string scenario;
  std::string lhs;
  std::string rhs;
  std::vector<TimeRecord> records;
  bool pass = true;
};

// Wigner grid (rotating frame) and the state's low moments at t along one path.
struct PathSample {
  PhaseSpaceGrid wigner;
  std::vector<std::pair<std::string, cplx>> moments;  // normal-ordered, m + n <= 2
  double trace_drift = 0.0;
};

std::vector<PathSample> run_path(const Scenario& sc, PathKind path);
ComparisonReport compare_scenario(const Scenario& sc, PathKind lhs, PathKind rhs);

// Each runner writes into out_dir/<stem>/ atomically and returns an ExitCode.
// Messages go to `log`.
int run_kernel(const Scenario& sc, const std::string& stem, const RunOptions& opt, std::ostream& log);
int run_propagate(const Scenario& sc, const std::string& stem, const RunOptions& opt, std::ostream& log);
int run_oracle(const Scenario& sc, const std::string& stem, const RunOptions& opt, std::ostream& log);
int run_compare(const Scenario& sc, const std::string& stem, const RunOptions& opt, std::ostream& log);
int run_quasidist(const Scenario& sc, const std::string& stem, const RunOptions& opt, std::ostream& log);

// Embedded invariant suite. `corrupt` names a check to sabotage (test hook).
int run_selftest(std::ostream& out, const std::string& corrupt = "");

std::uint64_t seed_from_env();

}  // namespace sqw::harness
