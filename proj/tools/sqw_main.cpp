#include <algorithm>
#include <atomic>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "sqw/errors.hpp"
#include "sqw/harness/runners.hpp"

using namespace sqw;
using namespace sqw::harness;

namespace {

using Runner = int (*)(const Scenario&, const std::string&, const RunOptions&, std::ostream&);

int run_one(Runner fn, const std::string& path, const RunOptions& opt, std::ostream& log) {
  Scenario sc;
  try {
    sc = load_scenario(path);
  } catch (const Error& e) {
    log << path << ": " << e.what() << '\n';
    return kConfigFailure;
  }
  return fn(sc, std::filesystem::path(path).stem().string(), opt, log);
}

int run_all(Runner fn, const std::vector<std::string>& paths, const RunOptions& opt, int jobs) {
  std::vector<std::ostringstream> logs(paths.size());
  std::vector<int> codes(paths.size(), kOk);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < paths.size();) codes[i] = run_one(fn, paths[i], opt, logs[i]);
  };
  const int k = std::clamp(jobs, 1, static_cast<int>(paths.size()));
  std::vector<std::thread> pool;
  for (int j = 1; j < k; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& l : logs) std::cerr << l.str();
  return *std::max_element(codes.begin(), codes.end());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Squeezed-bath Wigner propagation toolkit"};
  app.require_subcommand(1);

  std::vector<std::string> scenarios;
  std::string out_dir = "out";
  std::string frame = "rotating";
  std::string lhs = "analytic";
  std::string rhs = "oracle";
  std::string corrupt;
  bool verify = false;
  bool order_check = false;
  bool dump_rho = false;
  int jobs = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", scenarios, "Scenario JSON file (repeatable)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--frame", frame, "Frame for emitted grids")->check(CLI::IsMember({"lab", "rotating"}));
    sub->add_flag("--verify", verify, "Check emitted outputs");
    sub->add_option("--jobs", jobs, "Scenarios to run in parallel")->check(CLI::PositiveNumber);
  };

  struct Sub {
    const char* name;
    const char* help;
    Runner fn;
  };
  const Sub subs[] = {
      {"kernel", "Emit propagator coefficients and evolution kernels", run_kernel},
      {"propagate", "Propagate the initial Wigner function", run_propagate},
      {"oracle", "Integrate the master equation in a truncated Fock basis", run_oracle},
      {"compare", "Compare two propagation paths", run_compare},
      {"quasidist", "Quasi-distribution, reconstruction and ordered products", run_quasidist},
  };
  std::vector<std::pair<CLI::App*, Runner>> runners;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub);
    runners.emplace_back(sub, s.fn);
    if (std::string(s.name) == "oracle") {
      sub->add_flag("--order-check", order_check, "Rerun with halved step and report the RK4 order ratio");
      sub->add_flag("--dump-rho", dump_rho, "Write density matrices");
    }
    if (std::string(s.name) == "compare") {
      sub->add_option("--lhs", lhs)->check(CLI::IsMember({"analytic", "grid", "oracle", "series"}));
      sub->add_option("--rhs", rhs)->check(CLI::IsMember({"analytic", "grid", "oracle", "series"}));
    }
  }
  CLI::App* selftest = app.add_subcommand("selftest", "Run the embedded invariant suite");
  selftest->add_option("--corrupt", corrupt, "Sabotage the named check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigFailure;
  }

  try {
    if (selftest->parsed()) return run_selftest(std::cout, corrupt);
    RunOptions opt;
    opt.out_dir = out_dir;
    opt.frame = frame == "lab" ? Frame::lab : Frame::rotating;
    opt.verify = verify;
    opt.order_check = order_check;
    opt.dump_rho = dump_rho;
    opt.lhs = parse_path_kind(lhs);
    opt.rhs = parse_path_kind(rhs);
    for (const auto& [sub, fn] : runners)
      if (sub->parsed()) return run_all(fn, scenarios, opt, jobs);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kConfigFailure;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kNumericalFailure;
  }
  return kConfigFailure;
}
