// wydcheck: seeded verification of the Wigner-Yanase-Dyson uncertainty
// inequality in weighted block-matrix trace algebras.
//
// Exit codes: 0 all checks pass, 1 a violation was found, 2 input, config or
// I/O error.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "wyd/error.hpp"
#include "wyd/harness/instance.hpp"
#include "wyd/harness/verify.hpp"
#include "wyd/uncertainty.hpp"

namespace {

using namespace wyd;
using namespace wyd::harness;

struct TolFlags {
  std::string overrides;
  std::optional<double> q;
  std::optional<double> orc;

  void attach(CLI::App* cmd) {
    cmd->add_option("--tol", overrides,
                    "Tolerance overrides key=value,... (herm, lin, norm, psd, q, orc)");
    cmd->add_option("--tol-q", q, "Relative tolerance for inequality checks");
    cmd->add_option("--tol-orc", orc, "Relative tolerance for the measure-side oracle");
  }

  // WYDCHECK_TOL first, then --tol, then the dedicated flags.
  Tolerances resolve() const {
    Tolerances tol = Tolerances::from_environment();
    tol = Tolerances::parse(overrides, tol);
    for (const auto& [value, slot] : {std::pair{q, &tol.q}, std::pair{orc, &tol.orc}}) {
      if (!value) continue;
      if (!(*value > 0.0)) fail(ErrorKind::Input, "tolerance flags must be positive");
      *slot = *value;
    }
    return tol;
  }
};

InstanceSpec load_instance(const std::string& where, const Tolerances& tol) {
  if (where == "builtin:qubit") return qubit_instance();
  if (where == "builtin:commuting") return commuting_instance();
  return read_instance(where, tol);
}

// Writes to `path`, or stdout when empty or "-".
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot open output file '" + path + "'");
  fn(out);
  out.flush();
  if (!out) fail(ErrorKind::Io, "failed to write '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of the Wigner-Yanase-Dyson uncertainty inequality"};
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "Run seeded random trials");
  RunConfig config;
  std::string betas = "0.5";
  TolFlags verify_tol;
  verify->add_option("--seed", config.seed, "64-bit seed")->required();
  verify->add_option("--trials", config.trials, "Number of random instances")->required();
  verify->add_option("--max-dim", config.bounds.max_dim, "Maximum total dimension")
      ->capture_default_str();
  verify->add_option("--max-blocks", config.bounds.max_blocks, "Maximum block count")
      ->capture_default_str();
  verify->add_option("--betas", betas, "Comma-separated betas in (0,1)")->capture_default_str();
  verify->add_option("--threads", config.threads, "Worker threads")->capture_default_str();
  verify->add_option("--out", config.out_path, "Report path (JSON lines)")->required();
  verify_tol.attach(verify);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Evaluate g(beta) on a grid");
  std::string sweep_instance, sweep_grid, sweep_out;
  TolFlags sweep_tol;
  sweep->add_option("--instance", sweep_instance, "Instance file or builtin:qubit")
      ->required();
  sweep->add_option("--beta-grid", sweep_grid, "LO:HI:STEP or comma list")->required();
  sweep->add_option("--out", sweep_out, "CSV path (default stdout)");
  sweep_tol.attach(sweep);

  // case
  auto* kase = app.add_subcommand("case", "Report every quantity for one instance");
  std::string case_instance, case_out;
  double case_beta = 0.5;
  bool dump = false;
  TolFlags case_tol;
  kase->add_option("--instance", case_instance, "Instance file or builtin:qubit")->required();
  kase->add_option("--beta", case_beta, "beta in (0,1)")->required();
  kase->add_flag("--dump-measures", dump, "Include the 2D and 4D measure atoms");
  kase->add_option("--out", case_out, "JSON path (default stdout)");
  case_tol.attach(kase);

  // kernel
  auto* kern = app.add_subcommand("kernel", "Evaluate the integration kernel K");
  std::string lambdas;
  double kernel_beta = 0.5;
  kern->add_option("--lambdas", lambdas, "L1,L2,L3,L4")->required();
  kern->add_option("--beta", kernel_beta, "beta in (0,1)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*verify) {
      config.betas = parse_beta_list(betas);
      config.tol = verify_tol.resolve();
      const auto summary = run_verify(config);
      std::cerr << "records " << summary.records << ", violations " << summary.violations
                << ", min gap_f " << std::setprecision(17) << summary.min_gap_f
                << ", max oracle discrepancy " << summary.max_oracle_discrepancy << '\n';
      return summary.exit_code();
    }
    if (*sweep) {
      const Tolerances tol = sweep_tol.resolve();
      const auto grid = parse_beta_grid(sweep_grid);
      const auto result = run_sweep(load_instance(sweep_instance, tol), grid, tol);
      with_output(sweep_out, [&](std::ostream& out) { write_sweep_csv(result, out); });
      return result.exit_code();
    }
    if (*kase) {
      const Tolerances tol = case_tol.resolve();
      require_open_unit_interval(case_beta);
      const auto instance = load_instance(case_instance, tol);
      const auto rho = instance.density(tol);
      const auto result = run_case(instance, rho, case_beta, tol);
      auto doc = case_document(instance, case_beta, result);
      if (dump) doc["measures"] = dump_measure(instance, case_beta, tol);
      with_output(case_out, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
      return result.passed() ? kPass : kViolation;
    }
    if (*kern) {
      std::vector<double> l;
      std::stringstream ss(lambdas);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          std::size_t used = 0;
          l.push_back(std::stod(item, &used));
          if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
          fail(ErrorKind::Input, "cannot parse lambda '" + item + "'");
        }
      }
      if (l.size() != 4) fail(ErrorKind::Input, "--lambdas needs exactly four values");
      const double k = kernel(l[0], l[1], l[2], l[3], kernel_beta);
      std::cout << std::setprecision(17) << k << '\n';
      return kPass;
    }
  } catch (const Error& e) {
    std::cerr << "wydcheck: " << e.what() << '\n';
    return e.kind() == ErrorKind::InternalConsistency ? kViolation : kInputError;
  } catch (const std::exception& e) {
    std::cerr << "wydcheck: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
