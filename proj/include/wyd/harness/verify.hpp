#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wyd/harness/instance.hpp"
#include "wyd/uncertainty.hpp"

namespace wyd::harness {

enum ExitCode : int { kPass = 0, kViolation = 1, kInputError = 2 };

struct RunConfig {
  std::uint64_t seed = 1;
  long long trials = 100;
  GeneratorBounds bounds;
  std::vector<double> betas{0.5};
  Tolerances tol;
  std::string out_path;  // empty: caller supplies the stream
  int threads = 1;

  void validate() const;
};

// Parses "0.1,0.5,0.9".
std::vector<double> parse_beta_list(std::string_view text);
// Parses "LO:HI:STEP" (inclusive of HI up to rounding) or a comma list.
std::vector<double> parse_beta_grid(std::string_view text);

// Instance-level spectral-measure identities; independent of beta except
// the pairing, which is checked at every configured beta.
struct IdentityChecks {
  double polarization_defect = 0.0;
  double positivity_max_imag = 0.0;
  double positivity_min_real = 0.0;
  double symmetry_defect = 0.0;
  double total_mass_defect = 0.0;
  double calculus_defect = 0.0;
  double calculus_tolerance = 0.0;
  bool passed = false;
};

IdentityChecks check_identities(const InstanceSpec& instance, const DensityOperator& rho,
                                const Tolerances& tol);

// Everything checked for one (instance, beta).
struct CaseResult {
  UncertaintyReport report;
  double gap_via_measure = 0.0;
  double oracle_discrepancy = 0.0;
  double oracle_tolerance = 0.0;
  double min_atom4d_weight = 0.0;
  double atom4d_scale = 0.0;  // (|a0|_L2 |b0|_L2)^2
  double pairing_discrepancy = 0.0;
  double pairing_tolerance = 0.0;

  bool oracle_ok = false;
  bool positivity4d_ok = false;
  bool pairing_ok = false;

  bool passed() const {
    return report.passed() && oracle_ok && positivity4d_ok && pairing_ok;
  }
};

CaseResult run_case(const InstanceSpec& instance, const DensityOperator& rho, double beta,
                    const Tolerances& tol);

struct VerifySummary {
  long long records = 0;
  long long instances = 0;
  long long violations = 0;
  long long near_equality = 0;       // records with gap_f <= eps_q
  long long rank_deficient = 0;
  double min_gap_f = 0.0;
  double min_relative_gap = 0.0;     // min gap_f / eps_q
  double max_oracle_discrepancy = 0.0;
  double max_oracle_ratio = 0.0;     // discrepancy / tolerance
  double min_atom4d_ratio = 0.0;     // min weight / scale
  double max_identity_defect = 0.0;

  int exit_code() const { return violations == 0 ? kPass : kViolation; }
};

// Writes one JSON record per (instance, beta), trial-major, followed by a
// summary record. Output is byte-identical for identical configs regardless
// of `threads`.
VerifySummary run_verify(const RunConfig& config, std::ostream& out);
// Opens config.out_path; raises an I/O error when it cannot be written.
VerifySummary run_verify(const RunConfig& config);

struct SweepRow {
  double beta = 0.0;
  UncertaintyReport report;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  GCurveFindings findings;
  double min_gap_f = 0.0;
  bool gap_ok = true;

  int exit_code() const {
    return gap_ok && findings.monotone && findings.symmetric ? kPass : kViolation;
  }
};

SweepResult run_sweep(const InstanceSpec& instance, const std::vector<double>& beta_grid,
                      const Tolerances& tol = {});
// CSV with columns beta,var_a,var_b,re_cov,info_a,info_b,re_corr,lhs,rhs,gap_f
// (17 significant digits) and '#'-prefixed footer lines with the findings.
void write_sweep_csv(const SweepResult& sweep, std::ostream& out);

// Coordinates closer than this are merged in dumps only.
inline constexpr double kDisplayCluster = 1e-12;

nlohmann::ordered_json dump_measure(const InstanceSpec& instance, double beta,
                                    const Tolerances& tol = {});

nlohmann::ordered_json case_document(const InstanceSpec& instance, double beta,
                                     const CaseResult& result);

}  // namespace wyd::harness
