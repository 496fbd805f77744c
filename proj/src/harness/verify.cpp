#include "wyd/harness/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "wyd/error.hpp"

namespace wyd::harness {
namespace {

using nlohmann::ordered_json;

double parse_double(std::string_view text, std::string_view what) {
  std::string owned(text);
  while (!owned.empty() && owned.front() == ' ') owned.erase(owned.begin());
  while (!owned.empty() && owned.back() == ' ') owned.pop_back();
  char* end = nullptr;
  const double v = std::strtod(owned.c_str(), &end);
  if (owned.empty() || end != owned.c_str() + owned.size() || !std::isfinite(v)) {
    fail(ErrorKind::Input, std::string(what) + ": cannot parse '" + owned + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto pos = text.find(sep);
    out.push_back(text.substr(0, pos));
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return out;
}

// Scale used by the spectral-identity checks: max(1, |a|_L2 |b|_L2).
double pair_scale(const BlockOperator& a, const BlockOperator& b) {
  return std::max(1.0, l2_norm(a) * l2_norm(b));
}

ordered_json blocks_json(const TraceAlgebra& alg) {
  ordered_json out = ordered_json::array();
  for (const auto& b : alg.blocks()) out.push_back({b.dim, b.weight});
  return out;
}

ordered_json report_json(const UncertaintyReport& r) {
  ordered_json j;
  j["var_a"] = r.var_a;
  j["var_b"] = r.var_b;
  j["re_cov"] = r.cov.real();
  j["im_cov"] = r.cov.imag();
  j["info_a"] = r.info_a;
  j["info_b"] = r.info_b;
  j["re_corr"] = r.corr.real();
  j["im_corr"] = r.corr.imag();
  j["schrodinger_lhs"] = r.schrodinger_lhs;
  j["schrodinger_bound"] = r.schrodinger_bound;
  j["kosaki_lhs"] = r.kosaki_lhs;
  j["kosaki_rhs"] = r.kosaki_rhs;
  j["gap_f"] = r.gap_f;
  j["eps_q"] = r.eps_q;
  return j;
}

ordered_json identities_json(const IdentityChecks& c) {
  return {{"polarization_defect", c.polarization_defect},
          {"positivity_max_imag", c.positivity_max_imag},
          {"positivity_min_real", c.positivity_min_real},
          {"symmetry_defect", c.symmetry_defect},
          {"total_mass_defect", c.total_mass_defect},
          {"calculus_defect", c.calculus_defect},
          {"passed", c.passed}};
}

ordered_json flags_json(const CaseResult& r, const IdentityChecks& id) {
  return {{"gap", r.report.gap_ok},
          {"schrodinger", r.report.schrodinger_ok},
          {"heisenberg", r.report.heisenberg_ok},
          {"information", r.report.info_ok},
          {"oracle", r.oracle_ok},
          {"positivity4d", r.positivity4d_ok},
          {"pairing", r.pairing_ok},
          {"identities", id.passed}};
}

bool is_rank_deficient(const DensityOperator& rho, const Tolerances& tol) {
  const double eps = tol.psd * std::max(1.0, rho.op().max_abs());
  return rho.decomposition().eigenvalues().front() <= eps;
}

struct TrialOutcome {
  std::string text;
  long long records = 0;
  long long violations = 0;
  long long near_equality = 0;
  bool rank_deficient = false;
  double min_gap_f = std::numeric_limits<double>::infinity();
  double min_relative_gap = std::numeric_limits<double>::infinity();
  double max_oracle_discrepancy = 0.0;
  double max_oracle_ratio = 0.0;
  double min_atom4d_ratio = std::numeric_limits<double>::infinity();
  double max_identity_defect = 0.0;
};

TrialOutcome run_trial(const RunConfig& config, long long trial) {
  TrialOutcome out;
  std::string& text = out.text;
  try {
    const InstanceSpec instance =
        generate_trial(config.seed, static_cast<std::uint64_t>(trial), config.bounds);
    const DensityOperator rho = instance.density(config.tol);
    out.rank_deficient = is_rank_deficient(rho, config.tol);
    const IdentityChecks id = check_identities(instance, rho, config.tol);
    out.max_identity_defect =
        std::max({id.polarization_defect, id.symmetry_defect, id.total_mass_defect,
                  id.positivity_max_imag, std::max(0.0, -id.positivity_min_real)});

    for (double beta : config.betas) {
      const CaseResult r = run_case(instance, rho, beta, config.tol);
      const bool passed = r.passed() && id.passed;
      ordered_json rec;
      rec["trial"] = trial;
      rec["beta"] = beta;
      rec["blocks"] = blocks_json(*instance.algebra);
      rec["rank_deficient"] = out.rank_deficient;
      rec.update(report_json(r.report));
      rec["gap_via_measure"] = r.gap_via_measure;
      rec["oracle_discrepancy"] = r.oracle_discrepancy;
      rec["oracle_tolerance"] = r.oracle_tolerance;
      rec["min_atom4d_weight"] = r.min_atom4d_weight;
      rec["atom4d_scale"] = r.atom4d_scale;
      rec["pairing_discrepancy"] = r.pairing_discrepancy;
      // Informational: F within tolerance of zero.
      const bool near = r.report.gap_f <= r.report.eps_q;
      rec["near_equality"] = near;
      rec["identities"] = identities_json(id);
      rec["checks"] = flags_json(r, id);
      rec["passed"] = passed;
      text += rec.dump();
      text += '\n';

      ++out.records;
      if (!passed) ++out.violations;
      if (near) ++out.near_equality;
      out.min_gap_f = std::min(out.min_gap_f, r.report.gap_f);
      out.min_relative_gap = std::min(out.min_relative_gap, r.report.gap_f / r.report.eps_q);
      out.max_oracle_discrepancy = std::max(out.max_oracle_discrepancy, r.oracle_discrepancy);
      out.max_oracle_ratio =
          std::max(out.max_oracle_ratio, r.oracle_discrepancy / r.oracle_tolerance);
      if (r.atom4d_scale > 0.0) {
        out.min_atom4d_ratio =
            std::min(out.min_atom4d_ratio, r.min_atom4d_weight / r.atom4d_scale);
      }
    }
  } catch (const Error& e) {
    ordered_json rec;
    rec["trial"] = trial;
    rec["error"] = std::string(to_string(e.kind()));
    rec["message"] = e.what();
    rec["passed"] = false;
    text += rec.dump();
    text += '\n';
    ++out.records;
    ++out.violations;
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (trials < 1) fail(ErrorKind::Input, "trials must be >= 1");
  if (betas.empty()) fail(ErrorKind::Input, "at least one beta is required");
  for (double beta : betas) require_open_unit_interval(beta);
  if (threads < 1) fail(ErrorKind::Input, "threads must be >= 1");
  bounds.validate();
}

std::vector<double> parse_beta_list(std::string_view text) {
  std::vector<double> out;
  for (auto item : split(text, ',')) out.push_back(parse_double(item, "beta"));
  for (double beta : out) require_open_unit_interval(beta);
  return out;
}

std::vector<double> parse_beta_grid(std::string_view text) {
  if (text.find(':') == std::string_view::npos) return parse_beta_list(text);
  const auto parts = split(text, ':');
  if (parts.size() != 3) fail(ErrorKind::Input, "beta grid must be LO:HI:STEP");
  const double lo = parse_double(parts[0], "beta grid LO");
  const double hi = parse_double(parts[1], "beta grid HI");
  const double step = parse_double(parts[2], "beta grid STEP");
  if (!(step > 0.0) || hi < lo) {
    fail(ErrorKind::Input, "beta grid needs STEP > 0 and HI >= LO");
  }
  const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 1'000'000) fail(ErrorKind::Input, "beta grid is too fine");
  std::vector<double> out;
  for (long long k = 0; k < count; ++k) {
    // Snap to the decimal grid so that mirrored points pair up exactly.
    const double v = lo + static_cast<double>(k) * step;
    out.push_back(std::round(v * 1e12) / 1e12);
  }
  for (double beta : out) require_open_unit_interval(beta);
  return out;
}

IdentityChecks check_identities(const InstanceSpec& instance, const DensityOperator& rho,
                                const Tolerances& tol) {
  const auto& dec = rho.decomposition();
  const auto& a = instance.a;
  const auto& b = instance.b;
  const double scale = pair_scale(a, b);

  IdentityChecks c;
  const auto direct = build_measure(dec, dec, a, b);
  c.polarization_defect = polarization_defect(direct, polarized_measure(dec, dec, a, b));
  c.total_mass_defect = std::abs(direct.total_mass() - trace(a.adjoint() * b));

  const auto mu_aa = build_measure(dec, dec, a, a);
  const auto pos = check_positivity(mu_aa, tol);
  c.positivity_max_imag = pos.max_abs_imag;
  c.positivity_min_real = pos.min_real;
  const double aa_scale = std::max(1.0, l2_norm(a) * l2_norm(a));

  c.symmetry_defect = real_part_symmetry_defect(dec, dec, a, b, tol);

  const ScalarFunction g = [](double t) { return Complex(1.0 - 2.0 * t + t * t * t); };
  const ScalarFunction h = [](double t) { return Complex(t + 0.5 * t * t, 0.25 - t); };
  const Complex lhs = integrate(direct, g, h);
  const Complex rhs = functional_trace(dec, dec, a, b, g, h);
  double gh = 0.0;
  for (const auto& atom : direct.atoms()) {
    gh = std::max(gh, std::abs(g(atom.x) * h(atom.y)));
  }
  c.calculus_defect = std::abs(lhs - rhs);
  c.calculus_tolerance = tol.lin * std::max(1.0, direct.variation() * gh);

  c.passed = c.polarization_defect <= tol.lin * scale &&
             c.total_mass_defect <= tol.lin * scale &&
             c.positivity_max_imag <= tol.lin * aa_scale &&
             c.positivity_min_real >= -tol.lin * aa_scale &&
             c.symmetry_defect <= tol.lin * scale &&
             c.calculus_defect <= c.calculus_tolerance;
  return c;
}

CaseResult run_case(const InstanceSpec& instance, const DensityOperator& rho, double beta,
                    const Tolerances& tol) {
  CaseResult r;
  r.report = kosaki_gap(rho, beta, instance.a, instance.b, tol);

  const BlockOperator a0 = center(rho, instance.a, tol);
  const BlockOperator b0 = center(rho, instance.b, tol);
  const auto& dec = rho.decomposition();
  const auto mu_aa = build_measure(dec, dec, a0, a0);
  const auto mu_bb = build_measure(dec, dec, b0, b0);
  const auto mu_ab = build_measure(dec, dec, a0, b0);
  const auto atoms = product_measure(mu_aa, mu_bb, mu_ab);

  r.gap_via_measure = kernel_integral(atoms, beta);
  r.oracle_discrepancy = std::abs(r.gap_via_measure - r.report.gap_f);
  r.oracle_tolerance = tol.orc * std::max(1.0, std::abs(r.report.kosaki_lhs));
  r.oracle_ok = r.oracle_discrepancy <= r.oracle_tolerance;

  r.min_atom4d_weight = std::numeric_limits<double>::infinity();
  for (const auto& atom : atoms) r.min_atom4d_weight = std::min(r.min_atom4d_weight, atom.weight);
  const double norms = l2_norm(a0) * l2_norm(b0);
  r.atom4d_scale = norms * norms;
  r.positivity4d_ok = r.min_atom4d_weight >= -tol.lin * r.atom4d_scale;

  const auto pairing = wyd_pairing_sides(rho, beta, a0, b0, tol);
  r.pairing_discrepancy = pairing.discrepancy;
  r.pairing_tolerance = pairing.tolerance;
  r.pairing_ok = pairing.discrepancy <= pairing.tolerance;
  return r;
}

VerifySummary run_verify(const RunConfig& config, std::ostream& out) {
  config.validate();
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(config.trials));

  std::atomic<long long> next{0};
  auto worker = [&] {
    for (long long t = next++; t < config.trials; t = next++) {
      outcomes[static_cast<std::size_t>(t)] = run_trial(config, t);
    }
  };
  const int threads = static_cast<int>(
      std::min<long long>(config.threads, config.trials));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  VerifySummary s;
  s.min_gap_f = std::numeric_limits<double>::infinity();
  s.min_relative_gap = std::numeric_limits<double>::infinity();
  s.min_atom4d_ratio = std::numeric_limits<double>::infinity();
  for (const auto& o : outcomes) {
    out << o.text;
    ++s.instances;
    s.records += o.records;
    s.violations += o.violations;
    s.near_equality += o.near_equality;
    s.rank_deficient += o.rank_deficient ? 1 : 0;
    s.min_gap_f = std::min(s.min_gap_f, o.min_gap_f);
    s.min_relative_gap = std::min(s.min_relative_gap, o.min_relative_gap);
    s.max_oracle_discrepancy = std::max(s.max_oracle_discrepancy, o.max_oracle_discrepancy);
    s.max_oracle_ratio = std::max(s.max_oracle_ratio, o.max_oracle_ratio);
    s.min_atom4d_ratio = std::min(s.min_atom4d_ratio, o.min_atom4d_ratio);
    s.max_identity_defect = std::max(s.max_identity_defect, o.max_identity_defect);
  }

  ordered_json summary;
  summary["seed"] = config.seed;
  summary["trials"] = config.trials;
  summary["betas"] = config.betas;
  summary["max_dim"] = config.bounds.max_dim;
  summary["max_blocks"] = config.bounds.max_blocks;
  summary["tolerances"] = {{"herm", config.tol.herm}, {"lin", config.tol.lin},
                           {"norm", config.tol.norm}, {"psd", config.tol.psd},
                           {"q", config.tol.q},       {"orc", config.tol.orc}};
  summary["records"] = s.records;
  summary["violations"] = s.violations;
  summary["rank_deficient_instances"] = s.rank_deficient;
  summary["near_equality_records"] = s.near_equality;
  summary["min_gap_f"] = s.min_gap_f;
  summary["min_gap_over_eps_q"] = s.min_relative_gap;
  summary["max_oracle_discrepancy"] = s.max_oracle_discrepancy;
  summary["max_oracle_over_tolerance"] = s.max_oracle_ratio;
  summary["min_atom4d_weight_over_scale"] = s.min_atom4d_ratio;
  summary["max_identity_defect"] = s.max_identity_defect;
  summary["status"] = s.violations == 0 ? "pass" : "violation";
  out << ordered_json{{"summary", summary}}.dump() << '\n';
  out.flush();
  if (!out) fail(ErrorKind::Io, "failed to write verify report");
  return s;
}

VerifySummary run_verify(const RunConfig& config) {
  config.validate();
  std::ofstream out(config.out_path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot open output file '" + config.out_path + "'");
  return run_verify(config, out);
}

SweepResult run_sweep(const InstanceSpec& instance, const std::vector<double>& beta_grid,
                      const Tolerances& tol) {
  if (beta_grid.empty()) fail(ErrorKind::Input, "beta grid is empty");
  for (double beta : beta_grid) require_open_unit_interval(beta);
  const DensityOperator rho = instance.density(tol);

  SweepResult s;
  s.min_gap_f = std::numeric_limits<double>::infinity();
  std::vector<GPoint> curve;
  for (double beta : beta_grid) {
    auto report = kosaki_gap(rho, beta, instance.a, instance.b, tol);
    s.gap_ok = s.gap_ok && report.gap_ok;
    s.min_gap_f = std::min(s.min_gap_f, report.gap_f);
    curve.push_back({beta, report.gap_f});
    s.rows.push_back({beta, std::move(report)});
  }
  s.findings = analyze_g_curve(curve, s.rows.front().report.eps_q);
  return s;
}

void write_sweep_csv(const SweepResult& sweep, std::ostream& out) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "beta,var_a,var_b,re_cov,info_a,info_b,re_corr,lhs,rhs,gap_f\n";
  for (const auto& row : sweep.rows) {
    const auto& r = row.report;
    os << row.beta << ',' << r.var_a << ',' << r.var_b << ',' << r.cov.real() << ','
       << r.info_a << ',' << r.info_b << ',' << r.corr.real() << ',' << r.kosaki_lhs << ','
       << r.kosaki_rhs << ',' << r.gap_f << '\n';
  }
  const auto& f = sweep.findings;
  os << "# min_gap_f=" << sweep.min_gap_f << " gap_nonnegative=" << std::boolalpha
     << sweep.gap_ok << '\n';
  os << "# monotone_on_half_to_one=" << f.monotone << " max_decrease=" << f.max_decrease
     << " tolerance=" << f.tolerance << '\n';
  os << "# symmetric=" << f.symmetric << " max_asymmetry=" << f.max_asymmetry
     << " mirrored_pairs=" << f.mirrored_pairs << '\n';
  out << os.str();
  if (!out) fail(ErrorKind::Io, "failed to write sweep output");
}

namespace {

// Representative coordinate for each value: the smallest member of its
// cluster of values chained within kDisplayCluster.
std::map<double, double> display_clusters(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::map<double, double> rep;
  double current = 0.0;
  double last = 0.0;
  bool first = true;
  for (double v : values) {
    if (first || v - last > kDisplayCluster) current = v;
    rep[v] = current;
    last = v;
    first = false;
  }
  return rep;
}

template <std::size_t N>
using Key = std::array<double, N>;

ordered_json dump_2d(const AtomicMeasure2D& m, const std::map<double, double>& rep,
                     double threshold) {
  std::vector<std::pair<Key<2>, Complex>> merged;
  for (const auto& atom : m.atoms()) {
    const Key<2> key{rep.at(atom.x), rep.at(atom.y)};
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const auto& e) { return e.first == key; });
    if (it == merged.end()) {
      merged.push_back({key, atom.w});
    } else {
      it->second += atom.w;
    }
  }
  ordered_json out = ordered_json::array();
  for (const auto& [key, w] : merged) {
    if (std::abs(w) <= threshold) continue;
    out.push_back({{"x", key[0]}, {"y", key[1]}, {"re", w.real()}, {"im", w.imag()}});
  }
  return out;
}

}  // namespace

ordered_json dump_measure(const InstanceSpec& instance, double beta, const Tolerances& tol) {
  require_open_unit_interval(beta);
  const DensityOperator rho = instance.density(tol);
  const auto& dec = rho.decomposition();
  const BlockOperator a0 = center(rho, instance.a, tol);
  const BlockOperator b0 = center(rho, instance.b, tol);
  const auto mu_aa = build_measure(dec, dec, a0, a0);
  const auto mu_bb = build_measure(dec, dec, b0, b0);
  const auto mu_ab = build_measure(dec, dec, a0, b0);
  const auto atoms = product_measure(mu_aa, mu_bb, mu_ab);

  const auto rep = display_clusters(dec.eigenvalues());
  const double scale2d = std::max(1.0, mu_aa.variation() + mu_bb.variation());
  const double threshold2d = tol.lin * scale2d;

  ordered_json doc;
  doc["beta"] = beta;
  doc["eigenvalues"] = dec.eigenvalues();
  doc["mu_aa"] = dump_2d(mu_aa, rep, threshold2d);
  doc["mu_bb"] = dump_2d(mu_bb, rep, threshold2d);
  doc["mu_ab"] = dump_2d(mu_ab, rep, threshold2d);

  const Complex mass = mu_ab.total_mass();
  const Complex direct = trace(a0.adjoint() * b0);
  doc["total_mass"] = {{"re", mass.real()},
                       {"im", mass.imag()},
                       {"trace_re", direct.real()},
                       {"trace_im", direct.imag()}};

  std::vector<std::pair<Key<4>, double>> merged;
  for (const auto& atom : atoms) {
    const Key<4> key{rep.at(atom.coords[0]), rep.at(atom.coords[1]), rep.at(atom.coords[2]),
                     rep.at(atom.coords[3])};
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const auto& e) { return e.first == key; });
    if (it == merged.end()) {
      merged.push_back({key, atom.weight});
    } else {
      it->second += atom.weight;
    }
  }
  const double norms = l2_norm(a0) * l2_norm(b0);
  const double threshold4d = tol.lin * std::max(1.0, norms * norms);
  ordered_json list = ordered_json::array();
  for (const auto& [key, w] : merged) {
    if (std::abs(w) <= threshold4d) continue;
    list.push_back({{"coords", key},
                    {"weight", w},
                    {"kernel", kernel(key[0], key[1], key[2], key[3], beta)}});
  }
  doc["atoms4d"] = std::move(list);
  doc["reconstruction"] = kernel_integral(atoms, beta);
  doc["gap_f"] = kosaki_gap(rho, beta, instance.a, instance.b, tol).gap_f;
  return doc;
}

ordered_json case_document(const InstanceSpec& instance, double beta,
                           const CaseResult& result) {
  ordered_json doc;
  if (!instance.label.empty()) doc["label"] = instance.label;
  doc["beta"] = beta;
  doc["blocks"] = blocks_json(*instance.algebra);
  doc.update(report_json(result.report));
  doc["gap_via_measure"] = result.gap_via_measure;
  doc["oracle_discrepancy"] = result.oracle_discrepancy;
  doc["oracle_tolerance"] = result.oracle_tolerance;
  doc["min_atom4d_weight"] = result.min_atom4d_weight;
  doc["pairing_discrepancy"] = result.pairing_discrepancy;
  doc["checks"] = {{"gap", result.report.gap_ok},
                   {"schrodinger", result.report.schrodinger_ok},
                   {"heisenberg", result.report.heisenberg_ok},
                   {"information", result.report.info_ok},
                   {"oracle", result.oracle_ok},
                   {"positivity4d", result.positivity4d_ok},
                   {"pairing", result.pairing_ok}};
  doc["passed"] = result.passed();
  return doc;
}

}  // namespace wyd::harness
