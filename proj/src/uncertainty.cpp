#include "wyd/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wyd/error.hpp"

namespace wyd {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_hermitian(const BlockOperator& x, const char* name, const Tolerances& tol) {
  if (!x.is_hermitian(tol)) {
    fail(ErrorKind::Input, std::string("observable ") + name +
                               " is not Hermitian (defect " + fmt(x.hermiticity_defect()) +
                               ")");
  }
}

void require_state_algebra(const DensityOperator& rho, const BlockOperator& x) {
  require_same_algebra(rho.op(), x);
}

double expectation(const DensityOperator& rho, const BlockOperator& x) {
  return trace(rho.op() * x).real();
}

// tau(rho^beta a rho^(1-beta) b) for Hermitian a.
Complex pairing(const BlockOperator& rho_beta, const BlockOperator& rho_rest,
                const BlockOperator& a, const BlockOperator& b) {
  return trace(rho_beta * a * rho_rest * b);
}

}  // namespace

BlockOperator center(const DensityOperator& rho, const BlockOperator& x,
                     const Tolerances& tol) {
  require_state_algebra(rho, x);
  require_hermitian(x, "x", tol);
  return x - Complex(expectation(rho, x)) * BlockOperator::identity(x.algebra());
}

Complex covariance(const DensityOperator& rho, const BlockOperator& a,
                   const BlockOperator& b, const Tolerances& tol) {
  require_state_algebra(rho, a);
  require_state_algebra(rho, b);
  require_hermitian(a, "a", tol);
  require_hermitian(b, "b", tol);
  return trace(rho.op() * a * b) - trace(rho.op() * a) * trace(rho.op() * b);
}

double variance(const DensityOperator& rho, const BlockOperator& a, const Tolerances& tol) {
  return covariance(rho, a, a, tol).real();
}

Complex beta_correlation(const DensityOperator& rho, double beta, const BlockOperator& a,
                         const BlockOperator& b, const Tolerances& tol) {
  require_open_unit_interval(beta);
  require_state_algebra(rho, a);
  require_state_algebra(rho, b);
  require_hermitian(a, "a", tol);
  require_hermitian(b, "b", tol);
  return trace(rho.op() * a * b) -
         pairing(fractional_power(rho, beta), fractional_power(rho, 1.0 - beta), a, b);
}

double beta_information(const DensityOperator& rho, double beta, const BlockOperator& a,
                        const Tolerances& tol) {
  return beta_correlation(rho, beta, a, a, tol).real();
}

double quantity_tolerance(double var_a, double var_b, const Tolerances& tol) {
  return tol.q * std::max(1.0, var_a * var_b);
}

SchrodingerResult schrodinger_check(const DensityOperator& rho, const BlockOperator& a,
                                    const BlockOperator& b, const Tolerances& tol) {
  const double var_a = variance(rho, a, tol);
  const double var_b = variance(rho, b, tol);
  const double re_cov = covariance(rho, a, b, tol).real();
  const Complex comm = trace(rho.op() * (a * b - b * a));

  SchrodingerResult r;
  r.lhs = var_a * var_b - re_cov * re_cov;
  r.bound = 0.25 * std::norm(comm);
  r.gap = r.lhs - r.bound;
  r.heisenberg_gap = var_a * var_b - r.bound;
  r.tolerance = quantity_tolerance(var_a, var_b, tol);
  r.passed = r.gap >= -r.tolerance && r.heisenberg_gap >= -r.tolerance;
  return r;
}

double kernel_factor(double l1, double l2, double beta) {
  return l1 + l2 - power_or_zero(l1, beta) * power_or_zero(l2, 1.0 - beta);
}

double kernel(double l1, double l2, double l3, double l4, double beta) {
  require_open_unit_interval(beta);
  for (double l : {l1, l2, l3, l4}) {
    if (!(l >= 0.0) || !std::isfinite(l)) {
      fail(ErrorKind::Input, "kernel arguments must be finite and >= 0, got " + fmt(l));
    }
  }
  const double p12 = power_or_zero(l1, beta) * power_or_zero(l2, 1.0 - beta);
  const double p34 = power_or_zero(l3, beta) * power_or_zero(l4, 1.0 - beta);
  return (l1 + l2) * p34 + p12 * (l3 + l4) - 2.0 * p12 * p34;
}

std::vector<Atom4D> product_measure(const AtomicMeasure2D& mu_aa,
                                    const AtomicMeasure2D& mu_bb,
                                    const AtomicMeasure2D& mu_ab) {
  const auto& caa = mu_aa.context();
  const auto& cbb = mu_bb.context();
  const auto& cab = mu_ab.context();
  if (!(*caa.algebra == *cbb.algebra) || !(*caa.algebra == *cab.algebra)) {
    fail(ErrorKind::Input, "product measure: measures live in different algebras");
  }
  if (!caa.sigma_is_rho() || !cbb.sigma_is_rho() || !cab.sigma_is_rho()) {
    fail(ErrorKind::Input, "product measure: every factor needs sigma = rho");
  }
  if (!(*caa.rho == *cbb.rho) || !(*caa.rho == *cab.rho)) {
    fail(ErrorKind::Input, "product measure: factors use different decompositions");
  }
  if (!caa.b_is_a() || !cbb.b_is_a() || !(*cab.a == *caa.a) || !(*cab.b == *cbb.a)) {
    fail(ErrorKind::Input, "product measure: expected mu_aa, mu_bb and mu_ab of one pair");
  }

  const auto& aa = mu_aa.atoms();
  const auto& bb = mu_bb.atoms();
  const auto& ab = mu_ab.atoms();
  std::vector<Atom4D> out;
  out.reserve(aa.size() * aa.size());
  for (std::size_t p = 0; p < aa.size(); ++p) {
    for (std::size_t q = 0; q < aa.size(); ++q) {
      Atom4D atom;
      atom.coords = {aa[p].x, aa[p].y, aa[q].x, aa[q].y};
      atom.weight = aa[p].w.real() * bb[q].w.real() + bb[p].w.real() * aa[q].w.real() -
                    2.0 * ab[p].w.real() * ab[q].w.real();
      out.push_back(atom);
    }
  }
  return out;
}

double kernel_integral(const std::vector<Atom4D>& atoms, double beta) {
  double sum = 0.0;
  for (const auto& atom : atoms) {
    const auto& c = atom.coords;
    sum += kernel(c[0], c[1], c[2], c[3], beta) * atom.weight;
  }
  return 0.25 * sum;
}

UncertaintyReport kosaki_gap(const DensityOperator& rho, double beta,
                             const BlockOperator& a, const BlockOperator& b,
                             const Tolerances& tol) {
  require_open_unit_interval(beta);
  const BlockOperator a0 = center(rho, a, tol);
  const BlockOperator b0 = center(rho, b, tol);
  const BlockOperator rho_beta = fractional_power(rho, beta);
  const BlockOperator rho_rest = fractional_power(rho, 1.0 - beta);

  UncertaintyReport r;
  r.beta = beta;
  r.tolerances = tol;
  r.var_a = trace(rho.op() * a0 * a0).real();
  r.var_b = trace(rho.op() * b0 * b0).real();
  r.cov = trace(rho.op() * a0 * b0);
  r.info_a = r.var_a - pairing(rho_beta, rho_rest, a0, a0).real();
  r.info_b = r.var_b - pairing(rho_beta, rho_rest, b0, b0).real();
  r.corr = r.cov - pairing(rho_beta, rho_rest, a0, b0);

  const Complex comm = trace(rho.op() * (a0 * b0 - b0 * a0));
  r.schrodinger_lhs = r.var_a * r.var_b - r.cov.real() * r.cov.real();
  r.schrodinger_bound = 0.25 * std::norm(comm);

  r.kosaki_lhs = r.schrodinger_lhs;
  r.kosaki_rhs = r.info_a * r.info_b - r.corr.real() * r.corr.real();
  r.gap_f = r.kosaki_lhs - r.kosaki_rhs;

  r.eps_q = quantity_tolerance(r.var_a, r.var_b, tol);
  r.gap_ok = r.gap_f >= -r.eps_q;
  r.schrodinger_ok = r.schrodinger_lhs >= r.schrodinger_bound - r.eps_q;
  r.heisenberg_ok = r.var_a * r.var_b >= r.schrodinger_bound - r.eps_q;
  r.info_ok = r.info_a >= -r.eps_q && r.info_a <= r.var_a + r.eps_q &&
              r.info_b >= -r.eps_q && r.info_b <= r.var_b + r.eps_q;
  return r;
}

double kosaki_gap_via_measure(const DensityOperator& rho, double beta,
                              const BlockOperator& a, const BlockOperator& b,
                              const Tolerances& tol, bool cross_check) {
  require_open_unit_interval(beta);
  const BlockOperator a0 = center(rho, a, tol);
  const BlockOperator b0 = center(rho, b, tol);
  const auto& dec = rho.decomposition();
  const auto mu_aa = build_measure(dec, dec, a0, a0);
  const auto mu_bb = build_measure(dec, dec, b0, b0);
  const auto mu_ab = build_measure(dec, dec, a0, b0);
  const double value = kernel_integral(product_measure(mu_aa, mu_bb, mu_ab), beta);

  if (cross_check) {
    const auto report = kosaki_gap(rho, beta, a, b, tol);
    const double limit = tol.orc * std::max(1.0, std::abs(report.kosaki_lhs));
    const double diff = std::abs(value - report.gap_f);
    if (diff > limit) {
      fail(ErrorKind::InternalConsistency,
           "measure-side gap " + fmt(value) + " differs from trace-side gap " +
               fmt(report.gap_f) + " by " + fmt(diff) + " (tolerance " + fmt(limit) + ")");
    }
  }
  return value;
}

std::vector<GPoint> g_curve(const DensityOperator& rho, const BlockOperator& a,
                            const BlockOperator& b, const std::vector<double>& beta_grid,
                            const Tolerances& tol) {
  for (double beta : beta_grid) require_open_unit_interval(beta);
  std::vector<GPoint> out;
  out.reserve(beta_grid.size());
  for (double beta : beta_grid) out.push_back({beta, kosaki_gap(rho, beta, a, b, tol).gap_f});
  return out;
}

GCurveFindings analyze_g_curve(const std::vector<GPoint>& curve, double tolerance) {
  constexpr double kGridSlack = 1e-12;
  GCurveFindings f;
  f.tolerance = tolerance;

  std::vector<GPoint> sorted = curve;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const GPoint& x, const GPoint& y) { return x.beta < y.beta; });

  const GPoint* prev = nullptr;
  for (const auto& p : sorted) {
    if (p.beta < 0.5 - kGridSlack || p.beta >= 1.0) continue;
    if (prev != nullptr) f.max_decrease = std::max(f.max_decrease, prev->g - p.g);
    prev = &p;
  }

  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      if (std::abs(sorted[i].beta + sorted[j].beta - 1.0) <= kGridSlack) {
        ++f.mirrored_pairs;
        f.max_asymmetry = std::max(f.max_asymmetry, std::abs(sorted[i].g - sorted[j].g));
      }
    }
  }
  f.monotone = f.max_decrease <= tolerance;
  f.symmetric = f.max_asymmetry <= tolerance;
  return f;
}

}  // namespace wyd
