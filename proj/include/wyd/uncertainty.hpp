#pragma once

// Variance, covariance, WYD correlation/information and the Kosaki-type gap
//
//   F = Var(A)Var(B) - (Re Cov(A,B))^2 - [I_b(A)I_b(B) - (Re Corr_b(A,B))^2]
//
// computed two ways: from trace formulas, and as (1/4) sum K * w over the
// atoms of the positive 4D measure
//
//   mu = mu_aa (x) mu_bb + mu_bb (x) mu_aa - 2 Re mu_ab (x) Re mu_ab.

#include <array>
#include <vector>

#include "wyd/spectral_measure.hpp"
#include "wyd/trace_algebra.hpp"

namespace wyd {

// x - tau(rho x) I
BlockOperator center(const DensityOperator& rho, const BlockOperator& x,
                     const Tolerances& tol = {});

// tau(rho a b) - tau(rho a) tau(rho b)
Complex covariance(const DensityOperator& rho, const BlockOperator& a,
                   const BlockOperator& b, const Tolerances& tol = {});
double variance(const DensityOperator& rho, const BlockOperator& a,
                const Tolerances& tol = {});

// tau(rho a b) - tau(rho^beta a rho^(1-beta) b)
Complex beta_correlation(const DensityOperator& rho, double beta, const BlockOperator& a,
                         const BlockOperator& b, const Tolerances& tol = {});
double beta_information(const DensityOperator& rho, double beta, const BlockOperator& a,
                        const Tolerances& tol = {});

struct SchrodingerResult {
  double lhs = 0.0;               // Var(a)Var(b) - (Re Cov)^2
  double bound = 0.0;             // |tau(rho [a,b])|^2 / 4
  double gap = 0.0;               // lhs - bound
  double heisenberg_gap = 0.0;    // Var(a)Var(b) - bound
  double tolerance = 0.0;
  bool passed = false;
};

SchrodingerResult schrodinger_check(const DensityOperator& rho, const BlockOperator& a,
                                    const BlockOperator& b, const Tolerances& tol = {});

// (l1 + l2) l3^b l4^(1-b) + l1^b l2^(1-b) (l3 + l4) - 2 l1^b l2^(1-b) l3^b l4^(1-b)
double kernel(double l1, double l2, double l3, double l4, double beta);

// l1 + l2 - l1^b l2^(1-b), the nonnegative factor of the kernel.
double kernel_factor(double l1, double l2, double beta);

struct Atom4D {
  std::array<double, 4> coords{};
  double weight = 0.0;
};

// Atoms at (x_i, y_j, x_k, y_l) in (ij, kl) row-major order.
std::vector<Atom4D> product_measure(const AtomicMeasure2D& mu_aa,
                                    const AtomicMeasure2D& mu_bb,
                                    const AtomicMeasure2D& mu_ab);

struct UncertaintyReport {
  double beta = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  Complex cov;
  Complex corr;
  double info_a = 0.0;
  double info_b = 0.0;
  double schrodinger_lhs = 0.0;
  double schrodinger_bound = 0.0;
  double kosaki_lhs = 0.0;
  double kosaki_rhs = 0.0;
  double gap_f = 0.0;

  Tolerances tolerances;
  double eps_q = 0.0;

  bool gap_ok = false;          // gap_f >= -eps_q
  bool schrodinger_ok = false;  // lhs >= bound - eps_q
  bool heisenberg_ok = false;   // var_a var_b >= bound - eps_q
  bool info_ok = false;         // -eps_q <= I_b <= Var + eps_q for a and b

  bool passed() const { return gap_ok && schrodinger_ok && heisenberg_ok && info_ok; }
};

// 1e-9 * max(1, var_a * var_b) with the default tolerances.
double quantity_tolerance(double var_a, double var_b, const Tolerances& tol);

UncertaintyReport kosaki_gap(const DensityOperator& rho, double beta,
                             const BlockOperator& a, const BlockOperator& b,
                             const Tolerances& tol = {});

// (1/4) sum K * w over product_measure() of the centered operands. With
// `cross_check`, raises an internal-consistency error when the result differs
// from kosaki_gap().gap_f by more than tol.orc * max(1, |lhs|).
double kosaki_gap_via_measure(const DensityOperator& rho, double beta,
                              const BlockOperator& a, const BlockOperator& b,
                              const Tolerances& tol = {}, bool cross_check = true);

// Same sum over an explicit atom list.
double kernel_integral(const std::vector<Atom4D>& atoms, double beta);

struct GPoint {
  double beta = 0.0;
  double g = 0.0;
};

std::vector<GPoint> g_curve(const DensityOperator& rho, const BlockOperator& a,
                            const BlockOperator& b, const std::vector<double>& beta_grid,
                            const Tolerances& tol = {});

struct GCurveFindings {
  double tolerance = 0.0;
  // Largest decrease g(b_k) - g(b_{k+1}) between consecutive grid points
  // in [1/2, 1); zero when nondecreasing.
  double max_decrease = 0.0;
  // Largest |g(b) - g(1 - b)| over mirrored grid pairs.
  double max_asymmetry = 0.0;
  int mirrored_pairs = 0;
  bool monotone = true;
  bool symmetric = true;
};

// Points need not be sorted. `tolerance` is absolute.
GCurveFindings analyze_g_curve(const std::vector<GPoint>& curve, double tolerance);

}  // namespace wyd
