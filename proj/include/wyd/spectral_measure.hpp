#pragma once

// Atomic correlation measures
//
//   mu_ab(O1 x O2) = tau(e_rho(O1) a* e_sigma(O2) b)
//
// built from two spectral decompositions. In finite dimensions the measure
// is the finite list of atoms (lambda_i, kappa_j) -> tau(P_i a* Q_j b) over
// all projection pairs, so every identity below is an exact finite sum.

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "wyd/trace_algebra.hpp"

namespace wyd {

struct Atom2D {
  double x = 0.0;      // eigenvalue of rho (row projection)
  double y = 0.0;      // eigenvalue of sigma (column projection)
  Complex w;           // tau(P_i a* Q_j b)
  std::size_t i = 0;   // index into the rho decomposition
  std::size_t j = 0;   // index into the sigma decomposition
};

// Operands a measure was built from. Decompositions are shared when the
// caller passed the same object for rho and sigma; operands likewise.
struct MeasureContext {
  AlgebraPtr algebra;
  std::shared_ptr<const SpectralDecomposition> rho;
  std::shared_ptr<const SpectralDecomposition> sigma;
  std::shared_ptr<const BlockOperator> a;
  std::shared_ptr<const BlockOperator> b;

  bool sigma_is_rho() const { return rho == sigma || *rho == *sigma; }
  bool b_is_a() const { return a == b || *a == *b; }
};

class AtomicMeasure2D {
 public:
  AtomicMeasure2D(MeasureContext context, std::vector<Atom2D> atoms);

  const std::vector<Atom2D>& atoms() const noexcept { return atoms_; }
  const MeasureContext& context() const noexcept { return context_; }
  std::size_t rows() const noexcept { return context_.rho->size(); }
  std::size_t cols() const noexcept { return context_.sigma->size(); }
  // Atom for projection pair (i, j); atoms are stored row-major.
  const Atom2D& at(std::size_t i, std::size_t j) const {
    return atoms_.at(i * cols() + j);
  }

  Complex total_mass() const;
  // sum |w|
  double variation() const;

 private:
  MeasureContext context_;
  std::vector<Atom2D> atoms_;
};

// Finite union of half-open intervals [lo, hi).
class IntervalSet {
 public:
  struct Interval {
    double lo;
    double hi;
  };

  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> intervals);

  static IntervalSet empty() { return {}; }
  static IntervalSet real_line();
  // [center - halfwidth, center + halfwidth)
  static IntervalSet around(double center, double halfwidth);

  bool contains(double v) const;
  const std::vector<Interval>& intervals() const noexcept { return intervals_; }

 private:
  std::vector<Interval> intervals_;
};

AtomicMeasure2D build_measure(const SpectralDecomposition& dec_rho,
                              const SpectralDecomposition& dec_sigma,
                              const BlockOperator& a, const BlockOperator& b);

Complex rectangle_mass(const AtomicMeasure2D& m, const IntervalSet& omega1,
                       const IntervalSet& omega2);

// (1/4) sum_{k=1..4} (-i)^k mu_{a + i^k b, a + i^k b}
AtomicMeasure2D polarized_measure(const SpectralDecomposition& dec_rho,
                                  const SpectralDecomposition& dec_sigma,
                                  const BlockOperator& a, const BlockOperator& b);

// Max atomwise |w_polarized - w_direct|.
double polarization_defect(const AtomicMeasure2D& direct,
                           const AtomicMeasure2D& polarized);

struct PositivityReport {
  double max_abs_imag = 0.0;
  double min_real = 0.0;
  bool passed = false;
};

// Requires a diagonal measure (sigma = rho, b = a).
PositivityReport check_positivity(const AtomicMeasure2D& m, const Tolerances& tol = {});

// max_ij |Re mu_ab - Re mu_ba| for Hermitian a, b.
double real_part_symmetry_defect(const SpectralDecomposition& dec_rho,
                                 const SpectralDecomposition& dec_sigma,
                                 const BlockOperator& a, const BlockOperator& b,
                                 const Tolerances& tol = {});

using ScalarFunction = std::function<Complex(double)>;

// sum_ij g(x_i) h(y_j) w_ij, in atom order.
Complex integrate(const AtomicMeasure2D& m, const ScalarFunction& g,
                  const ScalarFunction& h);

// tau(g(rho) a* h(sigma) b) computed from operators, for comparison with
// integrate().
Complex functional_trace(const SpectralDecomposition& dec_rho,
                         const SpectralDecomposition& dec_sigma,
                         const BlockOperator& a, const BlockOperator& b,
                         const ScalarFunction& g, const ScalarFunction& h);

struct PairingResult {
  Complex trace_side;
  Complex measure_side;
  double discrepancy = 0.0;
  double tolerance = 0.0;
};

// Both sides of tau(rho^beta a* rho^(1-beta) b) = iint x^beta y^(1-beta) dmu_ab.
PairingResult wyd_pairing_sides(const DensityOperator& rho, double beta,
                                const BlockOperator& a, const BlockOperator& b,
                                const Tolerances& tol = {});

// Trace-side value; unless `cross_check` is false, raises an
// internal-consistency error when the measure side disagrees.
Complex wyd_pairing(const DensityOperator& rho, double beta, const BlockOperator& a,
                    const BlockOperator& b, const Tolerances& tol = {},
                    bool cross_check = true);

}  // namespace wyd
