#include "wyd/spectral_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
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

void require_same_algebra(const SpectralDecomposition& dec, const BlockOperator& x) {
  if (!(*dec.algebra() == *x.algebra())) {
    fail(ErrorKind::Input, "decomposition and operand belong to different algebras");
  }
}

MeasureContext make_context(const SpectralDecomposition& dec_rho,
                            const SpectralDecomposition& dec_sigma,
                            const BlockOperator& a, const BlockOperator& b) {
  MeasureContext ctx;
  ctx.algebra = dec_rho.algebra();
  ctx.rho = std::make_shared<const SpectralDecomposition>(dec_rho);
  ctx.sigma = &dec_sigma == &dec_rho ? ctx.rho
                                     : std::make_shared<const SpectralDecomposition>(dec_sigma);
  ctx.a = std::make_shared<const BlockOperator>(a);
  ctx.b = &a == &b ? ctx.a : std::make_shared<const BlockOperator>(b);
  return ctx;
}

Complex checked(const ScalarFunction& f, double v) {
  const Complex out = f(v);
  if (!std::isfinite(out.real()) || !std::isfinite(out.imag())) {
    fail(ErrorKind::Domain, "function is not finite at atom coordinate " + fmt(v));
  }
  return out;
}

}  // namespace

AtomicMeasure2D::AtomicMeasure2D(MeasureContext context, std::vector<Atom2D> atoms)
    : context_(std::move(context)), atoms_(std::move(atoms)) {
  if (atoms_.size() != rows() * cols()) {
    fail(ErrorKind::Input, "atom list does not cover every projection pair");
  }
}

Complex AtomicMeasure2D::total_mass() const {
  Complex sum = 0.0;
  for (const auto& atom : atoms_) sum += atom.w;
  return sum;
}

double AtomicMeasure2D::variation() const {
  double sum = 0.0;
  for (const auto& atom : atoms_) sum += std::abs(atom.w);
  return sum;
}

IntervalSet::IntervalSet(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  for (const auto& iv : intervals_) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi) || iv.lo > iv.hi) {
      fail(ErrorKind::Input, "malformed interval [" + fmt(iv.lo) + ", " + fmt(iv.hi) + ")");
    }
  }
}

IntervalSet IntervalSet::real_line() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return IntervalSet({{-inf, inf}});
}

IntervalSet IntervalSet::around(double center, double halfwidth) {
  return IntervalSet({{center - halfwidth, center + halfwidth}});
}

bool IntervalSet::contains(double v) const {
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [v](const Interval& iv) { return iv.lo <= v && v < iv.hi; });
}

AtomicMeasure2D build_measure(const SpectralDecomposition& dec_rho,
                              const SpectralDecomposition& dec_sigma,
                              const BlockOperator& a, const BlockOperator& b) {
  require_same_algebra(dec_rho, a);
  require_same_algebra(dec_sigma, a);
  wyd::require_same_algebra(a, b);

  const auto& alg = *a.algebra();
  // a V_i and b V_i for every row projection.
  std::vector<Matrix> av, bv;
  av.reserve(dec_rho.size());
  bv.reserve(dec_rho.size());
  for (const auto& c : dec_rho.components()) {
    av.push_back(a.block(c.block) * c.basis);
    bv.push_back(b.block(c.block) * c.basis);
  }

  std::vector<Atom2D> atoms;
  atoms.reserve(dec_rho.size() * dec_sigma.size());
  for (std::size_t i = 0; i < dec_rho.size(); ++i) {
    const auto& p = dec_rho.component(i);
    for (std::size_t j = 0; j < dec_sigma.size(); ++j) {
      const auto& q = dec_sigma.component(j);
      Complex w = 0.0;
      // tau(V V* a* U U* b) = weight * sum conj(U* a V) .* (U* b V)
      if (p.block == q.block) {
        const Matrix x = q.basis.adjoint() * av[i];
        const Matrix y = q.basis.adjoint() * bv[i];
        w = alg.weight(p.block) * x.conjugate().cwiseProduct(y).sum();
      }
      atoms.push_back({p.eigenvalue, q.eigenvalue, w, i, j});
    }
  }
  return {make_context(dec_rho, dec_sigma, a, b), std::move(atoms)};
}

Complex rectangle_mass(const AtomicMeasure2D& m, const IntervalSet& omega1,
                       const IntervalSet& omega2) {
  Complex sum = 0.0;
  for (const auto& atom : m.atoms()) {
    if (omega1.contains(atom.x) && omega2.contains(atom.y)) sum += atom.w;
  }
  return sum;
}

AtomicMeasure2D polarized_measure(const SpectralDecomposition& dec_rho,
                                  const SpectralDecomposition& dec_sigma,
                                  const BlockOperator& a, const BlockOperator& b) {
  wyd::require_same_algebra(a, b);
  const Complex i_unit(0.0, 1.0);
  std::vector<Atom2D> atoms;
  Complex ik = 1.0;        // i^k
  Complex minus_ik = 1.0;  // (-i)^k
  for (int k = 1; k <= 4; ++k) {
    ik *= i_unit;
    minus_ik *= -i_unit;
    const BlockOperator c = a + ik * b;
    const auto diag = build_measure(dec_rho, dec_sigma, c, c);
    if (atoms.empty()) {
      atoms = diag.atoms();
      for (auto& atom : atoms) atom.w = 0.0;
    }
    for (std::size_t n = 0; n < atoms.size(); ++n) {
      atoms[n].w += 0.25 * minus_ik * diag.atoms()[n].w;
    }
  }
  return {make_context(dec_rho, dec_sigma, a, b), std::move(atoms)};
}

double polarization_defect(const AtomicMeasure2D& direct,
                           const AtomicMeasure2D& polarized) {
  if (direct.atoms().size() != polarized.atoms().size()) {
    fail(ErrorKind::Input, "measures have different atom counts");
  }
  double worst = 0.0;
  for (std::size_t n = 0; n < direct.atoms().size(); ++n) {
    worst = std::max(worst, std::abs(direct.atoms()[n].w - polarized.atoms()[n].w));
  }
  return worst;
}

PositivityReport check_positivity(const AtomicMeasure2D& m, const Tolerances& tol) {
  const auto& ctx = m.context();
  if (!ctx.sigma_is_rho() || !ctx.b_is_a()) {
    fail(ErrorKind::Input,
         "positivity holds only for diagonal measures (sigma = rho and b = a)");
  }
  PositivityReport r;
  r.min_real = std::numeric_limits<double>::infinity();
  for (const auto& atom : m.atoms()) {
    r.max_abs_imag = std::max(r.max_abs_imag, std::abs(atom.w.imag()));
    r.min_real = std::min(r.min_real, atom.w.real());
  }
  r.passed = r.max_abs_imag <= tol.lin && r.min_real >= -tol.lin;
  return r;
}

double real_part_symmetry_defect(const SpectralDecomposition& dec_rho,
                                 const SpectralDecomposition& dec_sigma,
                                 const BlockOperator& a, const BlockOperator& b,
                                 const Tolerances& tol) {
  if (!a.is_hermitian(tol) || !b.is_hermitian(tol)) {
    fail(ErrorKind::Input, "real-part symmetry requires Hermitian operands");
  }
  const auto ab = build_measure(dec_rho, dec_sigma, a, b);
  const auto ba = build_measure(dec_rho, dec_sigma, b, a);
  double worst = 0.0;
  for (std::size_t n = 0; n < ab.atoms().size(); ++n) {
    worst = std::max(worst, std::abs(ab.atoms()[n].w.real() - ba.atoms()[n].w.real()));
  }
  return worst;
}

Complex integrate(const AtomicMeasure2D& m, const ScalarFunction& g,
                  const ScalarFunction& h) {
  // Rows and columns share coordinates, so evaluate each once.
  std::vector<Complex> gx(m.rows()), hy(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    gx[i] = checked(g, m.context().rho->component(i).eigenvalue);
  }
  for (std::size_t j = 0; j < m.cols(); ++j) {
    hy[j] = checked(h, m.context().sigma->component(j).eigenvalue);
  }
  Complex sum = 0.0;
  for (const auto& atom : m.atoms()) sum += gx[atom.i] * hy[atom.j] * atom.w;
  return sum;
}

namespace {

// g(rho) with complex-valued g, built from projections.
BlockOperator complex_calculus(const SpectralDecomposition& dec, const ScalarFunction& f) {
  std::vector<Matrix> blocks = BlockOperator::zero(dec.algebra()).blocks();
  for (const auto& c : dec.components()) {
    blocks[c.block] += checked(f, c.eigenvalue) * (c.basis * c.basis.adjoint());
  }
  return {dec.algebra(), std::move(blocks)};
}

}  // namespace

Complex functional_trace(const SpectralDecomposition& dec_rho,
                         const SpectralDecomposition& dec_sigma,
                         const BlockOperator& a, const BlockOperator& b,
                         const ScalarFunction& g, const ScalarFunction& h) {
  require_same_algebra(dec_rho, a);
  require_same_algebra(dec_sigma, b);
  return trace(complex_calculus(dec_rho, g) * a.adjoint() *
               complex_calculus(dec_sigma, h) * b);
}

PairingResult wyd_pairing_sides(const DensityOperator& rho, double beta,
                                const BlockOperator& a, const BlockOperator& b,
                                const Tolerances& tol) {
  require_open_unit_interval(beta);
  const auto& dec = rho.decomposition();
  PairingResult r;
  r.trace_side = trace(fractional_power(rho, beta) * a.adjoint() *
                       fractional_power(rho, 1.0 - beta) * b);

  const auto m = build_measure(dec, dec, a, b);
  auto x_pow = [beta](double t) { return Complex(power_or_zero(t, beta)); };
  auto y_pow = [beta](double t) { return Complex(power_or_zero(t, 1.0 - beta)); };
  r.measure_side = integrate(m, x_pow, y_pow);
  r.discrepancy = std::abs(r.trace_side - r.measure_side);

  double top = 0.0;
  for (double v : dec.eigenvalues()) top = std::max(top, v);
  r.tolerance = tol.lin * std::max(1.0, m.variation() * top);
  return r;
}

Complex wyd_pairing(const DensityOperator& rho, double beta, const BlockOperator& a,
                    const BlockOperator& b, const Tolerances& tol, bool cross_check) {
  if (!cross_check) {
    require_open_unit_interval(beta);
    return trace(fractional_power(rho, beta) * a.adjoint() *
                 fractional_power(rho, 1.0 - beta) * b);
  }
  const auto r = wyd_pairing_sides(rho, beta, a, b, tol);
  if (r.discrepancy > r.tolerance) {
    fail(ErrorKind::InternalConsistency,
         "trace side and measure side of the WYD pairing disagree by " +
             fmt(r.discrepancy) + " (tolerance " + fmt(r.tolerance) + ")");
  }
  return r.trace_side;
}

}  // namespace wyd
