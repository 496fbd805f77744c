#include "wyd/trace_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
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

bool same_algebra(const AlgebraPtr& x, const AlgebraPtr& y) {
  return x == y || (x && y && *x == *y);
}

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

}  // namespace

TraceAlgebra::TraceAlgebra(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) fail(ErrorKind::Input, "trace algebra needs at least one block");
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const auto& b = blocks_[k];
    if (b.dim < 1) {
      fail(ErrorKind::Input, "block " + std::to_string(k) + " has dimension " +
                                 std::to_string(b.dim) + "; must be >= 1");
    }
    if (!(b.weight > 0.0) || !std::isfinite(b.weight)) {
      fail(ErrorKind::Input, "block " + std::to_string(k) + " has weight " +
                                 fmt(b.weight) + "; must be finite and > 0");
    }
    total_dim_ += b.dim;
  }
}

std::shared_ptr<const TraceAlgebra> TraceAlgebra::make(std::vector<Block> blocks) {
  return std::make_shared<const TraceAlgebra>(std::move(blocks));
}

double TraceAlgebra::min_weight() const noexcept {
  double w = blocks_.front().weight;
  for (const auto& b : blocks_) w = std::min(w, b.weight);
  return w;
}

// ---------------------------------------------------------------------------

BlockOperator::BlockOperator(AlgebraPtr algebra, std::vector<Matrix> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
  if (!algebra_) fail(ErrorKind::Input, "operator without an algebra");
  if (blocks_.size() != algebra_->block_count()) {
    fail(ErrorKind::Input, "operator has " + std::to_string(blocks_.size()) +
                               " blocks, algebra has " +
                               std::to_string(algebra_->block_count()));
  }
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const int d = algebra_->dim(k);
    if (blocks_[k].rows() != d || blocks_[k].cols() != d) {
      fail(ErrorKind::Input, "block " + std::to_string(k) + " is " +
                                 std::to_string(blocks_[k].rows()) + "x" +
                                 std::to_string(blocks_[k].cols()) + ", expected " +
                                 std::to_string(d) + "x" + std::to_string(d));
    }
  }
}

BlockOperator BlockOperator::zero(AlgebraPtr algebra) {
  std::vector<Matrix> blocks;
  for (const auto& b : algebra->blocks()) blocks.push_back(Matrix::Zero(b.dim, b.dim));
  return {std::move(algebra), std::move(blocks)};
}

BlockOperator BlockOperator::identity(AlgebraPtr algebra) {
  std::vector<Matrix> blocks;
  for (const auto& b : algebra->blocks()) {
    blocks.push_back(Matrix::Identity(b.dim, b.dim));
  }
  return {std::move(algebra), std::move(blocks)};
}

BlockOperator BlockOperator::diagonal(AlgebraPtr algebra,
                                      const std::vector<Complex>& entries) {
  if (static_cast<int>(entries.size()) != algebra->total_dim()) {
    fail(ErrorKind::Input, "diagonal needs " + std::to_string(algebra->total_dim()) +
                               " entries, got " + std::to_string(entries.size()));
  }
  std::vector<Matrix> blocks;
  std::size_t offset = 0;
  for (const auto& b : algebra->blocks()) {
    Matrix m = Matrix::Zero(b.dim, b.dim);
    for (int i = 0; i < b.dim; ++i) m(i, i) = entries[offset + i];
    offset += b.dim;
    blocks.push_back(std::move(m));
  }
  return {std::move(algebra), std::move(blocks)};
}

BlockOperator BlockOperator::adjoint() const {
  std::vector<Matrix> out;
  out.reserve(blocks_.size());
  for (const auto& m : blocks_) out.push_back(m.adjoint());
  return {algebra_, std::move(out)};
}

double BlockOperator::max_abs() const {
  double v = 0.0;
  for (const auto& m : blocks_) {
    if (m.size() > 0) v = std::max(v, m.cwiseAbs().maxCoeff());
  }
  return v;
}

double BlockOperator::hermiticity_defect() const {
  double v = 0.0;
  for (const auto& m : blocks_) {
    v = std::max(v, (m - m.adjoint()).cwiseAbs().maxCoeff());
  }
  return v;
}

bool BlockOperator::is_hermitian(const Tolerances& tol) const {
  return hermiticity_defect() <= tol.herm * std::max(1.0, max_abs());
}

Matrix BlockOperator::to_dense() const {
  const int n = algebra_->total_dim();
  Matrix out = Matrix::Zero(n, n);
  int offset = 0;
  for (const auto& m : blocks_) {
    out.block(offset, offset, m.rows(), m.cols()) = m;
    offset += static_cast<int>(m.rows());
  }
  return out;
}

BlockOperator& BlockOperator::operator+=(const BlockOperator& rhs) {
  require_same_algebra(*this, rhs);
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += rhs.blocks_[k];
  return *this;
}

BlockOperator& BlockOperator::operator-=(const BlockOperator& rhs) {
  require_same_algebra(*this, rhs);
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] -= rhs.blocks_[k];
  return *this;
}

BlockOperator& BlockOperator::operator*=(Complex s) {
  for (auto& m : blocks_) m *= s;
  return *this;
}

BlockOperator operator*(const BlockOperator& lhs, const BlockOperator& rhs) {
  require_same_algebra(lhs, rhs);
  std::vector<Matrix> out;
  out.reserve(lhs.blocks_.size());
  for (std::size_t k = 0; k < lhs.blocks_.size(); ++k) {
    out.push_back(lhs.blocks_[k] * rhs.blocks_[k]);
  }
  return {lhs.algebra_, std::move(out)};
}

bool BlockOperator::operator==(const BlockOperator& other) const {
  if (!same_algebra(algebra_, other.algebra_)) return false;
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    if (blocks_[k] != other.blocks_[k]) return false;
  }
  return true;
}

void require_same_algebra(const BlockOperator& x, const BlockOperator& y) {
  if (!same_algebra(x.algebra(), y.algebra())) {
    fail(ErrorKind::Input, "operands belong to different trace algebras");
  }
}

Complex trace(const BlockOperator& x) {
  Complex sum = 0.0;
  const auto& alg = *x.algebra();
  for (std::size_t k = 0; k < alg.block_count(); ++k) {
    sum += alg.weight(k) * x.block(k).trace();
  }
  return sum;
}

Complex trace(const TraceAlgebra& alg, const BlockOperator& x) {
  if (!(alg == *x.algebra())) {
    fail(ErrorKind::Input, "operator does not belong to this trace algebra");
  }
  return trace(x);
}

double l2_norm(const BlockOperator& x) {
  double sum = 0.0;
  const auto& alg = *x.algebra();
  for (std::size_t k = 0; k < alg.block_count(); ++k) {
    sum += alg.weight(k) * x.block(k).squaredNorm();
  }
  return std::sqrt(sum);
}

// ---------------------------------------------------------------------------

SpectralDecomposition::SpectralDecomposition(AlgebraPtr algebra,
                                             std::vector<SpectralComponent> components)
    : algebra_(std::move(algebra)), components_(std::move(components)) {
  for (const auto& c : components_) {
    if (c.block >= algebra_->block_count() ||
        c.basis.rows() != algebra_->dim(c.block) || c.basis.cols() < 1) {
      fail(ErrorKind::Input, "spectral component does not fit the algebra");
    }
  }
}

std::vector<double> SpectralDecomposition::eigenvalues() const {
  std::vector<double> out;
  out.reserve(components_.size());
  for (const auto& c : components_) out.push_back(c.eigenvalue);
  return out;
}

BlockOperator SpectralDecomposition::projection(std::size_t i) const {
  const auto& c = components_.at(i);
  auto p = BlockOperator::zero(algebra_);
  std::vector<Matrix> blocks = p.blocks();
  blocks[c.block] = c.basis * c.basis.adjoint();
  return {algebra_, std::move(blocks)};
}

std::vector<BlockOperator> SpectralDecomposition::projections() const {
  std::vector<BlockOperator> out;
  out.reserve(components_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) out.push_back(projection(i));
  return out;
}

BlockOperator SpectralDecomposition::spectral_projection(
    const std::function<bool(double)>& in_set) const {
  std::vector<Matrix> blocks = BlockOperator::zero(algebra_).blocks();
  for (const auto& c : components_) {
    if (in_set(c.eigenvalue)) blocks[c.block] += c.basis * c.basis.adjoint();
  }
  return {algebra_, std::move(blocks)};
}

SpectralDecomposition SpectralDecomposition::merged(double cluster) const {
  std::vector<SpectralComponent> out;
  std::vector<std::size_t> counts;
  for (std::size_t k = 0; k < algebra_->block_count(); ++k) {
    SpectralComponent* current = nullptr;
    std::size_t count = 0;
    double last = 0.0;
    for (const auto& c : components_) {
      if (c.block != k) continue;
      if (current != nullptr && std::abs(c.eigenvalue - last) <= cluster) {
        Matrix basis(current->basis.rows(), current->basis.cols() + c.basis.cols());
        basis << current->basis, c.basis;
        current->basis = std::move(basis);
        current->eigenvalue += c.eigenvalue;
        ++count;
      } else {
        if (current != nullptr) {
          current->eigenvalue /= static_cast<double>(count);
        }
        out.push_back(c);
        current = &out.back();
        count = 1;
      }
      last = c.eigenvalue;
    }
    if (current != nullptr) current->eigenvalue /= static_cast<double>(count);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.eigenvalue < b.eigenvalue;
  });
  return {algebra_, std::move(out)};
}

SpectralDecomposition SpectralDecomposition::with_eigenvalues(
    const std::function<double(double)>& f) const {
  auto out = components_;
  for (auto& c : out) c.eigenvalue = f(c.eigenvalue);
  return {algebra_, std::move(out)};
}

double SpectralDecomposition::resolution_defect() const {
  auto sum = BlockOperator::zero(algebra_);
  for (std::size_t i = 0; i < size(); ++i) sum += projection(i);
  return (sum - BlockOperator::identity(algebra_)).max_abs();
}

double SpectralDecomposition::orthogonality_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      if (i == j || components_[i].block != components_[j].block) continue;
      worst = std::max(worst, (projection(i) * projection(j)).max_abs());
    }
  }
  return worst;
}

double SpectralDecomposition::reconstruction_defect(const BlockOperator& x) const {
  auto sum = functional_calculus(*this, [](double t) { return t; });
  return (sum - x).max_abs();
}

bool SpectralDecomposition::operator==(const SpectralDecomposition& other) const {
  if (!same_algebra(algebra_, other.algebra_) || size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    const auto& a = components_[i];
    const auto& b = other.components_[i];
    if (a.eigenvalue != b.eigenvalue || a.block != b.block || a.basis != b.basis) {
      return false;
    }
  }
  return true;
}

SpectralDecomposition eigendecompose(const BlockOperator& x, const Tolerances& tol) {
  const double scale = std::max(1.0, x.max_abs());
  const double defect = x.hermiticity_defect();
  if (defect > tol.herm * scale) {
    fail(ErrorKind::NotHermitian,
         "operator is not Hermitian: defect " + fmt(defect) + " exceeds " +
             fmt(tol.herm * scale));
  }

  const auto& alg = x.algebra();
  std::vector<SpectralComponent> components;
  components.reserve(alg->total_dim());
  for (std::size_t k = 0; k < alg->block_count(); ++k) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(x.block(k)));
    if (solver.info() != Eigen::Success) {
      fail(ErrorKind::Numerical,
           "eigensolver failed to converge on block " + std::to_string(k));
    }
    const auto& values = solver.eigenvalues();
    const auto& vectors = solver.eigenvectors();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      components.push_back({values(i), k, vectors.col(i)});
    }
  }
  std::stable_sort(components.begin(), components.end(),
                   [](const auto& a, const auto& b) { return a.eigenvalue < b.eigenvalue; });

  SpectralDecomposition dec(alg, std::move(components));
  const double residual = dec.reconstruction_defect(x);
  if (residual > tol.lin * scale) {
    fail(ErrorKind::Numerical, "eigendecomposition residual " + fmt(residual) +
                                   " exceeds " + fmt(tol.lin * scale));
  }
  return dec;
}

BlockOperator functional_calculus(const SpectralDecomposition& dec,
                                  const std::function<double(double)>& f) {
  std::vector<Matrix> blocks = BlockOperator::zero(dec.algebra()).blocks();
  for (const auto& c : dec.components()) {
    const double v = f(c.eigenvalue);
    if (!std::isfinite(v)) {
      fail(ErrorKind::Domain, "function is not finite at eigenvalue " + fmt(c.eigenvalue));
    }
    blocks[c.block] += v * (c.basis * c.basis.adjoint());
  }
  return {dec.algebra(), std::move(blocks)};
}

double power_or_zero(double t, double beta) {
  return t == 0.0 ? 0.0 : std::pow(t, beta);
}

void require_open_unit_interval(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    fail(ErrorKind::Input, "beta must lie in open interval (0,1), got " + fmt(beta));
  }
}

DensityOperator validate_density(const TraceAlgebra& alg, const BlockOperator& x,
                                 const Tolerances& tol) {
  if (!(alg == *x.algebra())) {
    fail(ErrorKind::Input, "density does not belong to this trace algebra");
  }
  return validate_density(x, tol);
}

DensityOperator validate_density(const BlockOperator& x, const Tolerances& tol) {
  auto dec = eigendecompose(x, tol);
  const double eps_psd = tol.psd * std::max(1.0, x.max_abs());
  const auto values = dec.eigenvalues();
  const double lowest = values.front();
  if (lowest < -eps_psd) {
    fail(ErrorKind::NotPositive, "density has negative eigenvalue " + fmt(lowest) +
                                     " below -" + fmt(eps_psd));
  }
  // The window is symmetric so that a numerically zero eigenvalue maps to 0
  // whichever side of zero the solver lands on.
  dec = dec.with_eigenvalues([eps_psd](double t) { return t <= eps_psd ? 0.0 : t; });

  std::vector<Matrix> sym;
  for (const auto& m : x.blocks()) sym.push_back(hermitian_part(m));
  BlockOperator op(x.algebra(), std::move(sym));

  const double tr = trace(op).real();
  if (std::abs(tr - 1.0) > tol.norm) {
    fail(ErrorKind::NotNormalized, "density has weighted trace " + fmt(tr) +
                                       ", expected 1 within " + fmt(tol.norm));
  }
  return {std::move(op), std::move(dec)};
}

BlockOperator fractional_power(const DensityOperator& rho, double beta) {
  require_open_unit_interval(beta);
  return functional_calculus(rho.decomposition(),
                             [beta](double t) { return power_or_zero(t, beta); });
}

}  // namespace wyd
