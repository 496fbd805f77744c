#pragma once

// Finite-dimensional trace algebras: direct sums of complex matrix blocks
// with a positively weighted trace, and the Hermitian functional calculus on
// them.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "wyd/tolerances.hpp"

namespace wyd {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

struct Block {
  int dim = 1;
  double weight = 1.0;

  bool operator==(const Block&) const = default;
};

class TraceAlgebra {
 public:
  explicit TraceAlgebra(std::vector<Block> blocks);

  static std::shared_ptr<const TraceAlgebra> make(std::vector<Block> blocks);

  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  int dim(std::size_t k) const { return blocks_.at(k).dim; }
  double weight(std::size_t k) const { return blocks_.at(k).weight; }
  int total_dim() const noexcept { return total_dim_; }
  double min_weight() const noexcept;

  bool operator==(const TraceAlgebra& other) const {
    return blocks_ == other.blocks_;
  }

 private:
  std::vector<Block> blocks_;
  int total_dim_ = 0;
};

using AlgebraPtr = std::shared_ptr<const TraceAlgebra>;

// An element of a TraceAlgebra: one square complex matrix per block.
class BlockOperator {
 public:
  BlockOperator(AlgebraPtr algebra, std::vector<Matrix> blocks);

  static BlockOperator zero(AlgebraPtr algebra);
  static BlockOperator identity(AlgebraPtr algebra);
  // Block-diagonal operator with the given diagonal entries, listed block by
  // block in order.
  static BlockOperator diagonal(AlgebraPtr algebra,
                                const std::vector<Complex>& entries);

  const AlgebraPtr& algebra() const noexcept { return algebra_; }
  const std::vector<Matrix>& blocks() const noexcept { return blocks_; }
  const Matrix& block(std::size_t k) const { return blocks_.at(k); }

  BlockOperator adjoint() const;
  // Largest entry magnitude.
  double max_abs() const;
  // max |(x - x*)_ij|
  double hermiticity_defect() const;
  bool is_hermitian(const Tolerances& tol = {}) const;

  // Dense block-diagonal embedding of size total_dim.
  Matrix to_dense() const;

  BlockOperator& operator+=(const BlockOperator& rhs);
  BlockOperator& operator-=(const BlockOperator& rhs);
  BlockOperator& operator*=(Complex s);

  friend BlockOperator operator+(BlockOperator lhs, const BlockOperator& rhs) {
    return lhs += rhs;
  }
  friend BlockOperator operator-(BlockOperator lhs, const BlockOperator& rhs) {
    return lhs -= rhs;
  }
  friend BlockOperator operator*(Complex s, BlockOperator x) { return x *= s; }
  friend BlockOperator operator*(const BlockOperator& lhs,
                                 const BlockOperator& rhs);

  // Exact (bitwise) equality of algebra and entries.
  bool operator==(const BlockOperator& other) const;

 private:
  AlgebraPtr algebra_;
  std::vector<Matrix> blocks_;
};

// Throws an input error unless both operands live in equal algebras.
void require_same_algebra(const BlockOperator& x, const BlockOperator& y);

// Weighted trace: sum_k weight_k * Tr(x_k).
Complex trace(const BlockOperator& x);
// Checks that x belongs to alg before tracing.
Complex trace(const TraceAlgebra& alg, const BlockOperator& x);

// sqrt(tau(x* x))
double l2_norm(const BlockOperator& x);

// One spectral projection: block index plus an orthonormal basis of its
// range inside that block. Rank 1 straight from the eigensolver; higher rank
// only after merge().
struct SpectralComponent {
  double eigenvalue = 0.0;
  std::size_t block = 0;
  Matrix basis;  // dim_block x rank, orthonormal columns
};

class SpectralDecomposition {
 public:
  SpectralDecomposition(AlgebraPtr algebra,
                        std::vector<SpectralComponent> components);

  const AlgebraPtr& algebra() const noexcept { return algebra_; }
  std::size_t size() const noexcept { return components_.size(); }
  const std::vector<SpectralComponent>& components() const noexcept {
    return components_;
  }
  const SpectralComponent& component(std::size_t i) const {
    return components_.at(i);
  }
  std::vector<double> eigenvalues() const;

  BlockOperator projection(std::size_t i) const;
  std::vector<BlockOperator> projections() const;

  // Projection onto the span of all components whose eigenvalue satisfies
  // the predicate; e_rho(Omega) for Omega given as an indicator.
  BlockOperator spectral_projection(
      const std::function<bool(double)>& in_set) const;

  // Components within the same block whose eigenvalues differ by at most
  // `cluster` from their predecessor are merged into one higher-rank
  // projection carrying the mean eigenvalue.
  SpectralDecomposition merged(double cluster) const;

  // Copy with each eigenvalue replaced by f(eigenvalue); projections kept.
  SpectralDecomposition with_eigenvalues(
      const std::function<double(double)>& f) const;

  // Diagnostics used by the invariant tests.
  double resolution_defect() const;      // |sum P_i - I|_max
  double orthogonality_defect() const;   // max_{i != j} |P_i P_j|_max
  double reconstruction_defect(const BlockOperator& x) const;

  bool operator==(const SpectralDecomposition& other) const;

 private:
  AlgebraPtr algebra_;
  std::vector<SpectralComponent> components_;
};

// Hermitian eigendecomposition with eigenvalues ascending across all blocks.
// Ties keep block order, then solver order.
SpectralDecomposition eigendecompose(const BlockOperator& x,
                                     const Tolerances& tol = {});

// sum_i f(lambda_i) P_i. Raises a domain error if f is not finite on the
// spectrum.
BlockOperator functional_calculus(const SpectralDecomposition& dec,
                                  const std::function<double(double)>& f);

// t^beta on [0, inf) with 0^beta := 0.
double power_or_zero(double t, double beta);

// A validated state: Hermitian, nonnegative spectrum after clamping,
// unit weighted trace.
class DensityOperator {
 public:
  const BlockOperator& op() const noexcept { return op_; }
  const SpectralDecomposition& decomposition() const noexcept { return dec_; }
  const AlgebraPtr& algebra() const noexcept { return op_.algebra(); }

 private:
  DensityOperator(BlockOperator op, SpectralDecomposition dec)
      : op_(std::move(op)), dec_(std::move(dec)) {}

  friend DensityOperator validate_density(const BlockOperator&,
                                          const Tolerances&);

  BlockOperator op_;
  SpectralDecomposition dec_;
};

DensityOperator validate_density(const TraceAlgebra& alg,
                                 const BlockOperator& x,
                                 const Tolerances& tol = {});
DensityOperator validate_density(const BlockOperator& x,
                                 const Tolerances& tol = {});

// rho^beta for beta in the open unit interval.
BlockOperator fractional_power(const DensityOperator& rho, double beta);

void require_open_unit_interval(double beta);

}  // namespace wyd
