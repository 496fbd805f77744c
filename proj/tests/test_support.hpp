#pragma once

// Random operands and independent oracles for the test suites. The oracles
// work on the dense block-diagonal embedding with an explicit weight matrix
// and never call the library's trace, calculus or measure code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "wyd/harness/rng.hpp"
#include "wyd/trace_algebra.hpp"

namespace wyd::testing {

using harness::CounterRng;

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline Matrix pauli_y() {
  const Complex i(0.0, 1.0);
  Matrix m(2, 2);
  m << 0.0, -i, i, 0.0;
  return m;
}

inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

inline AlgebraPtr qubit_algebra() { return TraceAlgebra::make({{2, 1.0}}); }

inline BlockOperator single(const AlgebraPtr& alg, const Matrix& m) {
  return BlockOperator(alg, {m});
}

inline Matrix gaussian_matrix(CounterRng& rng, int dim) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  return g;
}

// 1..max_blocks blocks, total dimension in [2, max_total], weights in
// [0.5, 2].
inline AlgebraPtr random_algebra(CounterRng& rng, int max_total = 8, int max_blocks = 3) {
  for (;;) {
    const int count = rng.uniform_int(1, max_blocks);
    std::vector<Block> blocks(count);
    int total = 0;
    for (auto& b : blocks) {
      b.dim = rng.uniform_int(1, max_total);
      b.weight = rng.uniform(0.5, 2.0);
      total += b.dim;
    }
    if (total >= 2 && total <= max_total) return TraceAlgebra::make(blocks);
  }
}

inline BlockOperator random_operator(CounterRng& rng, const AlgebraPtr& alg) {
  std::vector<Matrix> blocks;
  for (const auto& b : alg->blocks()) blocks.push_back(gaussian_matrix(rng, b.dim));
  return {alg, std::move(blocks)};
}

inline BlockOperator random_hermitian(CounterRng& rng, const AlgebraPtr& alg) {
  std::vector<Matrix> blocks;
  for (const auto& b : alg->blocks()) {
    Matrix g = gaussian_matrix(rng, b.dim);
    blocks.push_back((g + g.adjoint()) * 0.5);
  }
  return {alg, std::move(blocks)};
}

// Dense embedding, written independently of BlockOperator::to_dense.
inline Matrix embed(const BlockOperator& x) {
  const auto& alg = *x.algebra();
  Matrix out = Matrix::Zero(alg.total_dim(), alg.total_dim());
  int offset = 0;
  for (std::size_t k = 0; k < alg.block_count(); ++k) {
    for (int i = 0; i < alg.dim(k); ++i) {
      for (int j = 0; j < alg.dim(k); ++j) out(offset + i, offset + j) = x.block(k)(i, j);
    }
    offset += alg.dim(k);
  }
  return out;
}

inline Matrix weight_matrix(const TraceAlgebra& alg) {
  Matrix w = Matrix::Zero(alg.total_dim(), alg.total_dim());
  int offset = 0;
  for (const auto& b : alg.blocks()) {
    for (int i = 0; i < b.dim; ++i) w(offset + i, offset + i) = b.weight;
    offset += b.dim;
  }
  return w;
}

inline Complex oracle_trace(const TraceAlgebra& alg, const Matrix& dense) {
  return (weight_matrix(alg) * dense).trace();
}

// t^beta on the dense embedding via a full (not block-wise) eigensolve.
// Eigenvalues within 1e-12 * max(1, |rho|_max) of zero count as zero.
inline Matrix oracle_power(const Matrix& dense, double beta) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((dense + dense.adjoint()) * 0.5);
  Eigen::VectorXd v = es.eigenvalues();
  const double window = 1e-12 * std::max(1.0, dense.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = v(i) <= window ? 0.0 : std::pow(v(i), beta);
  }
  return es.eigenvectors() * v.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

// Random density with unit weighted trace; with `zero_modes` > 0 the
// smallest eigenvalues of W are set to zero first.
inline BlockOperator random_density(CounterRng& rng, const AlgebraPtr& alg,
                                    int zero_modes = 0) {
  std::vector<Matrix> blocks;
  for (const auto& b : alg->blocks()) {
    Matrix g = gaussian_matrix(rng, b.dim);
    blocks.push_back(g * g.adjoint());
  }
  BlockOperator w(alg, std::move(blocks));
  if (zero_modes > 0) {
    auto comps = eigendecompose(w).components();
    for (int i = 0; i < zero_modes && i < static_cast<int>(comps.size()); ++i) {
      comps[i].eigenvalue = 0.0;
    }
    w = functional_calculus(SpectralDecomposition(alg, comps), [](double t) { return t; });
  }
  const double tr = oracle_trace(*alg, embed(w)).real();
  return Complex(1.0 / tr) * w;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace wyd::testing
