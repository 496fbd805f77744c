#include "wyd/harness/instance.hpp"

#include <cmath>
#include <fstream>

#include "wyd/error.hpp"

namespace wyd::harness {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Entries of a standard complex Gaussian have E|z|^2 = 1.
Matrix ginibre(CounterRng& rng, int dim) {
  const double s = std::sqrt(0.5);
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(s * re, s * im);
    }
  }
  return g;
}

BlockOperator random_observable(CounterRng& rng, const AlgebraPtr& alg) {
  std::vector<Matrix> blocks;
  for (const auto& b : alg->blocks()) {
    Matrix g = ginibre(rng, b.dim);
    blocks.push_back((g + g.adjoint()) * 0.5);
  }
  return {alg, std::move(blocks)};
}

BlockOperator normalized(const BlockOperator& w) {
  return Complex(1.0 / trace(w).real()) * w;
}

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json operator_to_json(const BlockOperator& x) {
  ordered_json out = ordered_json::array();
  for (const auto& m : x.blocks()) out.push_back(matrix_to_json(m));
  return out;
}

[[noreturn]] void parse_error(const std::string& what) {
  fail(ErrorKind::Input, "instance: " + what);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) parse_error(where + " must be a number");
  return v.get<double>();
}

Matrix matrix_from_json(const json& rows, int dim, const std::string& where) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim) {
    parse_error(where + " must have " + std::to_string(dim) + " rows");
  }
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      parse_error(where + " row " + std::to_string(i) + " must have " +
                  std::to_string(dim) + " entries");
    }
    for (int j = 0; j < dim; ++j) {
      const auto& e = row[j];
      const std::string at = where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
      if (!e.is_array() || e.size() != 2) parse_error(at + " must be a [re, im] pair");
      m(i, j) = Complex(number(e[0], at), number(e[1], at));
    }
  }
  return m;
}

BlockOperator operator_from_json(const json& doc, const char* key, const AlgebraPtr& alg) {
  if (!doc.contains(key)) parse_error(std::string("missing \"") + key + "\"");
  const auto& blocks = doc.at(key);
  if (!blocks.is_array() || blocks.size() != alg->block_count()) {
    parse_error(std::string("\"") + key + "\" must list one matrix per block");
  }
  std::vector<Matrix> out;
  for (std::size_t k = 0; k < alg->block_count(); ++k) {
    out.push_back(matrix_from_json(blocks[k], alg->dim(k),
                                   std::string(key) + "[" + std::to_string(k) + "]"));
  }
  return {alg, std::move(out)};
}

}  // namespace

void GeneratorBounds::validate() const {
  if (max_dim < 2) fail(ErrorKind::Input, "max-dim must be >= 2");
  if (max_blocks < 1) fail(ErrorKind::Input, "max-blocks must be >= 1");
  if (max_blocks > max_dim) fail(ErrorKind::Input, "max-blocks must not exceed max-dim");
  if (!(min_weight > 0.0) || !(max_weight >= min_weight)) {
    fail(ErrorKind::Input, "weight range must satisfy 0 < min <= max");
  }
  if (!(rank_deficient_probability >= 0.0 && rank_deficient_probability <= 1.0)) {
    fail(ErrorKind::Input, "rank-deficiency probability must lie in [0, 1]");
  }
}

DensityOperator InstanceSpec::density(const Tolerances& tol) const {
  return validate_density(rho, tol);
}

void InstanceSpec::validate(const Tolerances& tol) const {
  require_same_algebra(rho, a);
  require_same_algebra(rho, b);
  density(tol);
  for (const auto* x : {&a, &b}) {
    if (!x->is_hermitian(tol)) {
      fail(ErrorKind::NotHermitian, std::string("observable ") + (x == &a ? "a" : "b") +
                                        " is not Hermitian");
    }
  }
}

InstanceSpec generate_instance(CounterRng& rng, const GeneratorBounds& bounds) {
  bounds.validate();
  const int block_count = rng.uniform_int(1, bounds.max_blocks);
  std::vector<Block> blocks(block_count);
  // Resample dims until the total lies in [2, max_dim].
  for (;;) {
    int total = 0;
    for (auto& b : blocks) {
      b.dim = rng.uniform_int(1, bounds.max_dim);
      total += b.dim;
    }
    if (total >= 2 && total <= bounds.max_dim) break;
  }
  for (auto& b : blocks) b.weight = rng.uniform(bounds.min_weight, bounds.max_weight);
  auto alg = TraceAlgebra::make(blocks);

  std::vector<Matrix> w;
  for (const auto& b : blocks) {
    Matrix g = ginibre(rng, b.dim);
    w.push_back(g * g.adjoint());
  }
  BlockOperator rho = normalized(BlockOperator(alg, std::move(w)));

  if (rng.uniform() < bounds.rank_deficient_probability) {
    auto components = eigendecompose(rho).components();
    components.front().eigenvalue = 0.0;
    SpectralDecomposition dec(alg, std::move(components));
    rho = normalized(functional_calculus(dec, [](double t) { return t; }));
  }

  BlockOperator a = random_observable(rng, alg);
  BlockOperator b = random_observable(rng, alg);
  return {alg, std::move(rho), std::move(a), std::move(b), {}};
}

InstanceSpec generate_trial(std::uint64_t seed, std::uint64_t trial,
                            const GeneratorBounds& bounds) {
  CounterRng rng(seed, trial);
  auto inst = generate_instance(rng, bounds);
  inst.label = "seed " + std::to_string(seed) + " trial " + std::to_string(trial);
  return inst;
}

ordered_json to_json(const InstanceSpec& instance) {
  ordered_json doc;
  ordered_json blocks = ordered_json::array();
  for (const auto& b : instance.algebra->blocks()) {
    blocks.push_back({{"dim", b.dim}, {"weight", b.weight}});
  }
  doc["blocks"] = std::move(blocks);
  doc["rho"] = operator_to_json(instance.rho);
  doc["a"] = operator_to_json(instance.a);
  doc["b"] = operator_to_json(instance.b);
  if (!instance.label.empty()) doc["label"] = instance.label;
  return doc;
}

InstanceSpec instance_from_json(const json& doc, const Tolerances& tol) {
  if (!doc.is_object()) parse_error("document must be an object");
  if (!doc.contains("blocks") || !doc.at("blocks").is_array()) {
    parse_error("missing \"blocks\" array");
  }
  std::vector<Block> blocks;
  for (const auto& b : doc.at("blocks")) {
    if (!b.is_object() || !b.contains("dim") || !b.contains("weight")) {
      parse_error("each block needs \"dim\" and \"weight\"");
    }
    if (!b.at("dim").is_number_integer()) parse_error("block dim must be an integer");
    blocks.push_back({b.at("dim").get<int>(), number(b.at("weight"), "block weight")});
  }
  auto alg = TraceAlgebra::make(std::move(blocks));
  InstanceSpec inst{alg, operator_from_json(doc, "rho", alg),
                    operator_from_json(doc, "a", alg), operator_from_json(doc, "b", alg),
                    doc.contains("label") && doc.at("label").is_string()
                        ? doc.at("label").get<std::string>()
                        : std::string{}};
  inst.validate(tol);
  return inst;
}

InstanceSpec read_instance(const std::filesystem::path& path, const Tolerances& tol) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open instance file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Input, "instance file " + path.string() + ": " + e.what());
  }
  return instance_from_json(doc, tol);
}

void write_instance(const std::filesystem::path& path, const InstanceSpec& instance) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write instance file " + path.string());
  out << to_json(instance).dump(1) << '\n';
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

InstanceSpec qubit_instance() {
  auto alg = TraceAlgebra::make({{2, 1.0}});
  const Complex i(0.0, 1.0);
  Matrix sx(2, 2), sy(2, 2);
  sx << 0.0, 1.0, 1.0, 0.0;
  sy << 0.0, -i, i, 0.0;
  return {alg, BlockOperator::diagonal(alg, {0.75, 0.25}), BlockOperator(alg, {sx}),
          BlockOperator(alg, {sy}), "qubit"};
}

InstanceSpec commuting_instance() {
  auto alg = TraceAlgebra::make({{2, 1.0}});
  return {alg, BlockOperator::diagonal(alg, {0.75, 0.25}),
          BlockOperator::diagonal(alg, {1.0, -1.0}), BlockOperator::diagonal(alg, {2.0, -1.0}),
          "commuting"};
}

}  // namespace wyd::harness
