#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "wyd/error.hpp"
#include "wyd/harness/instance.hpp"
#include "wyd/harness/verify.hpp"
#include "wyd/spectral_measure.hpp"
#include "wyd/trace_algebra.hpp"
#include "wyd/uncertainty.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace wyd;

namespace {

using MutableAlgebra = std::shared_ptr<TraceAlgebra>;

MutableAlgebra unconst(const AlgebraPtr& p) { return std::const_pointer_cast<TraceAlgebra>(p); }

std::vector<Block> to_blocks(const std::vector<std::pair<int, double>>& pairs) {
  std::vector<Block> blocks;
  blocks.reserve(pairs.size());
  for (const auto& [dim, weight] : pairs) blocks.push_back({dim, weight});
  return blocks;
}

py::dict report_dict(const UncertaintyReport& r) {
  return py::dict("beta"_a = r.beta, "var_a"_a = r.var_a, "var_b"_a = r.var_b, "cov"_a = r.cov,
                  "corr"_a = r.corr, "info_a"_a = r.info_a, "info_b"_a = r.info_b,
                  "schrodinger_lhs"_a = r.schrodinger_lhs,
                  "schrodinger_bound"_a = r.schrodinger_bound, "kosaki_lhs"_a = r.kosaki_lhs,
                  "kosaki_rhs"_a = r.kosaki_rhs, "gap_f"_a = r.gap_f, "eps_q"_a = r.eps_q,
                  "gap_ok"_a = r.gap_ok, "schrodinger_ok"_a = r.schrodinger_ok,
                  "heisenberg_ok"_a = r.heisenberg_ok, "info_ok"_a = r.info_ok,
                  "passed"_a = r.passed());
}

Tolerances tol_or_default(const std::optional<Tolerances>& tol) {
  return tol ? *tol : Tolerances{};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Trace algebras, spectral measures and the Wigner-Yanase-Dyson uncertainty gap";

  // Raised with args (message, kind).
  static py::handle error_type = py::exception<Error>(m, "WydError", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object args = py::make_tuple(e.what(), std::string(to_string(e.kind())));
      PyErr_SetObject(error_type.ptr(), args.ptr());
    }
  });

  py::class_<Tolerances>(m, "Tolerances")
      .def(py::init([](double herm, double lin, double norm, double psd, double q, double orc) {
             return Tolerances{herm, lin, norm, psd, q, orc};
           }),
           "herm"_a = 1e-10, "lin"_a = 1e-10, "norm"_a = 1e-9, "psd"_a = 1e-12, "q"_a = 1e-9,
           "orc"_a = 1e-8)
      .def_static("parse", py::overload_cast<std::string_view>(&Tolerances::parse))
      .def_static("from_environment", &Tolerances::from_environment)
      .def_readwrite("herm", &Tolerances::herm)
      .def_readwrite("lin", &Tolerances::lin)
      .def_readwrite("norm", &Tolerances::norm)
      .def_readwrite("psd", &Tolerances::psd)
      .def_readwrite("q", &Tolerances::q)
      .def_readwrite("orc", &Tolerances::orc);

  py::class_<TraceAlgebra, MutableAlgebra>(m, "TraceAlgebra")
      .def(py::init([](const std::vector<std::pair<int, double>>& blocks) {
             return unconst(TraceAlgebra::make(to_blocks(blocks)));
           }),
           "blocks"_a, "List of (dim, weight) pairs.")
      .def_property_readonly("blocks",
                             [](const TraceAlgebra& a) {
                               std::vector<std::pair<int, double>> out;
                               for (const auto& b : a.blocks()) out.emplace_back(b.dim, b.weight);
                               return out;
                             })
      .def_property_readonly("total_dim", &TraceAlgebra::total_dim)
      .def("__eq__", [](const TraceAlgebra& x, const TraceAlgebra& y) { return x == y; })
      .def("__repr__", [](const TraceAlgebra& a) {
        std::string s = "TraceAlgebra([";
        for (std::size_t k = 0; k < a.block_count(); ++k) {
          if (k) s += ", ";
          s += "(" + std::to_string(a.dim(k)) + ", " + py::repr(py::float_(a.weight(k))).cast<std::string>() + ")";
        }
        return s + "])";
      });

  py::class_<BlockOperator>(m, "BlockOperator")
      .def(py::init([](const MutableAlgebra& alg, std::vector<Matrix> blocks) {
             return BlockOperator(alg, std::move(blocks));
           }),
           "algebra"_a, "blocks"_a)
      .def_static("zero", [](const MutableAlgebra& a) { return BlockOperator::zero(a); })
      .def_static("identity", [](const MutableAlgebra& a) { return BlockOperator::identity(a); })
      .def_static("diagonal",
                  [](const MutableAlgebra& a, const std::vector<Complex>& entries) {
                    return BlockOperator::diagonal(a, entries);
                  })
      .def_property_readonly("algebra", [](const BlockOperator& x) { return unconst(x.algebra()); })
      .def_property_readonly("blocks", &BlockOperator::blocks)
      .def("adjoint", &BlockOperator::adjoint)
      .def("to_dense", &BlockOperator::to_dense)
      .def("max_abs", &BlockOperator::max_abs)
      .def("is_hermitian", &BlockOperator::is_hermitian, "tol"_a = Tolerances{})
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def("__rmul__", [](const BlockOperator& x, Complex s) { return s * x; })
      .def("__mul__", [](const BlockOperator& x, Complex s) { return s * x; })
      .def("__eq__", [](const BlockOperator& x, const BlockOperator& y) { return x == y; });

  py::class_<DensityOperator>(m, "DensityOperator")
      .def_property_readonly("op", &DensityOperator::op)
      .def_property_readonly("eigenvalues",
                             [](const DensityOperator& r) { return r.decomposition().eigenvalues(); })
      .def_property_readonly("algebra", [](const DensityOperator& r) { return unconst(r.algebra()); });

  m.def("trace", py::overload_cast<const BlockOperator&>(&trace), "x"_a,
        "Weighted trace sum_k w_k Tr(x_k).");
  m.def("l2_norm", &l2_norm, "x"_a);
  m.def(
      "eigendecompose",
      [](const BlockOperator& x, std::optional<Tolerances> tol) {
        const auto dec = eigendecompose(x, tol_or_default(tol));
        py::list out;
        for (const auto& c : dec.components()) {
          out.append(py::make_tuple(c.eigenvalue, c.block, c.basis));
        }
        return out;
      },
      "x"_a, "tol"_a = py::none(),
      "List of (eigenvalue, block, basis) in ascending eigenvalue order.");
  m.def(
      "functional_calculus",
      [](const BlockOperator& x, const std::function<double(double)>& f,
         std::optional<Tolerances> tol) {
        return functional_calculus(eigendecompose(x, tol_or_default(tol)), f);
      },
      "x"_a, "f"_a, "tol"_a = py::none());
  m.def(
      "validate_density",
      [](const BlockOperator& x, std::optional<Tolerances> tol) {
        return validate_density(x, tol_or_default(tol));
      },
      "x"_a, "tol"_a = py::none());
  m.def("fractional_power", &fractional_power, "rho"_a, "beta"_a);

  m.def(
      "measure_atoms",
      [](const DensityOperator& rho, const BlockOperator& a, const BlockOperator& b) {
        const auto& dec = rho.decomposition();
        const auto mu = build_measure(dec, dec, a, b);
        py::list out;
        for (const auto& atom : mu.atoms()) {
          out.append(py::dict("x"_a = atom.x, "y"_a = atom.y, "w"_a = atom.w, "i"_a = atom.i,
                              "j"_a = atom.j));
        }
        return out;
      },
      "rho"_a, "a"_a, "b"_a, "Atoms of mu_ab over pairs of eigenvalues of rho, row-major.");
  m.def(
      "wyd_pairing",
      [](const DensityOperator& rho, double beta, const BlockOperator& a, const BlockOperator& b,
         std::optional<Tolerances> tol) {
        return wyd_pairing(rho, beta, a, b, tol_or_default(tol));
      },
      "rho"_a, "beta"_a, "a"_a, "b"_a, "tol"_a = py::none());

  m.def("kernel", &kernel, "l1"_a, "l2"_a, "l3"_a, "l4"_a, "beta"_a);
  m.def(
      "kosaki_gap",
      [](const DensityOperator& rho, double beta, const BlockOperator& a, const BlockOperator& b,
         std::optional<Tolerances> tol) {
        return report_dict(kosaki_gap(rho, beta, a, b, tol_or_default(tol)));
      },
      "rho"_a, "beta"_a, "a"_a, "b"_a, "tol"_a = py::none());
  m.def(
      "kosaki_gap_via_measure",
      [](const DensityOperator& rho, double beta, const BlockOperator& a, const BlockOperator& b,
         std::optional<Tolerances> tol, bool cross_check) {
        return kosaki_gap_via_measure(rho, beta, a, b, tol_or_default(tol), cross_check);
      },
      "rho"_a, "beta"_a, "a"_a, "b"_a, "tol"_a = py::none(), "cross_check"_a = true);
  m.def(
      "g_curve",
      [](const DensityOperator& rho, const BlockOperator& a, const BlockOperator& b,
         const std::vector<double>& betas, std::optional<Tolerances> tol) {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : g_curve(rho, a, b, betas, tol_or_default(tol))) {
          out.emplace_back(p.beta, p.g);
        }
        return out;
      },
      "rho"_a, "a"_a, "b"_a, "betas"_a, "tol"_a = py::none());

  // Instances are returned as (rho, a, b) with rho still unvalidated.
  auto instance_tuple = [](const harness::InstanceSpec& s) {
    return py::make_tuple(s.rho, s.a, s.b);
  };
  m.def(
      "generate_trial",
      [instance_tuple](std::uint64_t seed, std::uint64_t trial, int max_dim, int max_blocks) {
        harness::GeneratorBounds bounds;
        bounds.max_dim = max_dim;
        bounds.max_blocks = max_blocks;
        bounds.validate();
        return instance_tuple(harness::generate_trial(seed, trial, bounds));
      },
      "seed"_a, "trial"_a, "max_dim"_a = 8, "max_blocks"_a = 3);
  m.def("qubit_instance", [instance_tuple] { return instance_tuple(harness::qubit_instance()); });
  m.def(
      "read_instance",
      [instance_tuple](const std::filesystem::path& path) {
        return instance_tuple(harness::read_instance(path));
      },
      "path"_a);

  m.def(
      "run_verify",
      [](std::uint64_t seed, long long trials, std::vector<double> betas, const std::string& out,
         int threads, std::optional<Tolerances> tol) {
        harness::RunConfig config;
        config.seed = seed;
        config.trials = trials;
        config.betas = std::move(betas);
        config.out_path = out;
        config.threads = threads;
        config.tol = tol_or_default(tol);
        harness::VerifySummary s;
        {
          py::gil_scoped_release release;
          s = harness::run_verify(config);
        }
        return py::dict("records"_a = s.records, "violations"_a = s.violations,
                        "min_gap_f"_a = s.min_gap_f,
                        "max_oracle_discrepancy"_a = s.max_oracle_discrepancy,
                        "exit_code"_a = s.exit_code());
      },
      "seed"_a, "trials"_a, "betas"_a, "out"_a, "threads"_a = 1, "tol"_a = py::none(),
      "Writes a JSON-lines report to `out` and returns the summary.");
}
