#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "wyd/harness/rng.hpp"
#include "wyd/trace_algebra.hpp"

namespace wyd::harness {

struct GeneratorBounds {
  int max_dim = 8;      // bound on the total dimension; blocks have dim >= 1
  int max_blocks = 3;
  double min_weight = 0.5;
  double max_weight = 2.0;
  double rank_deficient_probability = 0.1;

  void validate() const;
};

// One (rho, a, b) problem in a trace algebra.
struct InstanceSpec {
  AlgebraPtr algebra;
  BlockOperator rho;
  BlockOperator a;
  BlockOperator b;
  std::string label;

  DensityOperator density(const Tolerances& tol = {}) const;
  // Throws unless rho is a valid density and a, b are Hermitian.
  void validate(const Tolerances& tol = {}) const;
};

InstanceSpec generate_instance(CounterRng& rng, const GeneratorBounds& bounds);
// Instance for trial `trial` of a run seeded with `seed`.
InstanceSpec generate_trial(std::uint64_t seed, std::uint64_t trial,
                            const GeneratorBounds& bounds);

// {"blocks":[{"dim":2,"weight":1.0}], "rho":[block...], "a":..., "b":...}
// with each block a list of rows and each entry a [re, im] pair.
nlohmann::ordered_json to_json(const InstanceSpec& instance);
InstanceSpec instance_from_json(const nlohmann::json& doc, const Tolerances& tol = {});

InstanceSpec read_instance(const std::filesystem::path& path, const Tolerances& tol = {});
void write_instance(const std::filesystem::path& path, const InstanceSpec& instance);

// Built-in examples, addressable by name from the CLI ("qubit", "commuting").
InstanceSpec qubit_instance();
InstanceSpec commuting_instance();

}  // namespace wyd::harness
