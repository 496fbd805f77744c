#pragma once

#include <string_view>

namespace wyd {

// Relative tolerances. Each check documents the scale it multiplies by.
struct Tolerances {
  double herm = 1e-10;   // Hermiticity defect, times max(1, |x|_max)
  double lin = 1e-10;    // linear-algebra identities
  double norm = 1e-9;    // |tau(rho) - 1|
  double psd = 1e-12;    // eigenvalue clamping window, times max(1, |rho|_max)
  double q = 1e-9;       // inequality checks, times max(1, var_a * var_b)
  double orc = 1e-8;     // trace side vs measure side, times max(1, |lhs|)

  // Reads overrides from a "key=value,key=value" list (keys: herm, lin,
  // norm, psd, q, orc). Unknown keys or unparsable values raise an input
  // error.
  static Tolerances parse(std::string_view text, const Tolerances& base);
  static Tolerances parse(std::string_view text);

  // Defaults overridden by the WYDCHECK_TOL environment variable, if set.
  static Tolerances from_environment();
};

}  // namespace wyd
