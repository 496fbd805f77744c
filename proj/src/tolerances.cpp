#include "wyd/tolerances.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "wyd/error.hpp"

namespace wyd {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_positive(std::string_view key, std::string_view text) {
  std::string owned(text);
  char* end = nullptr;
  double v = std::strtod(owned.c_str(), &end);
  if (owned.empty() || end != owned.c_str() + owned.size() || !std::isfinite(v) ||
      v <= 0.0) {
    fail(ErrorKind::Input, "tolerance '" + std::string(key) +
                               "' must be a positive number, got '" + owned + "'");
  }
  return v;
}

}  // namespace

Tolerances Tolerances::parse(std::string_view text) { return parse(text, Tolerances{}); }

Tolerances Tolerances::parse(std::string_view text, const Tolerances& start) {
  Tolerances base = start;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorKind::Input, "tolerance override '" + std::string(item) +
                                 "' is not of the form key=value");
    }
    auto key = trim(item.substr(0, eq));
    double v = parse_positive(key, trim(item.substr(eq + 1)));
    if (key == "herm") base.herm = v;
    else if (key == "lin") base.lin = v;
    else if (key == "norm") base.norm = v;
    else if (key == "psd") base.psd = v;
    else if (key == "q") base.q = v;
    else if (key == "orc") base.orc = v;
    else fail(ErrorKind::Input, "unknown tolerance key '" + std::string(key) + "'");
  }
  return base;
}

Tolerances Tolerances::from_environment() {
  const char* env = std::getenv("WYDCHECK_TOL");
  if (env == nullptr) return {};
  return parse(env);
}

}  // namespace wyd
