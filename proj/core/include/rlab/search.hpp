#pragma once

// Derivative-free search for near-extremal instances: maximizes LHS/RHS of
// an inequality by coordinate hill climbing with restarts. A ratio above
// 1 + 1e-9 is rechecked exactly (or at 113 bits) and certified if it holds
// up, which would point at an implementation bug.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rlab/verify.hpp"

namespace rlab {

enum class Target { Thm32, Thm41, Thm43 };

std::string to_string(Target target);
// Accepts "thm32" and "thm32-ratio" spellings.
Target parse_target(std::string_view text);

inline constexpr double kRatioTol = 1e-9;

struct SearchProblem {
  Target target = Target::Thm32;
  std::size_t atoms = 2;
  // Empty means equal weights.
  std::vector<Rational> weights;
  ExponentTuple exponents;
  RINorm norm = RINorm::lp(Exponent::finite(1));

  std::vector<Rational> resolved_weights() const;
  // Names of the free functions: f, g (and h for thm32).
  std::vector<std::string> variables() const;
  // Throws InfeasibleProblem, NonEqualAtomSpace or InvalidInput.
  void validate() const;
  Json to_json() const;
};

struct SearchOptions {
  std::size_t iters = 1000;
  std::size_t restarts = 8;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct TracePoint {
  std::size_t iteration;
  double ratio;
};

struct SearchResult {
  double best_ratio = 0;
  double best_lhs = 0;
  double best_rhs = 0;
  std::size_t best_restart = 0;
  // Values of each variable at the best point, in variables() order.
  std::vector<std::vector<double>> best_values;
  // Best-so-far ratio of the winning restart, recorded on improvement.
  std::vector<TracePoint> trace;
  std::vector<double> restart_best;
  std::size_t restarts = 0;
  std::size_t iterations = 0;
  // Set only when a ratio above 1 + kRatioTol survives the recheck.
  std::optional<Json> certificate;

  Json to_json(const SearchProblem& problem, const SearchOptions& options) const;
};

// (LHS, RHS) in double for the given variable values; thm43 reports the
// form with the larger ratio.
std::pair<double, double> evaluate_ratio_sides(const SearchProblem& problem,
                                               const std::vector<std::vector<double>>& values);

SearchResult search(const SearchProblem& problem, const SearchOptions& options);

struct LandscapeOptions {
  std::size_t grid = 101;
  double lo = -2;
  double hi = 2;
  // 1: f = (1, t) against fixed g (and h); 2: a second function varies too.
  int params = 1;
};

// CSV with header param1,param2,lhs,rhs,ratio; one row per grid point.
// With one parameter, param2 is empty. Only two-atom problems qualify;
// others raise TooManyFreeParameters.
std::string ratio_landscape(const SearchProblem& problem, const LandscapeOptions& options);

}  // namespace rlab
