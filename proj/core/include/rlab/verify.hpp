#pragma once

// Randomized and fixture-based verification of the inequalities.
//
// Every trial is a deterministic function of (seed, trial index), so the
// report is identical under any thread count. Float-mode gaps below the
// tolerance are rechecked exactly when the computation allows it, and at
// 113 bits otherwise, before being certified as violations.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rlab/instance.hpp"
#include "rlab/json_io.hpp"
#include "rlab/norms.hpp"

namespace rlab {

enum class Suite { Lemma31, Thm32, Thm41, Thm43, Rearrange, All };

std::string to_string(Suite suite);
Suite parse_suite(std::string_view text);

enum class WeightScheme { Equal, RandomRational };

std::string to_string(WeightScheme scheme);
WeightScheme parse_weight_scheme(std::string_view text);

// (r, p1, q1, p2, q2) with 1/r = 1/p1 + 1/q1 = 1/p2 + 1/q2.
struct ExponentTuple {
  Exponent r = Exponent::finite(1);
  Exponent p1 = Exponent::infinity();
  Exponent q1 = Exponent::finite(1);
  Exponent p2 = Exponent::infinity();
  Exponent q2 = Exponent::finite(1);

  // "r,p1,q1,p2,q2"; throws InvalidInput on a malformed or unbalanced tuple.
  static ExponentTuple parse(std::string_view text);
  void validate() const;
  std::string to_string() const;
};

// Relative tolerance on inequality gaps in float mode.
inline constexpr double kGapRelTol = 1e-9;
// Relative tolerance for the 113-bit recheck.
inline constexpr double kQuadRelTol = 0x1p-90;

struct TrialConfig {
  Suite suite = Suite::Thm32;
  // Trial i uses n = atoms_min + i mod (atoms_max - atoms_min + 1).
  std::size_t atoms_min = 2;
  std::size_t atoms_max = 8;
  WeightScheme weights = WeightScheme::Equal;
  // Values are k * lattice_step for integers |k| ≤ lattice_radius.
  Rational lattice_step = Rational(1, 4);
  int lattice_radius = 8;
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
  Mode mode = Mode::Exact;
  // Float significand bits: 53 (double) or 113.
  int float_bits = 53;
  ExponentTuple exponents;
  RINorm norm = RINorm::lp(Exponent::finite(1));
  // Concurrency cap; does not influence results.
  unsigned threads = 1;

  // Throws InvalidInput, InexactOperation or NonEqualAtomSpace.
  void validate() const;
  // Excludes the thread count.
  Json to_json() const;
};

// Deterministic in (cfg.seed, index); independent of cfg.suite except for
// the hypotheses a suite imposes (centered g, lattice-valued f and h).
Instance generate_instance(const TrialConfig& cfg, std::size_t index);

// One side-by-side comparison. Inequalities assert lhs ≤ rhs; equalities
// assert lhs = rhs with the given magnitude scale for float tolerance.
template <Scalar T>
struct Check {
  std::string property;
  T lhs;
  T rhs;
  bool equality = false;
  T scale = 0;

  T gap() const;
  // Float-mode slack: kGapRelTol·|rhs| or kFloatRelTol·scale.
  T tolerance(double rel_inequality, double rel_equality) const;

  static Check inequality(std::string property, T lhs, T rhs);
  static Check equal(std::string property, T lhs, T rhs);
  // A discrepancy that should vanish, measured against `scale`.
  static Check vanishing(std::string property, T discrepancy, T scale);
};

// (LHS, RHS) of the oscillation inequality
//   ∬ (f(x)+f(y))(g(x)-g(y)) h(y) ≤ 2 ∫ f* g* h*.
template <Scalar T>
Check<T> thm32_check(const SimpleFunction<T>& f, const SimpleFunction<T>& g, const SimpleFunction<T>& h);

// ‖fg - (fg)_Ω‖_r ≤ ‖f‖_{p1} ‖g - g_Ω‖_{q1} + ‖g‖_{p2} ‖f - f_Ω‖_{q2}.
template <Scalar T>
Check<T> thm41_check(const ExponentTuple& e, const SimpleFunction<T>& f, const SimpleFunction<T>& g);

// X-norm form  ‖fg - (fg)_Ω‖_X ≤ ‖f‖_∞ ‖g - g_Ω‖_X + ‖g‖_∞ ‖f - f_Ω‖_X
// and associate form
//   ‖fg - (fg)_Ω‖_1 ≤ ‖f‖_X ‖g - g_Ω‖_{X'} + ‖g‖_{X'} ‖f - f_Ω‖_X.
template <Scalar T>
std::pair<Check<T>, Check<T>> thm43_checks(const RINorm& X, const SimpleFunction<T>& f,
                                           const SimpleFunction<T>& g);

// Rearrangement and duality properties on a pair (f, g).
template <Scalar T>
std::vector<Check<T>> rearrange_checks(const SimpleFunction<T>& f, const SimpleFunction<T>& g);

// All checks of cfg.suite on one instance, evaluated in T.
template <Scalar T>
std::vector<Check<T>> evaluate_checks(const TrialConfig& cfg, const Instance& instance);

struct PropertySummary {
  std::string name;
  std::size_t checked = 0;
  std::size_t passed = 0;
  std::optional<std::string> min_gap;
};

struct FixtureResult {
  std::string name;
  std::string property;
  std::string mode;
  std::string lhs;
  std::string rhs;
  std::string gap;
  bool passed = false;
};

struct VerificationReport {
  std::string suite;
  std::size_t trials = 0;
  Json config;
  std::optional<std::string> min_gap;
  // Same value as min_gap, for programmatic comparisons.
  std::optional<double> min_gap_value;
  std::optional<std::size_t> argmin_trial;
  Json argmin_instance;
  std::vector<Json> violations;
  std::size_t grazes = 0;
  std::vector<PropertySummary> properties;
  std::vector<FixtureResult> fixtures;
  std::map<std::string, std::size_t> histogram;
  // Sub-reports of the "all" suite, in suite order.
  std::vector<VerificationReport> children;

  // Violations including those of sub-reports and fixtures.
  std::size_t total_violations() const;
  Json to_json() const;
};

VerificationReport verify(const TrialConfig& cfg);

// Runs fn(i) for i in [0, count) on up to `threads` threads in contiguous
// chunks. The first exception by index is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace rlab
