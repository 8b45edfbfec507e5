#pragma once

// Decreasing rearrangements and the step functions on [0, ∞) that carry
// them. f* is always taken of |f|, so signed functions and their absolute
// values share a rearrangement.

#include <cstddef>
#include <span>
#include <vector>

#include "rlab/measure.hpp"

namespace rlab {

template <Scalar T>
struct Segment {
  T value;
  T length;

  friend bool operator==(const Segment&, const Segment&) = default;
};

// Nonincreasing, right-continuous, nonnegative step function on [0, ∞),
// zero from total_length() on. Stored canonically: strictly decreasing
// positive values, positive lengths.
template <Scalar T>
class StepProfile {
 public:
  StepProfile() = default;

  // Accepts nonincreasing values; merges equal neighbours and drops zero
  // levels. Throws InvalidInput on increasing values, non-positive lengths
  // or total length above one.
  static StepProfile from_segments(std::vector<Segment<T>> segments);
  // 1 on [0, length).
  static StepProfile unit_block(const T& length);

  const std::vector<Segment<T>>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }
  T total_length() const;
  // f*(0), i.e. the sup norm.
  T sup() const { return empty() ? T(0) : segments_.front().value; }
  T value_at(const T& t) const;
  // |{f* > t}|.
  T measure_above(const T& t) const;

  friend bool operator==(const StepProfile&, const StepProfile&) = default;

 private:
  std::vector<Segment<T>> segments_;
};

template <Scalar T>
StepProfile<T> decreasing_rearrangement(const SimpleFunction<T>& f);

// |f| sorted in decreasing order (ties by atom index). On an equal-atom
// space this is f* sampled on the atom lattice.
template <Scalar T>
std::vector<T> sorted_abs_desc(const SimpleFunction<T>& f);

// ∫_0^∞ Π_k p_k(t) dt on the merged breakpoint grid. The empty list is
// rejected.
template <Scalar T>
T profile_integrate_product(std::span<const StepProfile<T>> profiles);

// ∫_0^∞ p(t)^q dt for finite q.
template <Scalar T>
T profile_lp_integral(const StepProfile<T>& p, const Exponent& q);

// Pointwise sum; stays nonincreasing.
template <Scalar T>
StepProfile<T> profile_sum(const StepProfile<T>& a, const StepProfile<T>& b);

// a(t) ≤ b(t) for all t (float mode: up to kFloatRelTol · b(0)).
template <Scalar T>
bool profile_leq(const StepProfile<T>& a, const StepProfile<T>& b);

// ∫|a - b|^q dt for finite q, or sup|a - b| for q = ∞.
template <Scalar T>
T profile_distance(const StepProfile<T>& a, const StepProfile<T>& b, const Exponent& q);

// A pair of Lp quantities computed along two routes. In exact mode a finite
// exponent other than 1 has no rational root, so the p-th powers are
// reported instead and `raised` is set.
template <Scalar T>
struct NormPair {
  T first;
  T second;
  bool raised = false;
};

// (‖f‖_p, ‖f*‖_p).
template <Scalar T>
NormPair<T> rearrangement_preserves_lp(const SimpleFunction<T>& f, const Exponent& p);

// (‖f* - g*‖_{L^p[0,∞)}, ‖f - g‖_p); the first never exceeds the second.
template <Scalar T>
NormPair<T> nonexpansive_check(const SimpleFunction<T>& f, const SimpleFunction<T>& g,
                               const Exponent& p);

// μ({|f| > t}) = |{f* > t}| at t = 0 and at every distinct value of |f|.
template <Scalar T>
bool is_equimeasurable(const SimpleFunction<T>& f, const StepProfile<T>& profile);

// Layer-cake decomposition: band j covers [thresholds[j], thresholds[j+1])
// and records {f_+ > thresholds[j]} and {f_- > thresholds[j]}.
template <Scalar T>
struct LayerCake {
  SpacePtr<T> space;
  std::vector<T> thresholds;
  std::vector<AtomSet> positive_sets;
  std::vector<AtomSet> negative_sets;

  std::size_t bands() const { return positive_sets.size(); }
};

template <Scalar T>
LayerCake<T> layer_decompose(const SimpleFunction<T>& f);

// Σ_j (t_{j+1} - t_j)(1_{P_j} - 1_{N_j}).
template <Scalar T>
SimpleFunction<T> layer_reconstruct(const LayerCake<T>& cake);

// ((1_{f_+ > t} - 1_{f_- > t})*, 1_{f* > t}); the two profiles coincide.
template <Scalar T>
std::pair<StepProfile<T>, StepProfile<T>> indicator_difference_rearrangement(
    const SimpleFunction<T>& f, const T& t);

// sign(f) · min(|f|, level).
template <Scalar T>
SimpleFunction<T> truncate(const SimpleFunction<T>& f, const T& level);

// Rearrangements of the truncations at levels k·‖f‖_∞/levels, k = 1..levels.
// They increase pointwise and the last one is f*.
template <Scalar T>
std::vector<StepProfile<T>> truncation_ladder(const SimpleFunction<T>& f, std::size_t levels);

}  // namespace rlab
