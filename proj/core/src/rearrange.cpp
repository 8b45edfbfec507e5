#include "rlab/rearrange.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace rlab {

namespace {

// Walks the common refinement of the profiles' breakpoints and calls
// visit(width, values) once per interval on which all of them are constant.
// A profile that has run out contributes 0. The walk stops when the first
// profile runs out (shortest) or when all have (longest).
template <Scalar T, class Visit>
void sweep(std::span<const StepProfile<T>* const> profiles, bool stop_at_shortest, Visit&& visit) {
  const std::size_t k = profiles.size();
  std::vector<std::size_t> index(k, 0);
  std::vector<T> segment_end(k, T(0));
  std::vector<T> values(k, T(0));
  for (std::size_t i = 0; i < k; ++i) {
    if (!profiles[i]->empty()) segment_end[i] = profiles[i]->segments().front().length;
  }
  T position = 0;
  while (true) {
    bool any_active = false;
    bool all_active = true;
    T next = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const auto& segs = profiles[i]->segments();
      if (index[i] < segs.size()) {
        if (!any_active || segment_end[i] < next) next = segment_end[i];
        any_active = true;
        values[i] = segs[index[i]].value;
      } else {
        all_active = false;
        values[i] = 0;
      }
    }
    if (stop_at_shortest ? !all_active : !any_active) break;
    visit(T(next - position), static_cast<const std::vector<T>&>(values));
    for (std::size_t i = 0; i < k; ++i) {
      const auto& segs = profiles[i]->segments();
      if (index[i] < segs.size() && segment_end[i] == next) {
        ++index[i];
        if (index[i] < segs.size()) segment_end[i] = next + segs[index[i]].length;
      }
    }
    position = next;
  }
}

template <Scalar T>
NormPair<T> finish_lp(T first, T second, const Exponent& p) {
  if (p.is_infinite() || p.is_one()) return {std::move(first), std::move(second), false};
  if constexpr (is_exact_v<T>) {
    return {std::move(first), std::move(second), true};
  } else {
    return {root(first, p), root(second, p), false};
  }
}

}  // namespace

template <Scalar T>
StepProfile<T> StepProfile<T>::from_segments(std::vector<Segment<T>> segments) {
  StepProfile profile;
  T total = 0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    auto& s = segments[i];
    if (!(s.length > 0)) throw InvalidInput("profile segment with non-positive length");
    if (s.value < 0) throw InvalidInput("profile segment with negative value");
    if (i > 0 && segments[i - 1].value < s.value) {
      throw InvalidInput("profile values must be nonincreasing");
    }
    total += s.length;
    if (s.value == 0) continue;
    if (!profile.segments_.empty() && profile.segments_.back().value == s.value) {
      profile.segments_.back().length += s.length;
    } else {
      profile.segments_.push_back(s);
    }
  }
  if constexpr (is_exact_v<T>) {
    if (total > 1) throw InvalidInput("profile longer than the unit interval");
  } else {
    if (total > T(1) + T(kFloatRelTol)) throw InvalidInput("profile longer than the unit interval");
  }
  return profile;
}

template <Scalar T>
StepProfile<T> StepProfile<T>::unit_block(const T& length) {
  if (length == 0) return {};
  return from_segments({Segment<T>{T(1), length}});
}

template <Scalar T>
T StepProfile<T>::total_length() const {
  T total = 0;
  for (const auto& s : segments_) total += s.length;
  return total;
}

template <Scalar T>
T StepProfile<T>::value_at(const T& t) const {
  T start = 0;
  for (const auto& s : segments_) {
    T end = start + s.length;
    if (t < end) return t < start ? T(0) : s.value;
    start = end;
  }
  return 0;
}

template <Scalar T>
T StepProfile<T>::measure_above(const T& t) const {
  T total = 0;
  for (const auto& s : segments_) {
    if (s.value > t) total += s.length;
  }
  return total;
}

template <Scalar T>
std::vector<T> sorted_abs_desc(const SimpleFunction<T>& f) {
  std::vector<T> v;
  v.reserve(f.size());
  for (const auto& x : f.values()) v.push_back(abs_of(x));
  std::stable_sort(v.begin(), v.end(), [](const T& a, const T& b) { return b < a; });
  return v;
}

template <Scalar T>
StepProfile<T> decreasing_rearrangement(const SimpleFunction<T>& f) {
  std::vector<std::size_t> order(f.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<T> magnitude;
  magnitude.reserve(f.size());
  for (const auto& x : f.values()) magnitude.push_back(abs_of(x));
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return magnitude[b] < magnitude[a]; });
  std::vector<Segment<T>> segs;
  for (std::size_t i : order) {
    if (magnitude[i] == 0) break;
    segs.push_back({magnitude[i], f.space().weight(i)});
  }
  return StepProfile<T>::from_segments(std::move(segs));
}

template <Scalar T>
T profile_integrate_product(std::span<const StepProfile<T>> profiles) {
  if (profiles.empty()) throw InvalidInput("product of an empty list of profiles");
  std::vector<const StepProfile<T>*> ptrs;
  for (const auto& p : profiles) ptrs.push_back(&p);
  T total = 0;
  sweep<T>(ptrs, true, [&](const T& width, const std::vector<T>& values) {
    T prod = width;
    for (const auto& v : values) prod *= v;
    total += prod;
  });
  return total;
}

template <Scalar T>
T profile_lp_integral(const StepProfile<T>& p, const Exponent& q) {
  T total = 0;
  for (const auto& s : p.segments()) total += power(s.value, q) * s.length;
  return total;
}

template <Scalar T>
StepProfile<T> profile_sum(const StepProfile<T>& a, const StepProfile<T>& b) {
  const StepProfile<T>* ptrs[] = {&a, &b};
  std::vector<Segment<T>> segs;
  sweep<T>(std::span<const StepProfile<T>* const>(ptrs), false,
           [&](const T& width, const std::vector<T>& values) {
             segs.push_back({T(values[0] + values[1]), width});
           });
  return StepProfile<T>::from_segments(std::move(segs));
}

template <Scalar T>
bool profile_leq(const StepProfile<T>& a, const StepProfile<T>& b) {
  const StepProfile<T>* ptrs[] = {&a, &b};
  T slack = 0;
  if constexpr (!is_exact_v<T>) slack = T(kFloatRelTol) * max_of(a.sup(), b.sup());
  bool ok = true;
  sweep<T>(std::span<const StepProfile<T>* const>(ptrs), false,
           [&](const T&, const std::vector<T>& values) {
             if (values[0] > values[1] + slack) ok = false;
           });
  return ok;
}

template <Scalar T>
T profile_distance(const StepProfile<T>& a, const StepProfile<T>& b, const Exponent& q) {
  const StepProfile<T>* ptrs[] = {&a, &b};
  T total = 0;
  sweep<T>(std::span<const StepProfile<T>* const>(ptrs), false,
           [&](const T& width, const std::vector<T>& values) {
             T d = abs_of(T(values[0] - values[1]));
             if (q.is_infinite()) {
               total = max_of(total, d);
             } else {
               total += power(d, q) * width;
             }
           });
  return total;
}

template <Scalar T>
NormPair<T> rearrangement_preserves_lp(const SimpleFunction<T>& f, const Exponent& p) {
  const StepProfile<T> star = decreasing_rearrangement(f);
  if (p.is_infinite()) return {sup_abs(f), star.sup(), false};
  return finish_lp(lp_integral(f, p), profile_lp_integral(star, p), p);
}

template <Scalar T>
NormPair<T> nonexpansive_check(const SimpleFunction<T>& f, const SimpleFunction<T>& g,
                               const Exponent& p) {
  require_same_space(f, g);
  const StepProfile<T> fs = decreasing_rearrangement(f);
  const StepProfile<T> gs = decreasing_rearrangement(g);
  const SimpleFunction<T> diff = f - g;
  if (p.is_infinite()) return {profile_distance(fs, gs, p), sup_abs(diff), false};
  return finish_lp(profile_distance(fs, gs, p), lp_integral(diff, p), p);
}

template <Scalar T>
bool is_equimeasurable(const SimpleFunction<T>& f, const StepProfile<T>& profile) {
  std::vector<T> levels{T(0)};
  for (const auto& v : f.values()) levels.push_back(abs_of(v));
  for (const auto& t : levels) {
    AtomSet above(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (abs_of(f[i]) > t) above.insert(i);
    }
    const T lhs = f.space().measure(above);
    const T rhs = profile.measure_above(t);
    if constexpr (is_exact_v<T>) {
      if (lhs != rhs) return false;
    } else {
      if (abs_of(T(lhs - rhs)) > T(kFloatRelTol)) return false;
    }
  }
  return true;
}

template <Scalar T>
LayerCake<T> layer_decompose(const SimpleFunction<T>& f) {
  LayerCake<T> cake;
  cake.space = f.space_ptr();
  std::vector<T> levels;
  for (const auto& v : f.values()) {
    if (v != 0) levels.push_back(abs_of(v));
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (levels.empty()) return cake;
  cake.thresholds.push_back(T(0));
  cake.thresholds.insert(cake.thresholds.end(), levels.begin(), levels.end());
  for (std::size_t j = 0; j + 1 < cake.thresholds.size(); ++j) {
    const T& t = cake.thresholds[j];
    AtomSet pos(f.size());
    AtomSet neg(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f[i] > t) pos.insert(i);
      if (-f[i] > t) neg.insert(i);
    }
    cake.positive_sets.push_back(std::move(pos));
    cake.negative_sets.push_back(std::move(neg));
  }
  return cake;
}

template <Scalar T>
SimpleFunction<T> layer_reconstruct(const LayerCake<T>& cake) {
  if (!cake.space) throw InvalidInput("layer cake without a space");
  if (cake.positive_sets.size() != cake.negative_sets.size() ||
      (cake.bands() > 0 && cake.thresholds.size() != cake.bands() + 1)) {
    throw InvalidInput("inconsistent layer cake");
  }
  std::vector<T> values(cake.space->size(), T(0));
  for (std::size_t j = 0; j < cake.bands(); ++j) {
    const T height = cake.thresholds[j + 1] - cake.thresholds[j];
    for (std::size_t i : cake.positive_sets[j].indices()) values[i] += height;
    for (std::size_t i : cake.negative_sets[j].indices()) values[i] -= height;
  }
  return SimpleFunction<T>(cake.space, std::move(values));
}

template <Scalar T>
std::pair<StepProfile<T>, StepProfile<T>> indicator_difference_rearrangement(
    const SimpleFunction<T>& f, const T& t) {
  if (t < 0) throw PreconditionViolated("threshold must be nonnegative");
  std::vector<T> diff(f.size(), T(0));
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] > t) diff[i] = 1;
    if (-f[i] > t) diff[i] = -1;
  }
  StepProfile<T> lhs = decreasing_rearrangement(SimpleFunction<T>(f.space_ptr(), std::move(diff)));
  StepProfile<T> rhs = StepProfile<T>::unit_block(decreasing_rearrangement(f).measure_above(t));
  return {std::move(lhs), std::move(rhs)};
}

template <Scalar T>
SimpleFunction<T> truncate(const SimpleFunction<T>& f, const T& level) {
  std::vector<T> v = f.values();
  for (auto& x : v) {
    if (x > level) x = level;
    if (x < -level) x = -level;
  }
  return SimpleFunction<T>(f.space_ptr(), std::move(v));
}

template <Scalar T>
std::vector<StepProfile<T>> truncation_ladder(const SimpleFunction<T>& f, std::size_t levels) {
  if (levels == 0) throw InvalidInput("truncation ladder needs at least one level");
  const T top = sup_abs(f);
  std::vector<StepProfile<T>> ladder;
  ladder.reserve(levels);
  for (std::size_t k = 1; k <= levels; ++k) {
    // The last rung is exactly ‖f‖_∞ even when k·δ rounds in float mode.
    const T level = k == levels ? top : T(top * T(static_cast<long>(k)) / T(static_cast<long>(levels)));
    ladder.push_back(decreasing_rearrangement(truncate(f, level)));
  }
  return ladder;
}

#define RLAB_INSTANTIATE(T)                                                                      \
  template class StepProfile<T>;                                                                 \
  template StepProfile<T> decreasing_rearrangement(const SimpleFunction<T>&);                    \
  template std::vector<T> sorted_abs_desc(const SimpleFunction<T>&);                             \
  template T profile_integrate_product(std::span<const StepProfile<T>>);                         \
  template T profile_lp_integral(const StepProfile<T>&, const Exponent&);                        \
  template StepProfile<T> profile_sum(const StepProfile<T>&, const StepProfile<T>&);             \
  template bool profile_leq(const StepProfile<T>&, const StepProfile<T>&);                       \
  template T profile_distance(const StepProfile<T>&, const StepProfile<T>&, const Exponent&);    \
  template NormPair<T> rearrangement_preserves_lp(const SimpleFunction<T>&, const Exponent&);    \
  template NormPair<T> nonexpansive_check(const SimpleFunction<T>&, const SimpleFunction<T>&,    \
                                          const Exponent&);                                      \
  template bool is_equimeasurable(const SimpleFunction<T>&, const StepProfile<T>&);              \
  template LayerCake<T> layer_decompose(const SimpleFunction<T>&);                               \
  template SimpleFunction<T> layer_reconstruct(const LayerCake<T>&);                             \
  template std::pair<StepProfile<T>, StepProfile<T>> indicator_difference_rearrangement(         \
      const SimpleFunction<T>&, const T&);                                                       \
  template SimpleFunction<T> truncate(const SimpleFunction<T>&, const T&);                       \
  template std::vector<StepProfile<T>> truncation_ladder(const SimpleFunction<T>&, std::size_t);

RLAB_INSTANTIATE(Rational)
RLAB_INSTANTIATE(double)
RLAB_INSTANTIATE(Quad)

#undef RLAB_INSTANTIATE

}  // namespace rlab
