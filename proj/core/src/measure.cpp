#include "rlab/measure.hpp"

#include <algorithm>
#include <string>

namespace rlab {

AtomSet AtomSet::all(std::size_t universe) {
  AtomSet s(universe);
  s.mask_.assign(universe, true);
  return s;
}

AtomSet AtomSet::from_indices(std::size_t universe, std::span<const std::size_t> indices) {
  AtomSet s(universe);
  for (std::size_t i : indices) s.insert(i);
  return s;
}

std::size_t AtomSet::size() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), true));
}

void AtomSet::insert(std::size_t i) {
  if (i >= mask_.size()) {
    throw InvalidInput("atom index " + std::to_string(i) + " outside universe of size " +
                       std::to_string(mask_.size()));
  }
  mask_[i] = true;
}

std::vector<std::size_t> AtomSet::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    if (mask_[i]) out.push_back(i);
  }
  return out;
}

void AtomSet::check_universe(const AtomSet& other) const {
  if (other.universe() != universe()) throw InvalidInput("atom sets over different universes");
}

AtomSet AtomSet::complement() const {
  AtomSet s(universe());
  for (std::size_t i = 0; i < mask_.size(); ++i) s.mask_[i] = !mask_[i];
  return s;
}

AtomSet AtomSet::intersect(const AtomSet& other) const {
  check_universe(other);
  AtomSet s(universe());
  for (std::size_t i = 0; i < mask_.size(); ++i) s.mask_[i] = mask_[i] && other.mask_[i];
  return s;
}

AtomSet AtomSet::unite(const AtomSet& other) const {
  check_universe(other);
  AtomSet s(universe());
  for (std::size_t i = 0; i < mask_.size(); ++i) s.mask_[i] = mask_[i] || other.mask_[i];
  return s;
}

AtomSet AtomSet::minus(const AtomSet& other) const {
  check_universe(other);
  AtomSet s(universe());
  for (std::size_t i = 0; i < mask_.size(); ++i) s.mask_[i] = mask_[i] && !other.mask_[i];
  return s;
}

bool AtomSet::is_subset_of(const AtomSet& other) const {
  check_universe(other);
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    if (mask_[i] && !other.mask_[i]) return false;
  }
  return true;
}

template <Scalar T>
DiscreteSpace<T>::DiscreteSpace(std::vector<T> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidSpace("a probability space needs at least one atom");
  T total = 0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0)) {
      throw InvalidSpace("atom " + std::to_string(i) + " has non-positive weight " +
                         to_string(weights_[i]));
    }
    total += weights_[i];
  }
  if constexpr (is_exact_v<T>) {
    if (total != 1) throw InvalidSpace("weights sum to " + to_string(total) + ", not 1");
  } else {
    if (!(abs_of(T(total - 1)) <= T(kFloatRelTol))) {
      throw InvalidSpace("weights sum to " + to_string(total) + ", not 1 within 2^-40");
    }
  }
  equal_atoms_ = std::all_of(weights_.begin(), weights_.end(),
                             [&](const T& w) { return w == weights_.front(); });
}

template <Scalar T>
SpacePtr<T> DiscreteSpace<T>::uniform(std::size_t atoms) {
  if (atoms == 0) throw InvalidSpace("a probability space needs at least one atom");
  T w = T(1) / T(static_cast<long>(atoms));
  return make(std::vector<T>(atoms, w));
}

template <Scalar T>
T DiscreteSpace<T>::measure(const AtomSet& set) const {
  if (set.universe() != size()) throw InvalidInput("atom set does not match the space");
  T total = 0;
  for (std::size_t i : set.indices()) total += weights_[i];
  return total;
}

template <Scalar T>
SimpleFunction<T>::SimpleFunction(SpacePtr<T> space, std::vector<T> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw InvalidInput("function without a space");
  if (values_.size() != space_->size()) {
    throw InvalidInput("function has " + std::to_string(values_.size()) + " values but the space has " +
                       std::to_string(space_->size()) + " atoms");
  }
}

template <Scalar T>
SimpleFunction<T> SimpleFunction<T>::zero(SpacePtr<T> space) {
  const std::size_t n = space->size();
  return SimpleFunction(std::move(space), std::vector<T>(n, T(0)));
}

template <Scalar T>
SimpleFunction<T> SimpleFunction<T>::constant(SpacePtr<T> space, const T& c) {
  const std::size_t n = space->size();
  return SimpleFunction(std::move(space), std::vector<T>(n, c));
}

template <Scalar T>
SimpleFunction<T> SimpleFunction<T>::indicator(SpacePtr<T> space, const AtomSet& set) {
  std::vector<T> v(space->size(), T(0));
  if (set.universe() != v.size()) throw InvalidInput("atom set does not match the space");
  for (std::size_t i : set.indices()) v[i] = 1;
  return SimpleFunction(std::move(space), std::move(v));
}

template <Scalar T>
bool SimpleFunction<T>::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](const T& v) { return v == 0; });
}

template <Scalar T>
SimpleFunction<T> SimpleFunction<T>::abs() const {
  SimpleFunction out = *this;
  for (auto& v : out.values_) v = abs_of(v);
  return out;
}

template <Scalar T>
SimpleFunction<T> SimpleFunction<T>::operator-() const {
  SimpleFunction out = *this;
  for (auto& v : out.values_) v = -v;
  return out;
}

template <Scalar T>
void SimpleFunction<T>::check_compatible(const SimpleFunction& other) const {
  if (space_ != other.space_ && !(*space_ == *other.space_)) {
    throw PreconditionViolated("functions live on different spaces");
  }
}

template <Scalar T>
SimpleFunction<T>& SimpleFunction<T>::operator+=(const SimpleFunction& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

template <Scalar T>
SimpleFunction<T>& SimpleFunction<T>::operator-=(const SimpleFunction& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

template <Scalar T>
SimpleFunction<T>& SimpleFunction<T>::operator*=(const SimpleFunction& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= other.values_[i];
  return *this;
}

template <Scalar T>
SimpleFunction<T>& SimpleFunction<T>::operator*=(const T& scale) {
  for (auto& v : values_) v *= scale;
  return *this;
}

template <Scalar T>
void require_same_space(const SimpleFunction<T>& a, const SimpleFunction<T>& b) {
  if (a.space_ptr() != b.space_ptr() && !(a.space() == b.space())) {
    throw PreconditionViolated("functions live on different spaces");
  }
}

template <Scalar T>
T integrate(const SimpleFunction<T>& f) {
  T total = 0;
  const auto& w = f.space().weights();
  for (std::size_t i = 0; i < f.size(); ++i) total += f[i] * w[i];
  return total;
}

template <Scalar T>
SimpleFunction<T> center(const SimpleFunction<T>& f) {
  const T mean = integrate(f);
  std::vector<T> v = f.values();
  for (auto& x : v) x -= mean;
  return SimpleFunction<T>(f.space_ptr(), std::move(v));
}

template <Scalar T>
AtomSet support(const SimpleFunction<T>& f) {
  AtomSet s(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] != 0) s.insert(i);
  }
  return s;
}

template <Scalar T>
std::pair<SimpleFunction<T>, SimpleFunction<T>> pos_neg_parts(const SimpleFunction<T>& f) {
  std::vector<T> pos(f.size(), T(0));
  std::vector<T> neg(f.size(), T(0));
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] > 0) pos[i] = f[i];
    if (f[i] < 0) neg[i] = -f[i];
  }
  return {SimpleFunction<T>(f.space_ptr(), std::move(pos)),
          SimpleFunction<T>(f.space_ptr(), std::move(neg))};
}

template <Scalar T>
T lp_integral(const SimpleFunction<T>& f, const Exponent& p) {
  T total = 0;
  const auto& w = f.space().weights();
  for (std::size_t i = 0; i < f.size(); ++i) total += power(abs_of(f[i]), p) * w[i];
  return total;
}

template <Scalar T>
T sup_abs(const SimpleFunction<T>& f) {
  T best = 0;
  for (const auto& v : f.values()) best = max_of(best, abs_of(v));
  return best;
}

#define RLAB_INSTANTIATE(T)                                                                   \
  template class DiscreteSpace<T>;                                                            \
  template class SimpleFunction<T>;                                                           \
  template void require_same_space(const SimpleFunction<T>&, const SimpleFunction<T>&);       \
  template T integrate(const SimpleFunction<T>&);                                             \
  template SimpleFunction<T> center(const SimpleFunction<T>&);                                \
  template AtomSet support(const SimpleFunction<T>&);                                         \
  template std::pair<SimpleFunction<T>, SimpleFunction<T>> pos_neg_parts(const SimpleFunction<T>&); \
  template T lp_integral(const SimpleFunction<T>&, const Exponent&);                          \
  template T sup_abs(const SimpleFunction<T>&);

RLAB_INSTANTIATE(Rational)
RLAB_INSTANTIATE(double)
RLAB_INSTANTIATE(Quad)

#undef RLAB_INSTANTIATE

}  // namespace rlab
