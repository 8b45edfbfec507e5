#pragma once

// Finite probability spaces and the functions living on them.

#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "rlab/scalar.hpp"

namespace rlab {

// A subset of atom indices {0, ..., universe-1}.
class AtomSet {
 public:
  AtomSet() = default;
  explicit AtomSet(std::size_t universe) : mask_(universe, false) {}

  static AtomSet all(std::size_t universe);
  static AtomSet from_indices(std::size_t universe, std::span<const std::size_t> indices);

  std::size_t universe() const { return mask_.size(); }
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  bool contains(std::size_t i) const { return i < mask_.size() && mask_[i]; }
  void insert(std::size_t i);

  std::vector<std::size_t> indices() const;

  AtomSet complement() const;
  AtomSet intersect(const AtomSet& other) const;
  AtomSet unite(const AtomSet& other) const;
  AtomSet minus(const AtomSet& other) const;
  bool is_subset_of(const AtomSet& other) const;
  bool is_disjoint_from(const AtomSet& other) const { return intersect(other).empty(); }

  friend bool operator==(const AtomSet&, const AtomSet&) = default;

 private:
  void check_universe(const AtomSet& other) const;

  std::vector<bool> mask_;
};

// Probability space on n atoms. Weights are validated once and never change.
template <Scalar T>
class DiscreteSpace {
 public:
  explicit DiscreteSpace(std::vector<T> weights);

  static std::shared_ptr<const DiscreteSpace> make(std::vector<T> weights) {
    return std::make_shared<const DiscreteSpace>(std::move(weights));
  }
  static std::shared_ptr<const DiscreteSpace> uniform(std::size_t atoms);

  std::size_t size() const { return weights_.size(); }
  const std::vector<T>& weights() const { return weights_; }
  const T& weight(std::size_t i) const { return weights_[i]; }
  bool equal_atoms() const { return equal_atoms_; }

  T measure(const AtomSet& set) const;

  friend bool operator==(const DiscreteSpace& a, const DiscreteSpace& b) {
    return a.weights_ == b.weights_;
  }

 private:
  std::vector<T> weights_;
  bool equal_atoms_ = false;
};

template <Scalar T>
using SpacePtr = std::shared_ptr<const DiscreteSpace<T>>;

// One value per atom. Every function on a finite space is simple.
template <Scalar T>
class SimpleFunction {
 public:
  SimpleFunction(SpacePtr<T> space, std::vector<T> values);

  static SimpleFunction zero(SpacePtr<T> space);
  static SimpleFunction constant(SpacePtr<T> space, const T& c);
  static SimpleFunction indicator(SpacePtr<T> space, const AtomSet& set);

  const DiscreteSpace<T>& space() const { return *space_; }
  const SpacePtr<T>& space_ptr() const { return space_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<T>& values() const { return values_; }
  const T& operator[](std::size_t i) const { return values_[i]; }

  bool is_zero() const;
  SimpleFunction abs() const;

  SimpleFunction operator-() const;
  SimpleFunction& operator+=(const SimpleFunction& other);
  SimpleFunction& operator-=(const SimpleFunction& other);
  SimpleFunction& operator*=(const SimpleFunction& other);
  SimpleFunction& operator*=(const T& scale);

  friend SimpleFunction operator+(SimpleFunction a, const SimpleFunction& b) { return a += b; }
  friend SimpleFunction operator-(SimpleFunction a, const SimpleFunction& b) { return a -= b; }
  friend SimpleFunction operator*(SimpleFunction a, const SimpleFunction& b) { return a *= b; }
  friend SimpleFunction operator*(SimpleFunction a, const T& s) { return a *= s; }
  friend SimpleFunction operator*(const T& s, SimpleFunction a) { return a *= s; }

  friend bool operator==(const SimpleFunction& a, const SimpleFunction& b) {
    return a.values_ == b.values_ && *a.space_ == *b.space_;
  }

 private:
  void check_compatible(const SimpleFunction& other) const;

  SpacePtr<T> space_;
  std::vector<T> values_;
};

// Throws PreconditionViolated unless both functions live on the same space.
template <Scalar T>
void require_same_space(const SimpleFunction<T>& a, const SimpleFunction<T>& b);

template <Scalar T>
T integrate(const SimpleFunction<T>& f);

// f - ∫f dμ.
template <Scalar T>
SimpleFunction<T> center(const SimpleFunction<T>& f);

// Atoms with f ≠ 0. No thresholding in float mode.
template <Scalar T>
AtomSet support(const SimpleFunction<T>& f);

template <Scalar T>
std::pair<SimpleFunction<T>, SimpleFunction<T>> pos_neg_parts(const SimpleFunction<T>& f);

// ∫|f|^p dμ for finite p; exact for integer p in exact mode.
template <Scalar T>
T lp_integral(const SimpleFunction<T>& f, const Exponent& p);

// max |f|.
template <Scalar T>
T sup_abs(const SimpleFunction<T>& f);

// Mode conversion, used by rechecks (double -> Rational is exact).
template <Scalar To, Scalar From>
To convert_scalar(const From& x) {
  if constexpr (std::is_same_v<To, From>) {
    return x;
  } else if constexpr (is_exact_v<To>) {
    return to_rational(x);
  } else if constexpr (is_exact_v<From>) {
    return from_rational<To>(x);
  } else {
    return static_cast<To>(x);
  }
}

template <Scalar To, Scalar From>
SpacePtr<To> convert_space(const DiscreteSpace<From>& space) {
  std::vector<To> weights;
  weights.reserve(space.size());
  for (const auto& w : space.weights()) weights.push_back(convert_scalar<To>(w));
  return DiscreteSpace<To>::make(std::move(weights));
}

template <Scalar To, Scalar From>
SimpleFunction<To> convert_function(const SimpleFunction<From>& f, SpacePtr<To> space) {
  std::vector<To> values;
  values.reserve(f.size());
  for (const auto& v : f.values()) values.push_back(convert_scalar<To>(v));
  return SimpleFunction<To>(std::move(space), std::move(values));
}

}  // namespace rlab
