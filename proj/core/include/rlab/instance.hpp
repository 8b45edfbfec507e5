#pragma once

// A problem instance: a finite space plus named functions on it, held as
// exact rationals and materialized into whichever scalar mode a
// computation runs in.

#include <map>
#include <string>
#include <vector>

#include "rlab/measure.hpp"

namespace rlab {

struct Instance {
  std::vector<Rational> weights;
  std::map<std::string, std::vector<Rational>> functions;
  // Set when any literal used the "p/q" form, which pins exact mode.
  bool fraction_literals = false;

  std::size_t atoms() const { return weights.size(); }
  bool has(const std::string& name) const { return functions.count(name) != 0; }
  const std::vector<Rational>& values(const std::string& name) const;

  // Exact when the weights sum to exactly 1. Decimal-only instances whose
  // weights sum to 1 within 2^-40 run in float mode. Anything else is
  // rejected with InvalidSpace.
  Mode natural_mode() const;

  template <Scalar T>
  SpacePtr<T> space() const {
    std::vector<T> w;
    w.reserve(weights.size());
    for (const auto& x : weights) w.push_back(from_rational<T>(x));
    return DiscreteSpace<T>::make(std::move(w));
  }

  template <Scalar T>
  SimpleFunction<T> function(const std::string& name, const SpacePtr<T>& space) const {
    std::vector<T> v;
    for (const auto& x : values(name)) v.push_back(from_rational<T>(x));
    return SimpleFunction<T>(space, std::move(v));
  }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.weights == b.weights && a.functions == b.functions;
  }
};

// Builds an instance from typed functions sharing one space. Float values
// convert exactly.
template <Scalar T>
Instance make_instance(const DiscreteSpace<T>& space,
                       const std::map<std::string, const SimpleFunction<T>*>& functions) {
  Instance out;
  for (const auto& w : space.weights()) out.weights.push_back(to_rational(w));
  for (const auto& [name, f] : functions) {
    std::vector<Rational> v;
    for (const auto& x : f->values()) v.push_back(to_rational(x));
    out.functions.emplace(name, std::move(v));
  }
  return out;
}

}  // namespace rlab
