#include "rlab/instance.hpp"

namespace rlab {

const std::vector<Rational>& Instance::values(const std::string& name) const {
  auto it = functions.find(name);
  if (it == functions.end()) throw InvalidInput("instance has no function named '" + name + "'");
  if (it->second.size() != weights.size()) {
    throw InvalidInput("function '" + name + "' has " + std::to_string(it->second.size()) +
                       " values for " + std::to_string(weights.size()) + " atoms");
  }
  return it->second;
}

Mode Instance::natural_mode() const {
  if (weights.empty()) throw InvalidSpace("space has no atoms");
  Rational total = 0;
  for (const auto& w : weights) {
    if (w <= 0) throw InvalidSpace("weight " + to_string(w) + " is not positive");
    total += w;
  }
  if (total == 1) return Mode::Exact;
  if (fraction_literals) {
    throw InvalidSpace("rational weights sum to " + to_string(total) + ", not exactly 1");
  }
  const Rational deviation = total > 1 ? Rational(total - 1) : Rational(1 - total);
  if (deviation <= Rational(kFloatRelTol)) return Mode::Float;
  throw InvalidSpace("weights sum to " + to_string(total) + ", not 1");
}

}  // namespace rlab
