#pragma once

// Rearrangement-invariant norms on finite probability spaces.
//
// The family is closed under two constructions: the generated norm
// ‖|f|^p‖_X^{1/p} and the associate (Köthe dual) norm
// ‖h‖_{X'} = sup{ ∫ f h dμ : ‖f‖_X ≤ 1 }. Every kind except plain Lp needs
// an equal-atom space; there ‖f‖_X only depends on f* sampled on the atom
// lattice k/n, which is how all non-Lp kinds are evaluated.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rlab/measure.hpp"
#include "rlab/rearrange.hpp"

namespace rlab {

// Concave, nondecreasing, piecewise-linear φ on [0, 1] with φ(0) = 0 and
// φ(1) = 1, given by its breakpoints.
class ConcaveWeight {
 public:
  struct Point {
    Rational t;
    Rational phi;

    friend bool operator==(const Point&, const Point&) = default;
  };

  explicit ConcaveWeight(std::vector<Point> points);

  const std::vector<Point>& points() const { return points_; }
  // Linear interpolation; clamps to φ(1) beyond t = 1.
  Rational operator()(const Rational& t) const;
  template <Scalar T>
  T at(const T& t) const;

  friend bool operator==(const ConcaveWeight&, const ConcaveWeight&) = default;

 private:
  std::vector<Point> points_;
};

class RINorm {
 public:
  enum class Kind { Lp, Lorentz, Generated, Associate };

  static RINorm lp(Exponent p);
  static RINorm lorentz(ConcaveWeight phi);
  static RINorm generated(RINorm base, Exponent p);
  static RINorm associate(RINorm base);

  Kind kind() const { return kind_; }
  // Lp and Generated only.
  const Exponent& exponent() const;
  // Lorentz only.
  const ConcaveWeight& weight() const;
  // Generated and Associate only.
  const RINorm& base() const;

  bool requires_equal_atoms() const { return kind_ != Kind::Lp; }
  std::string describe() const;

  friend bool operator==(const RINorm& a, const RINorm& b);

 private:
  RINorm(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::optional<Exponent> exponent_;
  std::optional<ConcaveWeight> weight_;
  std::shared_ptr<const RINorm> base_;
};

// Generated norms over Lp collapse to Lp: ‖|f|^p‖_q^{1/p} = ‖f‖_{pq}.
// Returns the input unchanged when no collapse applies.
RINorm simplify(const RINorm& norm);

template <Scalar T>
T norm(const RINorm& X, const SimpleFunction<T>& f);

// Evaluates X on a rearrangement. `atoms` is the atom count of the
// equal-atom space the profile came from (ignored for Lp).
template <Scalar T>
T norm(const RINorm& X, const StepProfile<T>& profile, std::size_t atoms);

// ‖h‖_{X'}; equal-atom spaces only.
template <Scalar T>
T associate_norm(const RINorm& X, const SimpleFunction<T>& h);

// (∫|fg| dμ, ∫ f* g* dt).
template <Scalar T>
std::pair<T, T> hardy_littlewood_check(const SimpleFunction<T>& f, const SimpleFunction<T>& g);

template <Scalar T>
struct HolderChain {
  T pairing;     // ∫|fg| dμ
  T rearranged;  // ∫ f* g* dt
  T product;     // ‖f‖_X ‖g‖_{X'}
};

template <Scalar T>
HolderChain<T> holder_check(const RINorm& X, const SimpleFunction<T>& f, const SimpleFunction<T>& g);

// (‖f‖_X, ‖f‖_{X''}).
template <Scalar T>
std::pair<T, T> lorentz_luxemburg_check(const RINorm& X, const SimpleFunction<T>& f);

}  // namespace rlab
