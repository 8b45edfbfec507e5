#include "rlab/norms.hpp"

#include <algorithm>

namespace rlab {

namespace {

template <Scalar T>
T lattice_phi(const ConcaveWeight& phi, std::size_t k, std::size_t n) {
  return from_rational<T>(phi(Rational(static_cast<long>(k), static_cast<long>(n))));
}

template <Scalar T>
T finite_lp_on_atoms(const std::vector<T>& desc, const Exponent& p) {
  if (desc.empty()) return 0;
  if (p.is_infinite()) return desc.front();
  T total = 0;
  for (const auto& v : desc) total += power(v, p);
  total /= T(static_cast<long>(desc.size()));
  return root(total, p);
}

template <Scalar T>
T norm_on_atoms(const RINorm& X, const std::vector<T>& desc);

// sup over nonincreasing g ≥ 0 of (1/n) Σ desc_i g_i / ‖g‖_X.
template <Scalar T>
T associate_on_atoms(const RINorm& X, const std::vector<T>& desc) {
  const std::size_t n = desc.size();
  switch (X.kind()) {
    case RINorm::Kind::Lp:
      return finite_lp_on_atoms(desc, X.exponent().conjugate());
    case RINorm::Kind::Lorentz: {
      // The unit ball of Λ_φ inside the nonincreasing cone is the convex
      // hull of 1_{[0,k/n)} / φ(k/n), so the sup is a max over k.
      T best = 0;
      T partial = 0;
      for (std::size_t k = 1; k <= n; ++k) {
        partial += desc[k - 1];
        T ratio = partial / T(static_cast<long>(n)) / lattice_phi<T>(X.weight(), k, n);
        best = max_of(best, ratio);
      }
      return best;
    }
    case RINorm::Kind::Generated: {
      RINorm reduced = simplify(X);
      if (reduced.kind() == RINorm::Kind::Generated) {
        throw UnsupportedNorm("no closed form for the associate of " + X.describe());
      }
      return associate_on_atoms(reduced, desc);
    }
    case RINorm::Kind::Associate: {
      const RINorm& inner = X.base();
      switch (inner.kind()) {
        case RINorm::Kind::Lp:
          // Dual exponent taken twice.
          return finite_lp_on_atoms(desc, inner.exponent().conjugate().conjugate());
        case RINorm::Kind::Lorentz: {
          // Unit ball of the Lorentz associate: prefix averages of g bounded
          // by φ(k/n). With nonincreasing desc, summation by parts shows the
          // optimum saturates every prefix constraint.
          T total = 0;
          for (std::size_t k = 1; k <= n; ++k) {
            T next = k < n ? desc[k] : T(0);
            total += (desc[k - 1] - next) * lattice_phi<T>(inner.weight(), k, n);
          }
          return total;
        }
        case RINorm::Kind::Associate:
          // Z''' = Z'.
          return associate_on_atoms(inner.base(), desc);
        case RINorm::Kind::Generated: {
          RINorm reduced = simplify(inner);
          if (reduced.kind() == RINorm::Kind::Generated) {
            throw UnsupportedNorm("no closed form for the associate of " + X.describe());
          }
          return associate_on_atoms(RINorm::associate(reduced), desc);
        }
      }
    }
  }
  throw UnsupportedNorm("unknown norm kind");
}

template <Scalar T>
T norm_on_atoms(const RINorm& X, const std::vector<T>& desc) {
  const std::size_t n = desc.size();
  switch (X.kind()) {
    case RINorm::Kind::Lp:
      return finite_lp_on_atoms(desc, X.exponent());
    case RINorm::Kind::Lorentz: {
      T total = 0;
      T previous = 0;
      for (std::size_t k = 1; k <= n; ++k) {
        T current = lattice_phi<T>(X.weight(), k, n);
        total += desc[k - 1] * (current - previous);
        previous = current;
      }
      return total;
    }
    case RINorm::Kind::Generated: {
      const Exponent& p = X.exponent();
      std::vector<T> powered;
      powered.reserve(n);
      for (const auto& v : desc) powered.push_back(power(v, p));
      return root(norm_on_atoms(X.base(), powered), p);
    }
    case RINorm::Kind::Associate:
      return associate_on_atoms(X.base(), desc);
  }
  throw UnsupportedNorm("unknown norm kind");
}

template <Scalar T>
void require_equal_atoms(const DiscreteSpace<T>& space, const RINorm& X) {
  if (!space.equal_atoms()) {
    throw NonEqualAtomSpace(X.describe() + " is only evaluated on equal-atom spaces");
  }
}

template <Scalar T>
std::vector<T> profile_to_atoms(const StepProfile<T>& profile, std::size_t atoms) {
  std::vector<T> desc;
  desc.reserve(atoms);
  for (const auto& s : profile.segments()) {
    T scaled = s.length * T(static_cast<long>(atoms));
    long count = 0;
    if constexpr (is_exact_v<T>) {
      if (denominator(scaled) != 1) {
        throw PreconditionViolated("profile breakpoints are not on the 1/" + std::to_string(atoms) +
                                   " lattice");
      }
      count = numerator(scaled).template convert_to<long>();
    } else {
      using std::round;
      T rounded = round(scaled);
      if (abs_of(T(scaled - rounded)) > T(1e-6)) {
        throw PreconditionViolated("profile breakpoints are not on the 1/" + std::to_string(atoms) +
                                   " lattice");
      }
      count = static_cast<long>(to_double(rounded));
    }
    for (long i = 0; i < count; ++i) desc.push_back(s.value);
  }
  if (desc.size() > atoms) throw PreconditionViolated("profile longer than the atom lattice");
  desc.resize(atoms, T(0));
  return desc;
}

}  // namespace

ConcaveWeight::ConcaveWeight(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw InvalidInput("concave weight needs at least two breakpoints");
  if (points_.front().t != 0 || points_.front().phi != 0) {
    throw InvalidInput("concave weight must start at (0, 0)");
  }
  if (points_.back().t != 1 || points_.back().phi != 1) {
    throw InvalidInput("concave weight must end at (1, 1)");
  }
  Rational previous_slope = 0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const Rational dt = points_[i].t - points_[i - 1].t;
    const Rational dphi = points_[i].phi - points_[i - 1].phi;
    if (dt <= 0) throw InvalidInput("concave weight breakpoints must be strictly increasing in t");
    if (dphi < 0) throw InvalidInput("concave weight must be nondecreasing");
    const Rational slope = dphi / dt;
    if (i > 1 && slope > previous_slope) throw InvalidInput("concave weight slopes must be nonincreasing");
    previous_slope = slope;
  }
}

Rational ConcaveWeight::operator()(const Rational& t) const {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (t <= points_[i].t) {
      const Point& a = points_[i - 1];
      const Point& b = points_[i];
      return a.phi + (b.phi - a.phi) * (t - a.t) / (b.t - a.t);
    }
  }
  return 1;
}

template <Scalar T>
T ConcaveWeight::at(const T& t) const {
  if constexpr (is_exact_v<T>) {
    return (*this)(t);
  } else {
    if (t <= 0) return 0;
    if (t >= 1) return 1;
    for (std::size_t i = 1; i < points_.size(); ++i) {
      const T bt = from_rational<T>(points_[i].t);
      if (t <= bt) {
        const T at_ = from_rational<T>(points_[i - 1].t);
        const T ap = from_rational<T>(points_[i - 1].phi);
        const T bp = from_rational<T>(points_[i].phi);
        return ap + (bp - ap) * (t - at_) / (bt - at_);
      }
    }
    return 1;
  }
}

RINorm RINorm::lp(Exponent p) {
  RINorm n(Kind::Lp);
  n.exponent_ = p;
  return n;
}

RINorm RINorm::lorentz(ConcaveWeight phi) {
  RINorm n(Kind::Lorentz);
  n.weight_ = std::move(phi);
  return n;
}

RINorm RINorm::generated(RINorm base, Exponent p) {
  if (p.is_infinite()) throw InvalidInput("generated norms need a finite exponent");
  RINorm n(Kind::Generated);
  n.exponent_ = p;
  n.base_ = std::make_shared<const RINorm>(std::move(base));
  return n;
}

RINorm RINorm::associate(RINorm base) {
  RINorm n(Kind::Associate);
  n.base_ = std::make_shared<const RINorm>(std::move(base));
  return n;
}

const Exponent& RINorm::exponent() const {
  if (!exponent_) throw InvalidInput(describe() + " has no exponent");
  return *exponent_;
}

const ConcaveWeight& RINorm::weight() const {
  if (!weight_) throw InvalidInput(describe() + " has no concave weight");
  return *weight_;
}

const RINorm& RINorm::base() const {
  if (!base_) throw InvalidInput(describe() + " has no base norm");
  return *base_;
}

std::string RINorm::describe() const {
  switch (kind_) {
    case Kind::Lp:
      return "L^" + exponent_->to_string();
    case Kind::Lorentz: {
      std::string s = "Lambda_phi[";
      for (std::size_t i = 0; i < weight_->points().size(); ++i) {
        const auto& p = weight_->points()[i];
        if (i > 0) s += ",";
        s += "(" + to_string(p.t) + "," + to_string(p.phi) + ")";
      }
      return s + "]";
    }
    case Kind::Generated:
      return "generated(" + base_->describe() + ", " + exponent_->to_string() + ")";
    case Kind::Associate:
      return "associate(" + base_->describe() + ")";
  }
  return "?";
}

bool operator==(const RINorm& a, const RINorm& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case RINorm::Kind::Lp:
      return *a.exponent_ == *b.exponent_;
    case RINorm::Kind::Lorentz:
      return *a.weight_ == *b.weight_;
    case RINorm::Kind::Generated:
      return *a.exponent_ == *b.exponent_ && *a.base_ == *b.base_;
    case RINorm::Kind::Associate:
      return *a.base_ == *b.base_;
  }
  return false;
}

RINorm simplify(const RINorm& X) {
  if (X.kind() != RINorm::Kind::Generated) return X;
  const Exponent& p = X.exponent();
  RINorm inner = simplify(X.base());
  if (p.is_one()) return inner;
  if (inner.kind() == RINorm::Kind::Lp) {
    const Exponent& q = inner.exponent();
    if (q.is_infinite()) return RINorm::lp(Exponent::infinity());
    return RINorm::lp(Exponent::finite(p.value() * q.value()));
  }
  return RINorm::generated(inner, p);
}

template <Scalar T>
T norm(const RINorm& X, const SimpleFunction<T>& f) {
  if (X.kind() == RINorm::Kind::Lp) {
    const Exponent& p = X.exponent();
    if (p.is_infinite()) return sup_abs(f);
    return root(lp_integral(f, p), p);
  }
  require_equal_atoms(f.space(), X);
  return norm_on_atoms(X, sorted_abs_desc(f));
}

template <Scalar T>
T norm(const RINorm& X, const StepProfile<T>& profile, std::size_t atoms) {
  if (X.kind() == RINorm::Kind::Lp) {
    const Exponent& p = X.exponent();
    if (p.is_infinite()) return profile.sup();
    return root(profile_lp_integral(profile, p), p);
  }
  if (X.kind() == RINorm::Kind::Lorentz) {
    // Stieltjes sum ∫ f* dφ over the profile's own breakpoints.
    T total = 0;
    T start = 0;
    for (const auto& s : profile.segments()) {
      T end = start + s.length;
      total += s.value * (X.weight().at(end) - X.weight().at(start));
      start = end;
    }
    return total;
  }
  return norm_on_atoms(X, profile_to_atoms(profile, atoms));
}

template <Scalar T>
T associate_norm(const RINorm& X, const SimpleFunction<T>& h) {
  RINorm dual = RINorm::associate(X);
  require_equal_atoms(h.space(), dual);
  return associate_on_atoms(X, sorted_abs_desc(h));
}

template <Scalar T>
std::pair<T, T> hardy_littlewood_check(const SimpleFunction<T>& f, const SimpleFunction<T>& g) {
  require_same_space(f, g);
  const T pairing = integrate((f * g).abs());
  const StepProfile<T> profiles[] = {decreasing_rearrangement(f), decreasing_rearrangement(g)};
  return {pairing, profile_integrate_product<T>(profiles)};
}

template <Scalar T>
HolderChain<T> holder_check(const RINorm& X, const SimpleFunction<T>& f, const SimpleFunction<T>& g) {
  auto [pairing, rearranged] = hardy_littlewood_check(f, g);
  T dual;
  if (X.kind() == RINorm::Kind::Lp) {
    dual = norm(RINorm::lp(X.exponent().conjugate()), g);
  } else {
    dual = associate_norm(X, g);
  }
  return {pairing, rearranged, T(norm(X, f) * dual)};
}

template <Scalar T>
std::pair<T, T> lorentz_luxemburg_check(const RINorm& X, const SimpleFunction<T>& f) {
  require_equal_atoms(f.space(), RINorm::associate(X));
  return {norm(X, f), norm(RINorm::associate(RINorm::associate(X)), f)};
}

#define RLAB_INSTANTIATE(T)                                                                    \
  template T ConcaveWeight::at(const T&) const;                                                \
  template T norm(const RINorm&, const SimpleFunction<T>&);                                    \
  template T norm(const RINorm&, const StepProfile<T>&, std::size_t);                          \
  template T associate_norm(const RINorm&, const SimpleFunction<T>&);                          \
  template std::pair<T, T> hardy_littlewood_check(const SimpleFunction<T>&,                    \
                                                  const SimpleFunction<T>&);                   \
  template HolderChain<T> holder_check(const RINorm&, const SimpleFunction<T>&,                \
                                       const SimpleFunction<T>&);                              \
  template std::pair<T, T> lorentz_luxemburg_check(const RINorm&, const SimpleFunction<T>&);

RLAB_INSTANTIATE(Rational)
RLAB_INSTANTIATE(double)
RLAB_INSTANTIATE(Quad)

#undef RLAB_INSTANTIATE

}  // namespace rlab
