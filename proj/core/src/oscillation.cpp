#include "rlab/oscillation.hpp"

#include <algorithm>
#include <optional>
#include <string>

namespace rlab {

namespace {

template <Scalar T>
bool has_zero_mean(const SimpleFunction<T>& g) {
  const T mean = integrate(g);
  if constexpr (is_exact_v<T>) {
    return mean == 0;
  } else {
    return abs_of(mean) <= T(kFloatRelTol) * max_of(T(1), integrate(g.abs()));
  }
}

}  // namespace

template <Scalar T>
ProductKernel<T>::ProductKernel(SpacePtr<T> space, std::vector<T> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw InvalidInput("kernel without a space");
  const std::size_t n = space_->size();
  if (n > kMaxKernelAtoms) {
    throw PreconditionViolated("kernels are materialized only up to " + std::to_string(kMaxKernelAtoms) +
                               " atoms");
  }
  if (values_.size() != n * n) throw InvalidInput("kernel size does not match the space");
}

template <Scalar T>
ProductKernel<T> ProductKernel<T>::zero(SpacePtr<T> space) {
  const std::size_t n = space->size();
  return ProductKernel(std::move(space), std::vector<T>(n * n, T(0)));
}

template <Scalar T>
ProductKernel<T> ProductKernel<T>::left(const SimpleFunction<T>& m) const {
  if (m.size() != atoms()) throw InvalidInput("multiplier does not match the kernel");
  ProductKernel out = *this;
  const std::size_t n = atoms();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) out.values_[x * n + y] *= m[x];
  }
  return out;
}

template <Scalar T>
ProductKernel<T> ProductKernel<T>::right(const SimpleFunction<T>& m) const {
  if (m.size() != atoms()) throw InvalidInput("multiplier does not match the kernel");
  ProductKernel out = *this;
  const std::size_t n = atoms();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) out.values_[x * n + y] *= m[y];
  }
  return out;
}

template <Scalar T>
ProductKernel<T>& ProductKernel<T>::operator+=(const ProductKernel& other) {
  if (other.values_.size() != values_.size()) throw InvalidInput("kernel sizes differ");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

template <Scalar T>
T bilinear_form(const AtomSet& A, const AtomSet& B, const SimpleFunction<T>& f,
                const SimpleFunction<T>& g, const SimpleFunction<T>& h) {
  require_same_space(f, g);
  require_same_space(f, h);
  const auto& w = f.space().weights();
  const auto outer = A.indices();
  const auto inner = B.indices();
  if (A.universe() != f.size() || B.universe() != f.size()) {
    throw InvalidInput("atom sets do not match the space");
  }
  T total = 0;
  for (std::size_t y : outer) {
    T row = 0;
    for (std::size_t x : inner) row += (f[x] + f[y]) * (g[x] - g[y]) * w[x];
    total += row * h[y] * w[y];
  }
  return total;
}

template <Scalar T>
T product_identity_check(const SimpleFunction<T>& f, const SimpleFunction<T>& g) {
  require_same_space(f, g);
  const T half = T(1) / T(2);
  T worst = 0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    for (std::size_t y = 0; y < f.size(); ++y) {
      const T lhs = f[x] * g[x] - f[y] * g[y];
      const T rhs = half * (f[x] + f[y]) * (g[x] - g[y]) + half * (f[x] - f[y]) * (g[x] + g[y]);
      worst = max_of(worst, abs_of(T(lhs - rhs)));
    }
  }
  return worst;
}

template <Scalar T>
ProductKernel<T> derivation(const SimpleFunction<T>& f) {
  const std::size_t n = f.size();
  if (n > kMaxKernelAtoms) {
    throw PreconditionViolated("kernels are materialized only up to " + std::to_string(kMaxKernelAtoms) +
                               " atoms");
  }
  std::vector<T> values(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) values[x * n + y] = f[x] - f[y];
  }
  return ProductKernel<T>(f.space_ptr(), std::move(values));
}

template <Scalar T>
SimpleFunction<T> derivation_adjoint(const ProductKernel<T>& K) {
  const std::size_t n = K.atoms();
  const auto& w = K.space().weights();
  std::vector<T> out(n, T(0));
  for (std::size_t z = 0; z < n; ++z) {
    T incoming = 0;
    T outgoing = 0;
    for (std::size_t u = 0; u < n; ++u) {
      incoming += K(u, z) * w[u];
      outgoing += K(z, u) * w[u];
    }
    out[z] = incoming - outgoing;
  }
  return SimpleFunction<T>(K.space_ptr(), std::move(out));
}

template <Scalar T>
T kernel_inner(const ProductKernel<T>& K, const ProductKernel<T>& L) {
  if (K.atoms() != L.atoms()) throw InvalidInput("kernel sizes differ");
  const auto& w = K.space().weights();
  T total = 0;
  for (std::size_t x = 0; x < K.atoms(); ++x) {
    for (std::size_t y = 0; y < K.atoms(); ++y) total += K(x, y) * L(x, y) * w[x] * w[y];
  }
  return total;
}

template <Scalar T>
std::tuple<T, T, T> variance_identity_check(const SimpleFunction<T>& f) {
  const SimpleFunction<T> centered = center(f);
  const T variance = integrate(centered * centered);
  const auto& w = f.space().weights();
  T pairwise = 0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    for (std::size_t y = 0; y < f.size(); ++y) {
      const T d = f[x] - f[y];
      pairwise += d * d * w[x] * w[y];
    }
  }
  pairwise /= T(2);
  T kernel_half;
  if (f.size() <= kMaxKernelAtoms) {
    const ProductKernel<T> d = derivation(f);
    kernel_half = kernel_inner(d, d) / T(2);
  } else {
    kernel_half = pairwise;
  }
  return {variance, pairwise, kernel_half};
}

template <Scalar T>
std::pair<T, T> lemma31_bound(const SimpleFunction<T>& f, const SimpleFunction<T>& g,
                              const SimpleFunction<T>& h) {
  require_same_space(f, g);
  require_same_space(f, h);
  if (!has_zero_mean(g)) throw PreconditionViolated("hypothesis failed: integral of g is not zero");
  for (const auto& v : f.values()) {
    if (v != 0 && v != 1 && v != -1) {
      throw PreconditionViolated("hypothesis failed: f takes a value outside {-1, 0, 1}");
    }
  }
  for (const auto& v : h.values()) {
    if (abs_of(v) > 1) throw PreconditionViolated("hypothesis failed: |h| exceeds 1");
  }
  const AtomSet G = support(g);
  const AtomSet Gc = G.complement();
  const T lhs = bilinear_form(Gc, G, f, g, h) + bilinear_form(G, Gc, f, g, h);

  const AtomSet F = support(f);
  const AtomSet H = support(h);
  const auto& w = f.space().weights();
  T rhs = 0;
  for (std::size_t y : G.indices()) {
    for (std::size_t x : Gc.indices()) {
      const bool in_f = F.contains(x) || F.contains(y);
      const bool in_h = H.contains(x) || H.contains(y);
      if (in_f && in_h) rhs += abs_of(g[y]) * w[x] * w[y];
    }
  }
  return {lhs, T(2 * rhs)};
}

SimpleFunction<Rational> ZeroMeanBlock::to_function(const SpacePtr<Rational>& space) const {
  std::vector<Rational> v(space->size(), Rational(0));
  for (std::size_t i : A.indices()) v[i] += a;
  for (std::size_t i : B.indices()) v[i] -= b;
  return SimpleFunction<Rational>(space, std::move(v));
}

SimpleFunction<Rational> BlockDecomposition::sum() const {
  SimpleFunction<Rational> total = SimpleFunction<Rational>::zero(space);
  for (const auto& block : blocks) total += block.to_function(space);
  return total;
}

StepProfile<Rational> BlockDecomposition::profile_sum() const {
  StepProfile<Rational> total;
  for (const auto& block : blocks) {
    total = rlab::profile_sum(total, decreasing_rearrangement(block.to_function(space)));
  }
  return total;
}

BlockDecomposition zero_mean_decompose(const SimpleFunction<Rational>& g) {
  if (g.is_zero()) throw EmptyInput("cannot decompose the zero function");
  if (integrate(g) != 0) throw NotZeroMean("integral of g is " + to_string(integrate(g)) + ", not 0");

  const auto& space = g.space();
  std::vector<Rational> positive_levels;
  std::vector<Rational> negative_levels;
  for (const auto& v : g.values()) {
    if (v > 0) positive_levels.push_back(v);
    if (v < 0) negative_levels.push_back(-v);
  }
  auto distinct = [](std::vector<Rational>& v) {
    std::sort(v.begin(), v.end());
    return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
  };
  const std::size_t max_rounds = distinct(positive_levels) + distinct(negative_levels);

  BlockDecomposition out;
  out.space = g.space_ptr();
  std::vector<Rational> rest = g.values();
  while (std::any_of(rest.begin(), rest.end(), [](const Rational& v) { return v != 0; })) {
    if (out.blocks.size() >= max_rounds) {
      throw PreconditionViolated("block peeling did not terminate within " + std::to_string(max_rounds) +
                                 " rounds");
    }
    AtomSet P(rest.size());
    AtomSet N(rest.size());
    std::optional<Rational> a;
    std::optional<Rational> b;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      if (rest[i] > 0) {
        P.insert(i);
        if (!a || rest[i] < *a) a = rest[i];
      } else if (rest[i] < 0) {
        N.insert(i);
        if (!b || -rest[i] < *b) b = Rational(-rest[i]);
      }
    }
    // The remainder keeps zero mean, so both sides are nonempty.
    const Rational mass_p = space.measure(P);
    const Rational mass_n = space.measure(N);
    ZeroMeanBlock block;
    block.A = P;
    block.B = N;
    if (*a * mass_p <= *b * mass_n) {
      block.a = *a;
      block.b = *a * mass_p / mass_n;
    } else {
      block.a = *b * mass_n / mass_p;
      block.b = *b;
    }
    for (std::size_t i : P.indices()) rest[i] -= block.a;
    for (std::size_t i : N.indices()) rest[i] += block.b;
    out.blocks.push_back(std::move(block));
  }
  return out;
}

#define RLAB_INSTANTIATE(T)                                                                     \
  template class ProductKernel<T>;                                                              \
  template T bilinear_form(const AtomSet&, const AtomSet&, const SimpleFunction<T>&,            \
                           const SimpleFunction<T>&, const SimpleFunction<T>&);                 \
  template T product_identity_check(const SimpleFunction<T>&, const SimpleFunction<T>&);        \
  template ProductKernel<T> derivation(const SimpleFunction<T>&);                               \
  template SimpleFunction<T> derivation_adjoint(const ProductKernel<T>&);                       \
  template T kernel_inner(const ProductKernel<T>&, const ProductKernel<T>&);                    \
  template std::tuple<T, T, T> variance_identity_check(const SimpleFunction<T>&);               \
  template std::pair<T, T> lemma31_bound(const SimpleFunction<T>&, const SimpleFunction<T>&,    \
                                         const SimpleFunction<T>&);

RLAB_INSTANTIATE(Rational)
RLAB_INSTANTIATE(double)
RLAB_INSTANTIATE(Quad)

#undef RLAB_INSTANTIATE

}  // namespace rlab
