#pragma once

// The bilinear oscillation form
//
//   I_{A,B}(f,g,h) = Σ_{y∈A} Σ_{x∈B} (f(x)+f(y)) (g(x)-g(y)) h(y) μ(x) μ(y),
//
// the difference calculus on Ω×Ω, and the peeling of a zero-mean simple
// function into zero-mean two-level blocks with nested supports.

#include <cstddef>
#include <tuple>
#include <vector>

#include "rlab/measure.hpp"
#include "rlab/rearrange.hpp"

namespace rlab {

// Kernels on Ω×Ω are stored densely only up to this many atoms; the
// pairwise checks stream over pairs instead of materializing.
inline constexpr std::size_t kMaxKernelAtoms = 512;

// n×n kernel K(x, y), row-major in x.
template <Scalar T>
class ProductKernel {
 public:
  ProductKernel(SpacePtr<T> space, std::vector<T> values);

  static ProductKernel zero(SpacePtr<T> space);

  std::size_t atoms() const { return space_->size(); }
  const DiscreteSpace<T>& space() const { return *space_; }
  const SpacePtr<T>& space_ptr() const { return space_; }
  const T& operator()(std::size_t x, std::size_t y) const { return values_[x * atoms() + y]; }

  // (mK)(x, y) = m(x) K(x, y)
  ProductKernel left(const SimpleFunction<T>& m) const;
  // (Km)(x, y) = m(y) K(x, y)
  ProductKernel right(const SimpleFunction<T>& m) const;

  ProductKernel& operator+=(const ProductKernel& other);
  friend ProductKernel operator+(ProductKernel a, const ProductKernel& b) { return a += b; }

  friend bool operator==(const ProductKernel& a, const ProductKernel& b) {
    return a.values_ == b.values_ && *a.space_ == *b.space_;
  }

 private:
  SpacePtr<T> space_;
  std::vector<T> values_;
};

template <Scalar T>
T bilinear_form(const AtomSet& A, const AtomSet& B, const SimpleFunction<T>& f,
                const SimpleFunction<T>& g, const SimpleFunction<T>& h);

// max over atom pairs of the discrepancy in
//   f(x)g(x) - f(y)g(y) = ½(f(x)+f(y))(g(x)-g(y)) + ½(f(x)-f(y))(g(x)+g(y)).
template <Scalar T>
T product_identity_check(const SimpleFunction<T>& f, const SimpleFunction<T>& g);

// (∂f)(x, y) = f(x) - f(y).
template <Scalar T>
ProductKernel<T> derivation(const SimpleFunction<T>& f);

// Divergence-convention adjoint:
//   (∂*K)(z) = Σ_x K(x, z) μ(x) - Σ_y K(z, y) μ(y),
// so that ∂*∂f = -2(f - f_Ω) and ⟨∂u, K⟩_{μ⊗μ} = -⟨u, ∂*K⟩_μ.
template <Scalar T>
SimpleFunction<T> derivation_adjoint(const ProductKernel<T>& K);

// ⟨K, L⟩ = Σ K(x,y) L(x,y) μ(x) μ(y).
template <Scalar T>
T kernel_inner(const ProductKernel<T>& K, const ProductKernel<T>& L);

// (‖f - f_Ω‖₂², ½ Σ (f(x)-f(y))² μ(x)μ(y), ½ ‖∂f‖²).
template <Scalar T>
std::tuple<T, T, T> variance_identity_check(const SimpleFunction<T>& f);

// (I_{G^c,G} + I_{G,G^c},  2 Σ_{y∈G} Σ_{x∈G^c} |g(y)| 1_F(x,y) 1_H(x,y) μ(x)μ(y))
// with G = supp g, 1_F(x,y) = 1_f(x) ∨ 1_f(y), and likewise 1_H.
// Requires ∫g = 0, f valued in {-1, 0, 1} and |h| ≤ 1.
template <Scalar T>
std::pair<T, T> lemma31_bound(const SimpleFunction<T>& f, const SimpleFunction<T>& g,
                              const SimpleFunction<T>& h);

// g_i = a 1_A - b 1_B with a μ(A) = b μ(B).
struct ZeroMeanBlock {
  Rational a;
  AtomSet A;
  Rational b;
  AtomSet B;

  SimpleFunction<Rational> to_function(const SpacePtr<Rational>& space) const;
  AtomSet support() const { return A.unite(B); }

  friend bool operator==(const ZeroMeanBlock&, const ZeroMeanBlock&) = default;
};

struct BlockDecomposition {
  SpacePtr<Rational> space;
  std::vector<ZeroMeanBlock> blocks;

  SimpleFunction<Rational> sum() const;
  // Σ_i g_i*.
  StepProfile<Rational> profile_sum() const;
};

// Peels g into zero-mean two-level blocks, smallest levels first. Each round
// takes P = {r > 0}, N = {r < 0}, a = min r on P, b = min |r| on N and emits
// (a, P, a μ(P)/μ(N), N) if a μ(P) ≤ b μ(N), else (b μ(N)/μ(P), P, b, N).
// Throws NotZeroMean or EmptyInput.
BlockDecomposition zero_mean_decompose(const SimpleFunction<Rational>& g);

}  // namespace rlab
