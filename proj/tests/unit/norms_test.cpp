#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "oracles.hpp"
#include "rlab/json_io.hpp"
#include "rlab/norms.hpp"

using namespace rlab;

namespace {

ConcaveWeight kink() {
  return ConcaveWeight({{Rational(0), Rational(0)}, {Rational(1, 4), Rational(1, 2)}, {Rational(1), Rational(1)}});
}

RINorm L(int p) { return RINorm::lp(Exponent::finite(p)); }
RINorm Linf() { return RINorm::lp(Exponent::infinity()); }

template <Scalar T>
SimpleFunction<T> uniform_fn(std::vector<T> v) {
  const auto s = DiscreteSpace<T>::uniform(v.size());
  return SimpleFunction<T>(s, std::move(v));
}

SimpleFunction<Rational> rat(std::initializer_list<int> v) {
  std::vector<Rational> out;
  for (int x : v) out.emplace_back(x);
  return uniform_fn(std::move(out));
}

double rel(double a, double b) { return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)}); }

}  // namespace

TEST(ConcaveWeight, Validation) {
  EXPECT_THROW(ConcaveWeight({{Rational(0), Rational(0)}}), InvalidInput);
  EXPECT_THROW(ConcaveWeight({{Rational(0), Rational(1, 2)}, {Rational(1), Rational(1)}}), InvalidInput);
  EXPECT_THROW(ConcaveWeight({{Rational(0), Rational(0)}, {Rational(1), Rational(1, 2)}}), InvalidInput);
  // Convex kink.
  EXPECT_THROW(ConcaveWeight({{Rational(0), Rational(0)}, {Rational(1, 2), Rational(1, 4)}, {Rational(1), Rational(1)}}),
               InvalidInput);
  EXPECT_THROW(ConcaveWeight({{Rational(0), Rational(0)}, {Rational(0), Rational(0)}, {Rational(1), Rational(1)}}),
               InvalidInput);
  const auto phi = kink();
  EXPECT_EQ(phi(Rational(1, 8)), Rational(1, 4));
  EXPECT_EQ(phi(Rational(5, 8)), Rational(3, 4));
  EXPECT_EQ(phi(Rational(2)), Rational(1));
  EXPECT_DOUBLE_EQ(phi.at(0.125), 0.25);
}

TEST(RINorm, DescribeAndSimplify) {
  EXPECT_EQ(L(2).describe(), "L^2");
  EXPECT_EQ(simplify(RINorm::generated(L(1), Exponent::finite(2))), L(2));
  EXPECT_EQ(simplify(RINorm::generated(L(3), Exponent::finite(2))), L(6));
  EXPECT_EQ(simplify(RINorm::generated(Linf(), Exponent::finite(2))), Linf());
  EXPECT_EQ(simplify(RINorm::generated(RINorm::lorentz(kink()), Exponent::finite(1))), RINorm::lorentz(kink()));
  EXPECT_EQ(simplify(RINorm::generated(RINorm::lorentz(kink()), Exponent::finite(2))).kind(), RINorm::Kind::Generated);
  EXPECT_THROW(RINorm::generated(L(1), Exponent::infinity()), InvalidInput);
  EXPECT_THROW((void)L(2).weight(), InvalidInput);
  EXPECT_THROW((void)L(2).base(), InvalidInput);
}

TEST(Norm, Examples) {
  EXPECT_NEAR(norm(L(2), uniform_fn<double>({3, 4})), std::sqrt(12.5), 1e-15);
  EXPECT_EQ(norm(Linf(), rat({3, -7, 2})), Rational(7));
  EXPECT_EQ(norm(L(1), rat({3, -7, 2})), Rational(4));
  EXPECT_NEAR(norm(RINorm::generated(L(1), Exponent::finite(2)), uniform_fn<double>({3, 4})), std::sqrt(12.5), 1e-15);
  EXPECT_THROW(norm(L(2), rat({3, 4})), InexactOperation);
  // Λ_φ with φ(1/2) = 2/3 on two atoms: 4·(2/3) + 3·(1/3).
  EXPECT_EQ(norm(RINorm::lorentz(kink()), rat({3, -4})), Rational(4) * Rational(2, 3) + Rational(3) * Rational(1, 3));
}

TEST(Norm, NonLpNeedsEqualAtoms) {
  const auto s = DiscreteSpace<Rational>::make({Rational(1, 4), Rational(3, 4)});
  const SimpleFunction<Rational> f(s, {Rational(1), Rational(2)});
  EXPECT_THROW(norm(RINorm::lorentz(kink()), f), NonEqualAtomSpace);
  EXPECT_THROW(associate_norm(L(1), f), NonEqualAtomSpace);
  EXPECT_EQ(norm(L(1), f), Rational(7, 4));
}

TEST(AssociateNorm, Examples) {
  EXPECT_NEAR(associate_norm(L(2), uniform_fn<double>({3, 4})), std::sqrt(12.5), 1e-15);
  const auto h = rat({2, -5, 1, 0});
  EXPECT_EQ(associate_norm(L(1), h), Rational(5));
  EXPECT_EQ(associate_norm(Linf(), h), Rational(2));
  EXPECT_THROW(associate_norm(RINorm::generated(RINorm::lorentz(kink()), Exponent::finite(2)), uniform_fn<double>({1, 2})),
               UnsupportedNorm);
}

TEST(HardyLittlewood, Examples) {
  const auto [pair, sorted] = hardy_littlewood_check(rat({1, -2}), rat({3, 1}));
  EXPECT_EQ(pair, Rational(5, 2));
  EXPECT_EQ(sorted, Rational(7, 2));
  const auto [p2, s2] = hardy_littlewood_check(rat({1, 2, 3}), rat({2, 4, 5}));
  EXPECT_EQ(p2, s2);
  const auto [p3, s3] = hardy_littlewood_check(rat({0, 0}), rat({1, 2}));
  EXPECT_EQ(p3, Rational(0));
  EXPECT_EQ(s3, Rational(0));
}

TEST(Holder, Examples) {
  const auto chain = holder_check(L(2), uniform_fn<double>({1, -2}), uniform_fn<double>({3, 1}));
  EXPECT_DOUBLE_EQ(chain.pairing, 2.5);
  EXPECT_DOUBLE_EQ(chain.rearranged, 3.5);
  EXPECT_NEAR(chain.product, std::sqrt(2.5) * std::sqrt(5.0), 1e-14);

  const auto g = rat({3, -1, 2});
  const auto one = holder_check(RINorm::lorentz(kink()), rat({1, 1, 1}), g);
  EXPECT_EQ(one.pairing, norm(L(1), g));
  EXPECT_EQ(one.rearranged, norm(L(1), g));
  EXPECT_EQ(one.product, associate_norm(RINorm::lorentz(kink()), g));

  const auto zero = holder_check(L(1), g, rat({0, 0, 0}));
  EXPECT_EQ(zero.pairing, Rational(0));
  EXPECT_EQ(zero.rearranged, Rational(0));
  EXPECT_EQ(zero.product, Rational(0));
}

TEST(LorentzLuxemburg, Examples) {
  const auto [a, b] = lorentz_luxemburg_check(L(3), uniform_fn<double>({1, 2, 3}));
  EXPECT_LT(rel(a, b), 1e-14);
  const auto f = rat({3, -1, 2});
  const auto [c, d] = lorentz_luxemburg_check(L(1), f);
  EXPECT_EQ(c, Rational(2));
  EXPECT_EQ(d, Rational(2));
  const auto [z1, z2] = lorentz_luxemburg_check(RINorm::lorentz(kink()), rat({0, 0}));
  EXPECT_EQ(z1, Rational(0));
  EXPECT_EQ(z2, Rational(0));
}

// Properties.

TEST(NormProperties, RearrangementInvariance) {
  testkit::Gen gen(301);
  const std::vector<RINorm> kinds{L(1), L(2), L(3), Linf(), RINorm::lorentz(kink()), RINorm::associate(RINorm::lorentz(kink())),
                                  RINorm::generated(RINorm::lorentz(kink()), Exponent::finite(2))};
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.integer(1, 8));
    const auto s = gen.space(n, true);
    const auto f = testkit::as<double>(gen.function(s));
    std::vector<double> shuffled = f.values();
    gen.shuffle(shuffled);
    for (auto& x : shuffled) {
      if (gen.coin()) x = -x;
    }
    const SimpleFunction<double> g(f.space_ptr(), shuffled);
    for (const auto& X : kinds) {
      EXPECT_LT(rel(norm(X, f), norm(X, g)), 1e-14) << X.describe();
      EXPECT_LT(rel(norm(X, f), norm(X, decreasing_rearrangement(f), n)), 1e-12) << X.describe();
    }
  }
}

TEST(NormProperties, LpInvariantUnderEquimeasurableRedistribution) {
  // Splitting an atom of weight w into two atoms of weight w/2 with the same
  // value keeps the distribution.
  testkit::Gen gen(302);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.integer(1, 6));
    const auto s = gen.space(n, false);
    const auto f = gen.function(s);
    std::vector<Rational> w = s->weights();
    std::vector<Rational> v = f.values();
    w.push_back(w[0] / 2);
    w[0] /= 2;
    v.push_back(v[0]);
    const SimpleFunction<Rational> split(DiscreteSpace<Rational>::make(w), v);
    for (int p : {1, 2, 3}) EXPECT_EQ(lp_integral(f, Exponent::finite(p)), lp_integral(split, Exponent::finite(p)));
    EXPECT_EQ(norm(Linf(), f), norm(Linf(), split));
  }
}

TEST(NormProperties, AxiomsAndEmbeddingChain) {
  testkit::Gen gen(303);
  const std::vector<RINorm> kinds{L(1), L(2), L(3), Linf(), RINorm::lorentz(kink()),
                                  RINorm::associate(RINorm::lorentz(kink())), RINorm::associate(L(3))};
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.integer(1, 8));
    const auto s = gen.space(n, true);
    const auto f = testkit::as<double>(gen.function(s));
    const auto g = testkit::as<double>(gen.function(s));
    const double alpha = rational_to_double(gen.lattice(8, 4));
    // |h| ≤ |g| pointwise.
    std::vector<double> hv = g.values();
    for (auto& x : hv) x *= static_cast<double>(gen.integer(0, 4)) / 4;
    const SimpleFunction<double> h(g.space_ptr(), hv);
    for (const auto& X : kinds) {
      const double nf = norm(X, f);
      const double ng = norm(X, g);
      EXPECT_NEAR(norm(X, f * alpha), std::abs(alpha) * nf, 1e-12 * (1 + nf)) << X.describe();
      EXPECT_LE(norm(X, f + g), (nf + ng) * (1 + 1e-12) + 1e-15) << X.describe();
      EXPECT_LE(norm(X, h), ng * (1 + 1e-12) + 1e-15) << X.describe();
      // ‖1‖_X = 1 for all of these, so L^1 ≤ X ≤ L^∞.
      EXPECT_LE(norm(L(1), f), nf * (1 + 1e-12) + 1e-15) << X.describe();
      EXPECT_LE(nf, norm(Linf(), f) * (1 + 1e-12) + 1e-15) << X.describe();
    }
  }
}

TEST(NormProperties, UnitConstantHasNormOne) {
  for (std::size_t n : {1u, 2u, 5u, 8u}) {
    const auto one = SimpleFunction<Rational>::constant(DiscreteSpace<Rational>::uniform(n), Rational(1));
    EXPECT_EQ(norm(RINorm::lorentz(kink()), one), Rational(1));
    EXPECT_EQ(norm(RINorm::associate(RINorm::lorentz(kink())), one), Rational(1));
    EXPECT_EQ(associate_norm(L(1), one), Rational(1));
  }
}

TEST(NormProperties, LorentzMatchesDistributionIntegral) {
  testkit::Gen gen(304);
  const auto phi = kink();
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = gen.space(static_cast<std::size_t>(gen.integer(1, 8)), true);
    const auto f = gen.function(s);
    EXPECT_EQ(norm(RINorm::lorentz(phi), f), testkit::layer_cake_lorentz(phi, f));
  }
}

TEST(NormProperties, HardyLittlewoodMatchesBestArrangement) {
  testkit::Gen gen(305);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = gen.space(static_cast<std::size_t>(gen.integer(1, 6)), true);
    const auto f = gen.function(s);
    const auto g = gen.function(s);
    const auto [pairing, sorted] = hardy_littlewood_check(f, g);
    EXPECT_LE(pairing, sorted);
    EXPECT_EQ(sorted, testkit::best_arrangement_pairing(f.abs().values(), g.abs().values()));
  }
}

TEST(NormProperties, ExactAssociateMatchesVertexOracle) {
  testkit::Gen gen(306);
  const std::vector<RINorm> bases{L(1), Linf(), RINorm::lorentz(kink())};
  for (std::size_t n = 1; n <= 5; ++n) {
    for (const auto& X : bases) {
      const auto ball = testkit::ConeBall::of(X, n);
      const auto dual = testkit::ConeBall::dual_of(ball);
      for (int trial = 0; trial < 20; ++trial) {
        const auto h = gen.function(gen.space(n, true));
        const auto desc = sorted_abs_desc(h);
        EXPECT_EQ(associate_norm(X, h), ball.support(desc)) << X.describe();
        EXPECT_EQ(norm(RINorm::associate(X), h), ball.support(desc)) << X.describe();
        EXPECT_EQ(associate_norm(RINorm::associate(X), h), dual.support(desc)) << X.describe();
        EXPECT_EQ(norm(X, h), dual.support(desc)) << X.describe();
      }
    }
  }
}

TEST(NormProperties, LpAssociateMatchesAscentOracle) {
  testkit::Gen gen(307);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.integer(1, 5));
    const auto h = testkit::as<double>(gen.function(gen.space(n, true)));
    for (double p : {1.5, 2.0, 3.0}) {
      const RINorm X = RINorm::lp(Exponent::finite(to_rational(p)));
      const double closed = associate_norm(X, h);
      const double oracle = testkit::lp_dual_ascent(sorted_abs_desc(h), p, 8, 99 + trial);
      EXPECT_LE(oracle, closed * (1 + 1e-12) + 1e-15);
      EXPECT_LT(rel(oracle, closed), 1e-9) << "p=" << p << " n=" << n;
    }
  }
}

TEST(NormProperties, HolderChainOrdered) {
  testkit::Gen gen(308);
  const std::vector<RINorm> kinds{L(1), L(2), L(3), Linf(), RINorm::lorentz(kink()), RINorm::associate(RINorm::lorentz(kink()))};
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = gen.space(static_cast<std::size_t>(gen.integer(1, 8)), true);
    const auto f = testkit::as<double>(gen.function(s));
    const auto g = testkit::as<double>(gen.function(s));
    for (const auto& X : kinds) {
      const auto c = holder_check(X, f, g);
      EXPECT_LE(c.pairing, c.rearranged * (1 + 1e-12) + 1e-15);
      EXPECT_LE(c.rearranged, c.product * (1 + 1e-12) + 1e-15) << X.describe();
    }
  }
}

TEST(NormJson, RoundTrip) {
  const std::vector<RINorm> kinds{L(2), Linf(), RINorm::lorentz(kink()), RINorm::associate(L(3)),
                                  RINorm::generated(RINorm::lorentz(kink()), Exponent::parse("3/2"))};
  for (const auto& X : kinds) EXPECT_EQ(norm_from_json(norm_to_json(X)), X) << X.describe();
  EXPECT_EQ(norm_to_json(Linf()).dump(), R"({"kind":"lp","p":"inf"})");
  EXPECT_THROW(norm_from_json(parse_json(R"({"kind":"orlicz"})")), InvalidInput);
  EXPECT_THROW(norm_from_json(parse_json(R"({"kind":"lp","p":"1/2"})")), InvalidInput);
}
