#include <gtest/gtest.h>

#include <atomic>
#include <cmath>

#include "generators.hpp"
#include "rlab/verify.hpp"

using namespace rlab;

namespace {

template <Scalar T>
SimpleFunction<T> on(const SpacePtr<T>& s, std::initializer_list<int> v) {
  std::vector<T> out;
  for (int x : v) out.emplace_back(x);
  return SimpleFunction<T>(s, std::move(out));
}

TrialConfig small(Suite suite, Mode mode = Mode::Exact) {
  TrialConfig cfg;
  cfg.suite = suite;
  cfg.mode = mode;
  cfg.trials = 300;
  cfg.seed = 17;
  cfg.atoms_min = 2;
  cfg.atoms_max = 6;
  return cfg;
}

}  // namespace

TEST(ExponentTuple, ParseAndValidate) {
  const auto t = ExponentTuple::parse("1,2,2,inf,1");
  EXPECT_EQ(t.p2, Exponent::infinity());
  EXPECT_EQ(t.to_string(), "1,2,2,inf,1");
  EXPECT_NO_THROW(ExponentTuple::parse("2,inf,2,4,4"));
  EXPECT_NO_THROW(ExponentTuple::parse("1,2,2,3,1.5"));
  EXPECT_THROW(ExponentTuple::parse("1,2,2,3,2"), InvalidInput);
  EXPECT_THROW(ExponentTuple::parse("1,2,2"), InvalidInput);
  EXPECT_THROW(ExponentTuple::parse("1,2,2,2,x"), InvalidInput);
  EXPECT_THROW(ExponentTuple::parse("1,2,2,2,2,2"), InvalidInput);
}

TEST(SuiteNames, RoundTrip) {
  for (Suite s : {Suite::Lemma31, Suite::Thm32, Suite::Thm41, Suite::Thm43, Suite::Rearrange, Suite::All}) {
    EXPECT_EQ(parse_suite(to_string(s)), s);
  }
  EXPECT_THROW(parse_suite("thm99"), InvalidInput);
  EXPECT_EQ(parse_weight_scheme(to_string(WeightScheme::RandomRational)), WeightScheme::RandomRational);
}

TEST(Checks, Thm32Examples) {
  const auto s = DiscreteSpace<Rational>::uniform(2);
  const auto eq = thm32_check(on(s, {1, 1}), on(s, {1, -1}), on(s, {-1, 1}));
  EXPECT_EQ(eq.lhs, Rational(2));
  EXPECT_EQ(eq.rhs, Rational(2));
  EXPECT_EQ(eq.gap(), Rational(0));
  const auto loose = thm32_check(on(s, {1, 1}), on(s, {1, -1}), on(s, {1, -1}));
  EXPECT_EQ(loose.lhs, Rational(-2));
  EXPECT_EQ(loose.gap(), Rational(4));
}

TEST(Checks, Thm41Examples) {
  const auto d = DiscreteSpace<double>::uniform(2);
  const auto a = thm41_check(ExponentTuple::parse("1,2,2,2,2"), on(d, {1, -1}), on(d, {1, -1}));
  EXPECT_DOUBLE_EQ(a.lhs, 0.0);
  EXPECT_DOUBLE_EQ(a.rhs, 2.0);
  const auto s = DiscreteSpace<Rational>::uniform(2);
  const auto b = thm41_check(ExponentTuple::parse("1,inf,1,inf,1"), on(s, {2, 0}), on(s, {1, -1}));
  EXPECT_EQ(b.lhs, Rational(1));
  EXPECT_EQ(b.rhs, Rational(3));
}

TEST(Checks, Thm43Examples) {
  const auto s = DiscreteSpace<Rational>::uniform(2);
  const auto [first, second] = thm43_checks(RINorm::lp(Exponent::finite(1)), on(s, {2, 0}), on(s, {1, -1}));
  EXPECT_EQ(first.lhs, Rational(1));
  EXPECT_EQ(first.rhs, Rational(3));
  EXPECT_LE(second.lhs, second.rhs);
}

TEST(Checks, ToleranceScalesWithRhs) {
  const auto fl = Check<double>::inequality("x", 1.0, 2.0);
  EXPECT_DOUBLE_EQ(fl.tolerance(kGapRelTol, kFloatRelTol), 2e-9);
}

TEST(Generator, DeterministicAndSizeCycling) {
  TrialConfig cfg = small(Suite::Thm32);
  for (std::size_t i = 0; i < 20; ++i) {
    const Instance a = generate_instance(cfg, i);
    EXPECT_EQ(a, generate_instance(cfg, i));
    EXPECT_EQ(a.atoms(), cfg.atoms_min + i % 5);
  }
  TrialConfig other = cfg;
  other.seed = 18;
  EXPECT_NE(generate_instance(cfg, 3), generate_instance(other, 3));
}

TEST(Generator, SuitesShareFunctions) {
  TrialConfig a = small(Suite::Thm41);
  TrialConfig b = small(Suite::Thm43);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(generate_instance(a, i), generate_instance(b, i));
}

TEST(Generator, HypothesesHold) {
  for (WeightScheme w : {WeightScheme::Equal, WeightScheme::RandomRational}) {
    TrialConfig cfg = small(Suite::Lemma31);
    cfg.weights = w;
    TrialConfig t32 = cfg;
    t32.suite = Suite::Thm32;
    for (std::size_t i = 0; i < 500; ++i) {
      const Instance inst = generate_instance(cfg, i);
      EXPECT_EQ(inst.natural_mode(), Mode::Exact);
      const auto s = inst.space<Rational>();
      EXPECT_EQ(integrate(inst.function<Rational>("g", s)), Rational(0));
      for (const auto& v : inst.values("f")) EXPECT_TRUE(v == 0 || v == 1 || v == -1);
      for (const auto& v : inst.values("h")) EXPECT_LE(abs_of(v), Rational(1));
      const Instance other = generate_instance(t32, i);
      EXPECT_EQ(integrate(other.function<Rational>("g", other.space<Rational>())), Rational(0));
      if (w == WeightScheme::Equal) EXPECT_TRUE(s->equal_atoms());
    }
  }
}

TEST(Config, Validation) {
  TrialConfig cfg = small(Suite::Thm43);
  cfg.weights = WeightScheme::RandomRational;
  EXPECT_THROW(cfg.validate(), NonEqualAtomSpace);
  cfg.suite = Suite::All;
  EXPECT_NO_THROW(cfg.validate());

  TrialConfig bits = small(Suite::Thm32, Mode::Float);
  bits.float_bits = 64;
  EXPECT_THROW(bits.validate(), InvalidInput);
  bits.float_bits = 113;
  EXPECT_NO_THROW(bits.validate());

  TrialConfig range = small(Suite::Thm32);
  range.atoms_min = 5;
  range.atoms_max = 4;
  EXPECT_THROW(range.validate(), InvalidInput);

  TrialConfig inexact = small(Suite::Thm41);
  inexact.exponents = ExponentTuple::parse("1,2,2,2,2");
  EXPECT_THROW(inexact.validate(), InexactOperation);
  inexact.mode = Mode::Float;
  EXPECT_NO_THROW(inexact.validate());
}

TEST(Verify, ExactSuitesPass) {
  for (Suite s : {Suite::Lemma31, Suite::Thm32, Suite::Thm41, Suite::Thm43, Suite::Rearrange}) {
    const auto report = verify(small(s));
    EXPECT_EQ(report.total_violations(), 0u) << to_string(s);
    EXPECT_EQ(report.trials, 300u);
    ASSERT_TRUE(report.min_gap_value.has_value());
    EXPECT_GE(*report.min_gap_value, 0.0) << to_string(s);
    for (const auto& fx : report.fixtures) EXPECT_TRUE(fx.passed) << fx.name << " " << fx.property;
  }
}

TEST(Verify, FloatSuitesPass) {
  for (Suite s : {Suite::Thm32, Suite::Thm41, Suite::Thm43, Suite::Rearrange}) {
    TrialConfig cfg = small(s, Mode::Float);
    cfg.exponents = ExponentTuple::parse("2,inf,2,4,4");
    cfg.norm = RINorm::lp(Exponent::finite(3));
    const auto report = verify(cfg);
    EXPECT_EQ(report.total_violations(), 0u) << to_string(s);
  }
}

TEST(Verify, FixturesReported) {
  const auto report = verify(small(Suite::Thm32));
  bool seen = false;
  for (const auto& fx : report.fixtures) {
    if (fx.name == "equality_witness") {
      seen = true;
      EXPECT_EQ(fx.gap, "0");
    }
  }
  EXPECT_TRUE(seen);
  const auto l31 = verify(small(Suite::Lemma31));
  bool three = false;
  for (const auto& fx : l31.fixtures) {
    if (fx.name == "three_atoms") {
      three = true;
      EXPECT_EQ(fx.lhs, "0");
      EXPECT_EQ(fx.rhs, "4/9");
    }
  }
  EXPECT_TRUE(three);
}

TEST(Verify, AllSuiteHasChildren) {
  TrialConfig cfg = small(Suite::All);
  cfg.trials = 50;
  const auto report = verify(cfg);
  EXPECT_EQ(report.children.size(), 5u);
  EXPECT_EQ(report.total_violations(), 0u);
  const Json j = report.to_json();
  EXPECT_TRUE(j["suites"].contains("thm43"));
}

TEST(Verify, ThreadCountDoesNotChangeReport) {
  TrialConfig cfg = small(Suite::Thm32, Mode::Float);
  cfg.threads = 1;
  const std::string one = dump_canonical(verify(cfg).to_json());
  cfg.threads = 3;
  EXPECT_EQ(dump_canonical(verify(cfg).to_json()), one);
}

TEST(ParallelFor, CoversEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, RethrowsLowestIndex) {
  try {
    parallel_for(100, 4, [](std::size_t i) {
      if (i == 30 || i == 90) throw InvalidInput("at " + std::to_string(i));
    });
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("at 30"), std::string::npos);
  }
}
