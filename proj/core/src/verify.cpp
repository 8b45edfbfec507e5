#include "rlab/verify.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <algorithm>
#include <array>
#include <exception>
#include <thread>

#include "rlab/oscillation.hpp"

namespace rlab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::size_t index)
      : engine_(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index) + 1))) {}

  int uniform(int lo, int hi) { return boost::random::uniform_int_distribution<int>(lo, hi)(engine_); }
  bool coin() { return uniform(0, 1) == 1; }

 private:
  boost::random::mt19937_64 engine_;
};

const Exponent kOne = Exponent::finite(1);
const Exponent kTwo = Exponent::finite(2);
const Exponent kThree = Exponent::finite(3);
const Exponent kInf = Exponent::infinity();

std::vector<Rational> restrict_and_center(std::vector<Rational> g, const std::vector<Rational>& w,
                                          const std::vector<bool>& keep) {
  Rational mass = 0;
  Rational total = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (keep[i]) {
      mass += w[i];
      total += g[i] * w[i];
    } else {
      g[i] = 0;
    }
  }
  if (mass == 0) return std::vector<Rational>(g.size(), Rational(0));
  const Rational mean = total / mass;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (keep[i]) g[i] -= mean;
  }
  return g;
}

template <Scalar T>
std::string str(const T& x) {
  return to_string(x);
}

// Evaluation in the most faithful mode available: exact, else 113 bits.
struct Faithful {
  std::string mode;
  std::vector<Check<Rational>> exact;
  std::vector<Check<Quad>> quad;
};

Faithful evaluate_faithfully(const TrialConfig& cfg, const Instance& instance) {
  Faithful out;
  try {
    out.exact = evaluate_checks<Rational>(cfg, instance);
    out.mode = "exact";
  } catch (const InexactOperation&) {
    out.quad = evaluate_checks<Quad>(cfg, instance);
    out.mode = "quad";
  }
  return out;
}

struct Verdict {
  bool violated = false;
  std::string lhs, rhs, gap;
};

Verdict judge(const Faithful& f, std::size_t i) {
  Verdict v;
  if (f.mode == "exact") {
    const auto& c = f.exact.at(i);
    v.violated = c.gap() < 0;
    v.lhs = str(c.lhs);
    v.rhs = str(c.rhs);
    v.gap = str(c.gap());
  } else {
    const auto& c = f.quad.at(i);
    v.violated = c.gap() < -c.tolerance(kQuadRelTol, kQuadRelTol);
    v.lhs = str(c.lhs);
    v.rhs = str(c.rhs);
    v.gap = str(c.gap());
  }
  return v;
}

enum class Status { Ok, Graze, Violation };

template <Scalar T>
struct CheckOutcome {
  std::string property;
  T gap;
  std::string bucket;
  Status status = Status::Ok;
  Json certificate;
};

template <Scalar T>
std::string bucket_of(const Check<T>& c) {
  const T gap = c.gap();
  if (gap < 0) return "negative";
  if (gap == 0) return "zero";
  const T scale = c.equality ? c.scale : abs_of(c.rhs);
  if (scale == 0) return "[1,inf)";
  const double rel = to_double(T(gap / scale));
  if (rel < 1e-9) return "(0,1e-9)";
  if (rel < 1e-6) return "[1e-9,1e-6)";
  if (rel < 1e-3) return "[1e-6,1e-3)";
  if (rel < 1e-1) return "[1e-3,1e-1)";
  if (rel < 1) return "[1e-1,1)";
  return "[1,inf)";
}

template <Scalar T>
Json certificate(std::size_t index, const Instance& instance, const Check<T>& c, const std::string& mode,
                 const Verdict& recheck) {
  return Json{{"trial", index},
              {"property", c.property},
              {"instance", instance_to_json(instance)},
              {"mode", mode},
              {"lhs", str(c.lhs)},
              {"rhs", str(c.rhs)},
              {"gap", str(c.gap())},
              {"recheck", {{"lhs", recheck.lhs}, {"rhs", recheck.rhs}, {"gap", recheck.gap}}}};
}

template <Scalar T>
std::vector<CheckOutcome<T>> run_trial(const TrialConfig& cfg, std::size_t index) {
  const Instance instance = generate_instance(cfg, index);
  const auto checks = evaluate_checks<T>(cfg, instance);
  std::optional<Faithful> faithful;
  std::vector<CheckOutcome<T>> out;
  out.reserve(checks.size());
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto& c = checks[i];
    CheckOutcome<T> o{c.property, c.gap(), bucket_of(c), Status::Ok, Json()};
    if (o.gap < 0) {
      if constexpr (is_exact_v<T>) {
        o.status = Status::Violation;
        Verdict self{true, str(c.lhs), str(c.rhs), str(c.gap())};
        o.certificate = certificate(index, instance, c, "exact", self);
        o.certificate["recheck"]["mode"] = "exact";
      } else {
        if (o.gap >= -c.tolerance(kGapRelTol, kFloatRelTol)) {
          o.status = Status::Graze;
        } else {
          if (!faithful) faithful = evaluate_faithfully(cfg, instance);
          const Verdict v = judge(*faithful, i);
          if (v.violated) {
            o.status = Status::Violation;
            o.certificate = certificate(index, instance, c, "float", v);
            o.certificate["recheck"]["mode"] = faithful->mode;
          } else {
            o.status = Status::Graze;
          }
        }
      }
    }
    out.push_back(std::move(o));
  }
  return out;
}

struct Fixture {
  std::string name;
  Instance instance;
  std::optional<ExponentTuple> exponents;
  std::optional<RINorm> norm;
};

Instance uniform_instance(std::size_t n, std::map<std::string, std::vector<Rational>> functions) {
  Instance inst;
  inst.weights.assign(n, Rational(1, static_cast<long>(n)));
  inst.functions = std::move(functions);
  return inst;
}

std::vector<Rational> ints(std::initializer_list<long> values) {
  std::vector<Rational> out;
  for (long v : values) out.emplace_back(v);
  return out;
}

ExponentTuple tuple_of(std::string_view text) { return ExponentTuple::parse(text); }

// Two-level g = 1_A - 2·1_B with A = {0,1}, B = {2}, G^c = {3,4}, on an
// equal and a weighted space, with F = supp f meeting each of A, B, G^c or
// not, against three choices of h.
std::vector<Fixture> step1_fixtures() {
  std::vector<Fixture> out;
  const std::vector<std::pair<std::string, std::vector<Rational>>> spaces = {
      {"equal", std::vector<Rational>(5, Rational(1, 5))},
      {"weighted", {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 8), Rational(1, 8)}}};
  const std::vector<std::pair<std::string, std::vector<Rational>>> hs = {
      {"ones", ints({1, 1, 1, 1, 1})},
      {"against", ints({-1, -1, 1, -1, 1})},
      {"alternating", ints({1, -1, 1, -1, 1})}};
  for (const auto& [space_name, weights] : spaces) {
    for (int pattern = 0; pattern < 8; ++pattern) {
      const bool in_a = pattern & 1;
      const bool in_b = pattern & 2;
      const bool in_c = pattern & 4;
      std::vector<Rational> f(5, Rational(0));
      if (in_a) f[0] = 1;
      if (in_b) f[2] = 1;
      if (in_c) {
        f[3] = 1;
        f[4] = -1;
      }
      std::string tag = std::string(in_a ? "A" : "-") + (in_b ? "B" : "-") + (in_c ? "C" : "-");
      for (const auto& [h_name, h] : hs) {
        Instance inst;
        inst.weights = weights;
        inst.functions = {{"f", f}, {"g", ints({1, 1, -2, 0, 0})}, {"h", h}};
        out.push_back({"step1/" + space_name + "/F=" + tag + "/h=" + h_name, std::move(inst), {}, {}});
      }
    }
  }
  return out;
}

std::vector<Fixture> fixtures_for(const TrialConfig& cfg) {
  std::vector<Fixture> out;
  switch (cfg.suite) {
    case Suite::Lemma31:
      out.push_back({"three_atoms",
                     uniform_instance(3, {{"f", ints({1, 1, 1})}, {"g", ints({1, -1, 0})}, {"h", ints({1, 1, 1})}}),
                     {},
                     {}});
      out.push_back({"full_support",
                     uniform_instance(2, {{"f", ints({1, 0})}, {"g", ints({1, -1})}, {"h", ints({1, -1})}}),
                     {},
                     {}});
      break;
    case Suite::Thm32:
      out.push_back({"equality_witness",
                     uniform_instance(2, {{"f", ints({1, 1})}, {"g", ints({1, -1})}, {"h", ints({-1, 1})}}),
                     {},
                     {}});
      out.push_back({"reversed_h",
                     uniform_instance(2, {{"f", ints({1, 1})}, {"g", ints({1, -1})}, {"h", ints({1, -1})}}),
                     {},
                     {}});
      out.push_back({"zero_g",
                     uniform_instance(2, {{"f", ints({1, -1})}, {"g", ints({0, 0})}, {"h", ints({1, 1})}}),
                     {},
                     {}});
      for (auto& f : step1_fixtures()) out.push_back(std::move(f));
      break;
    case Suite::Thm41:
      out.push_back({"product_constant", uniform_instance(2, {{"f", ints({1, -1})}, {"g", ints({1, -1})}}),
                     tuple_of("1,2,2,2,2"), {}});
      out.push_back({"two_atoms", uniform_instance(2, {{"f", ints({2, 0})}, {"g", ints({1, -1})}}),
                     tuple_of("1,inf,1,inf,1"), {}});
      out.push_back({"constant_f", uniform_instance(2, {{"f", ints({1, 1})}, {"g", ints({1, -1})}}),
                     tuple_of("1,inf,1,inf,1"), {}});
      break;
    case Suite::Thm43:
      out.push_back({"two_atoms/L^1", uniform_instance(2, {{"f", ints({2, 0})}, {"g", ints({1, -1})}}), {},
                     RINorm::lp(kOne)});
      out.push_back({"two_atoms", uniform_instance(2, {{"f", ints({2, 0})}, {"g", ints({1, -1})}}), {}, {}});
      out.push_back({"constant_f", uniform_instance(4, {{"f", ints({1, 1, 1, 1})}, {"g", ints({2, -1, 0, -1})}}),
                     {}, {}});
      break;
    case Suite::Rearrange: {
      Instance hand;
      hand.weights = {Rational(1, 5), Rational(3, 10), Rational(1, 2)};
      hand.functions = {{"f", ints({3, -1, 2})}, {"g", ints({0, 1, -1})}};
      out.push_back({"hand_profile", std::move(hand), {}, {}});
      out.push_back({"zero_function", uniform_instance(3, {{"f", ints({0, 0, 0})}, {"g", ints({0, 0, 0})}}), {}, {}});
      out.push_back({"zero_against_nonzero",
                     uniform_instance(3, {{"f", ints({0, 0, 0})}, {"g", ints({2, -1, 0})}}), {}, {}});
      break;
    }
    case Suite::All:
      break;
  }
  return out;
}

std::vector<FixtureResult> run_fixtures(const TrialConfig& cfg) {
  std::vector<FixtureResult> out;
  for (const auto& fixture : fixtures_for(cfg)) {
    TrialConfig local = cfg;
    if (fixture.exponents) local.exponents = *fixture.exponents;
    if (fixture.norm) local.norm = *fixture.norm;
    const Faithful faithful = evaluate_faithfully(local, fixture.instance);
    const std::size_t count = faithful.mode == "exact" ? faithful.exact.size() : faithful.quad.size();
    for (std::size_t i = 0; i < count; ++i) {
      const Verdict v = judge(faithful, i);
      const std::string property =
          faithful.mode == "exact" ? faithful.exact[i].property : faithful.quad[i].property;
      out.push_back({fixture.name, property, faithful.mode, v.lhs, v.rhs, v.gap, !v.violated});
    }
    if (fixture.name == "hand_profile") {
      const auto space = fixture.instance.space<Rational>();
      const auto star = decreasing_rearrangement(fixture.instance.function<Rational>("f", space));
      const auto expected = StepProfile<Rational>::from_segments(
          {{Rational(3), Rational(1, 5)}, {Rational(2), Rational(1, 2)}, {Rational(1), Rational(3, 10)}});
      const bool ok = star == expected;
      out.push_back({fixture.name, "hand_profile", "exact", profile_to_json(star).dump(),
                     profile_to_json(expected).dump(), ok ? "0" : "-1", ok});
    }
  }
  return out;
}

template <Scalar T>
VerificationReport run_suite(const TrialConfig& cfg) {
  VerificationReport report;
  report.suite = to_string(cfg.suite);
  report.trials = cfg.trials;
  report.config = cfg.to_json();

  std::vector<std::vector<CheckOutcome<T>>> outcomes(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) { outcomes[i] = run_trial<T>(cfg, i); });

  std::map<std::string, std::size_t> property_index;
  std::vector<std::optional<T>> property_min;
  std::optional<T> overall;
  for (std::size_t trial = 0; trial < outcomes.size(); ++trial) {
    for (auto& o : outcomes[trial]) {
      auto [it, inserted] = property_index.emplace(o.property, report.properties.size());
      if (inserted) {
        report.properties.push_back({o.property, 0, 0, std::nullopt});
        property_min.emplace_back();
      }
      auto& summary = report.properties[it->second];
      ++summary.checked;
      if (o.status != Status::Violation) ++summary.passed;
      if (o.status == Status::Graze) ++report.grazes;
      if (o.status == Status::Violation) report.violations.push_back(std::move(o.certificate));
      auto& pmin = property_min[it->second];
      if (!pmin || o.gap < *pmin) pmin = o.gap;
      if (!overall || o.gap < *overall) {
        overall = o.gap;
        report.argmin_trial = trial;
      }
      ++report.histogram[o.bucket];
    }
  }
  for (std::size_t i = 0; i < report.properties.size(); ++i) {
    if (property_min[i]) report.properties[i].min_gap = str(*property_min[i]);
  }
  if (overall) {
    report.min_gap = str(*overall);
    report.min_gap_value = to_double(*overall);
    report.argmin_instance = instance_to_json(generate_instance(cfg, *report.argmin_trial));
  }
  report.fixtures = run_fixtures(cfg);
  return report;
}

VerificationReport run_single(const TrialConfig& cfg) {
  if (cfg.mode == Mode::Exact) return run_suite<Rational>(cfg);
  if (cfg.float_bits == 113) return run_suite<Quad>(cfg);
  return run_suite<double>(cfg);
}

// Probe instance used to reject configurations that cannot be evaluated in
// the requested mode before any trial runs.
void probe(const TrialConfig& cfg) {
  const Instance inst = uniform_instance(
      2, {{"f", ints({1, 0})}, {"g", ints({1, -1})}, {"h", ints({-1, 1})}});
  if (cfg.mode == Mode::Exact) {
    try {
      (void)evaluate_checks<Rational>(cfg, inst);
    } catch (const InexactOperation& e) {
      throw InexactOperation(std::string(e.what()) + "; suite " + to_string(cfg.suite) +
                             " needs --mode float for this configuration");
    }
  } else {
    (void)evaluate_checks<Quad>(cfg, inst);
  }
}

}  // namespace

std::string to_string(Suite suite) {
  switch (suite) {
    case Suite::Lemma31:
      return "lemma31";
    case Suite::Thm32:
      return "thm32";
    case Suite::Thm41:
      return "thm41";
    case Suite::Thm43:
      return "thm43";
    case Suite::Rearrange:
      return "rearrange";
    case Suite::All:
      return "all";
  }
  return "?";
}

Suite parse_suite(std::string_view text) {
  for (Suite s : {Suite::Lemma31, Suite::Thm32, Suite::Thm41, Suite::Thm43, Suite::Rearrange, Suite::All}) {
    if (to_string(s) == text) return s;
  }
  throw InvalidInput("unknown suite '" + std::string(text) + "'");
}

std::string to_string(WeightScheme scheme) { return scheme == WeightScheme::Equal ? "equal" : "random"; }

WeightScheme parse_weight_scheme(std::string_view text) {
  if (text == "equal") return WeightScheme::Equal;
  if (text == "random") return WeightScheme::RandomRational;
  throw InvalidInput("unknown weight scheme '" + std::string(text) + "'");
}

ExponentTuple ExponentTuple::parse(std::string_view text) {
  std::vector<Exponent> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    parts.push_back(Exponent::parse(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (parts.size() != 5) throw InvalidInput("exponent tuple needs five entries r,p1,q1,p2,q2");
  ExponentTuple t{parts[0], parts[1], parts[2], parts[3], parts[4]};
  t.validate();
  return t;
}

void ExponentTuple::validate() const {
  const Rational lhs = r.reciprocal();
  const Rational first = p1.reciprocal() + q1.reciprocal();
  const Rational second = p2.reciprocal() + q2.reciprocal();
  if (lhs != first || lhs != second) {
    throw InvalidInput("exponent tuple (" + to_string() + ") violates 1/r = 1/p1 + 1/q1 = 1/p2 + 1/q2: " +
                       rlab::to_string(lhs) + ", " + rlab::to_string(first) + ", " + rlab::to_string(second));
  }
}

std::string ExponentTuple::to_string() const {
  return r.to_string() + "," + p1.to_string() + "," + q1.to_string() + "," + p2.to_string() + "," +
         q2.to_string();
}

void TrialConfig::validate() const {
  if (atoms_min < 1 || atoms_min > atoms_max) throw InvalidInput("atom range must satisfy 1 <= min <= max");
  if (atoms_max > 4096) throw InvalidInput("at most 4096 atoms per instance");
  if (trials < 1) throw InvalidInput("trial count must be at least 1");
  if (lattice_step <= 0 || lattice_radius < 1) throw InvalidInput("value lattice must be nontrivial");
  if (float_bits != 53 && float_bits != 113) throw InvalidInput("float precision must be 53 or 113 bits");
  if (threads < 1) throw InvalidInput("thread count must be at least 1");
  exponents.validate();
  if (suite == Suite::All) {
    for (Suite s : {Suite::Lemma31, Suite::Thm32, Suite::Thm41, Suite::Thm43, Suite::Rearrange}) {
      TrialConfig child = *this;
      child.suite = s;
      if (s == Suite::Thm43) child.weights = WeightScheme::Equal;
      child.validate();
    }
    return;
  }
  if (suite == Suite::Thm43 && weights != WeightScheme::Equal) {
    throw NonEqualAtomSpace("thm43 runs on equal-atom spaces only");
  }
  probe(*this);
}

Json TrialConfig::to_json() const {
  Json j{{"suite", to_string(suite)},
         {"atoms_min", atoms_min},
         {"atoms_max", atoms_max},
         {"weights", to_string(weights)},
         {"lattice", {{"step", rlab::to_string(lattice_step)}, {"radius", lattice_radius}}},
         {"trials", trials},
         {"seed", seed},
         {"mode", to_string(mode)}};
  if (mode == Mode::Float) j["float_bits"] = float_bits;
  if (suite == Suite::Thm41 || suite == Suite::All) j["exponents"] = exponents.to_string();
  if (suite == Suite::Thm43 || suite == Suite::All) j["norm"] = norm_to_json(norm);
  return j;
}

Instance generate_instance(const TrialConfig& cfg, std::size_t index) {
  TrialRng rng(cfg.seed, index);
  const std::size_t span = cfg.atoms_max - cfg.atoms_min + 1;
  const std::size_t n = cfg.atoms_min + index % span;

  Instance inst;
  if (cfg.weights == WeightScheme::Equal) {
    inst.weights.assign(n, Rational(1, static_cast<long>(n)));
  } else {
    Rational total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const int den = rng.uniform(1, 64);
      const int num = rng.uniform(1, den);
      inst.weights.emplace_back(num, den);
      total += inst.weights.back();
    }
    for (auto& w : inst.weights) w /= total;
  }

  // Fixed draw order so that suites sharing (seed, index) see the same f, g.
  auto lattice = [&] {
    std::vector<Rational> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(Rational(rng.uniform(-cfg.lattice_radius, cfg.lattice_radius)) *
                                                    cfg.lattice_step);
    return v;
  };
  std::vector<Rational> f = lattice();
  std::vector<Rational> g = lattice();
  std::vector<Rational> h = lattice();
  std::vector<Rational> trits;
  std::vector<Rational> unit_h;
  std::vector<bool> keep;
  std::vector<bool> f_zero;
  for (std::size_t i = 0; i < n; ++i) {
    trits.emplace_back(rng.uniform(-1, 1));
    unit_h.push_back(Rational(rng.uniform(-4, 4), 4));
    keep.push_back(rng.coin());
    f_zero.push_back(rng.uniform(0, 3) == 0);
  }
  const int shape = rng.uniform(0, 7);

  switch (cfg.suite) {
    case Suite::Thm32:
    case Suite::Lemma31: {
      // Half the trials keep g on a random subset so that G^c is populated.
      if (shape < 4) keep.assign(n, true);
      if (shape == 7) g.assign(n, Rational(0));
      g = restrict_and_center(std::move(g), inst.weights, keep);
      if (cfg.suite == Suite::Lemma31) {
        f = trits;
        h = unit_h;
      } else if (shape == 5) {
        for (std::size_t i = 0; i < n; ++i) {
          if (f_zero[i]) f[i] = 0;
        }
      }
      inst.functions = {{"f", f}, {"g", g}, {"h", h}};
      break;
    }
    default:
      inst.functions = {{"f", f}, {"g", g}};
      break;
  }
  return inst;
}

template <Scalar T>
T Check<T>::gap() const {
  return equality ? T(-abs_of(T(lhs - rhs))) : T(rhs - lhs);
}

template <Scalar T>
T Check<T>::tolerance(double rel_inequality, double rel_equality) const {
  return equality ? T(T(rel_equality) * scale) : T(T(rel_inequality) * abs_of(rhs));
}

template <Scalar T>
Check<T> Check<T>::inequality(std::string property, T lhs, T rhs) {
  T scale = abs_of(rhs);
  return Check{std::move(property), std::move(lhs), std::move(rhs), false, std::move(scale)};
}

template <Scalar T>
Check<T> Check<T>::equal(std::string property, T lhs, T rhs) {
  T scale = max_of(abs_of(lhs), abs_of(rhs));
  return Check{std::move(property), std::move(lhs), std::move(rhs), true, std::move(scale)};
}

template <Scalar T>
Check<T> Check<T>::vanishing(std::string property, T discrepancy, T scale) {
  return Check{std::move(property), abs_of(discrepancy), T(0), true, std::move(scale)};
}

template <Scalar T>
Check<T> thm32_check(const SimpleFunction<T>& f, const SimpleFunction<T>& g, const SimpleFunction<T>& h) {
  const AtomSet all = AtomSet::all(f.size());
  const T lhs = bilinear_form(all, all, f, g, h);
  const std::array<StepProfile<T>, 3> profiles{decreasing_rearrangement(f), decreasing_rearrangement(g),
                                               decreasing_rearrangement(h)};
  const T rhs = T(2) * profile_integrate_product<T>(std::span<const StepProfile<T>>(profiles));
  return Check<T>::inequality("thm32", lhs, rhs);
}

template <Scalar T>
Check<T> thm41_check(const ExponentTuple& e, const SimpleFunction<T>& f, const SimpleFunction<T>& g) {
  auto lp = [](const Exponent& p, const SimpleFunction<T>& u) { return norm(RINorm::lp(p), u); };
  const T lhs = lp(e.r, center(f * g));
  const T rhs = lp(e.p1, f) * lp(e.q1, center(g)) + lp(e.p2, g) * lp(e.q2, center(f));
  return Check<T>::inequality("thm41", lhs, rhs);
}

template <Scalar T>
std::pair<Check<T>, Check<T>> thm43_checks(const RINorm& X, const SimpleFunction<T>& f,
                                           const SimpleFunction<T>& g) {
  const SimpleFunction<T> fc = center(f);
  const SimpleFunction<T> gc = center(g);
  const SimpleFunction<T> pc = center(f * g);
  const T x_fc = norm(X, fc);
  const T lhs1 = norm(X, pc);
  const T rhs1 = sup_abs(f) * norm(X, gc) + sup_abs(g) * x_fc;
  const T lhs2 = norm(RINorm::lp(kOne), pc);
  const T rhs2 = norm(X, f) * associate_norm(X, gc) + associate_norm(X, g) * x_fc;
  return {Check<T>::inequality("thm43/x_norm_form", lhs1, rhs1),
          Check<T>::inequality("thm43/associate_form", lhs2, rhs2)};
}

template <Scalar T>
std::vector<Check<T>> rearrange_checks(const SimpleFunction<T>& f, const SimpleFunction<T>& g) {
  std::vector<Check<T>> out;
  const StepProfile<T> fs = decreasing_rearrangement(f);
  const StepProfile<T> gs = decreasing_rearrangement(g);
  const T top = sup_abs(f);
  const T unit = 1;

  out.push_back(Check<T>::vanishing("equimeasurable", is_equimeasurable(f, fs) ? T(0) : T(1), unit));

  for (const Exponent& p : {kOne, kTwo, kThree, kInf}) {
    const auto pair = rearrangement_preserves_lp(f, p);
    out.push_back(Check<T>::equal("lp_preserved[p=" + p.to_string() + "]", pair.first, pair.second));
  }

  {
    const SimpleFunction<T> back = layer_reconstruct(layer_decompose(f));
    T worst = 0;
    for (std::size_t i = 0; i < f.size(); ++i) worst = max_of(worst, abs_of(T(back[i] - f[i])));
    out.push_back(Check<T>::vanishing("layer_cake_round_trip", worst, max_of(top, unit)));
  }

  {
    std::vector<T> levels{T(0)};
    for (const auto& v : f.values()) levels.push_back(abs_of(v));
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    const std::size_t distinct = levels.size();
    for (std::size_t i = 0; i + 1 < distinct; ++i) levels.push_back((levels[i] + levels[i + 1]) / T(2));
    levels.push_back(top + T(1));
    T worst = 0;
    for (const auto& t : levels) {
      const auto [lhs, rhs] = indicator_difference_rearrangement(f, t);
      worst = max_of(worst, profile_distance(lhs, rhs, kOne));
    }
    out.push_back(Check<T>::vanishing("indicator_difference", worst, unit));
  }

  for (const Exponent& p : {kOne, kTwo, kInf}) {
    const auto pair = nonexpansive_check(f, g, p);
    out.push_back(Check<T>::inequality("nonexpansive[p=" + p.to_string() + "]", pair.first, pair.second));
  }

  {
    const auto ladder = truncation_ladder(f, 16);
    bool monotone = true;
    for (std::size_t k = 0; k < ladder.size(); ++k) {
      if (!profile_leq(ladder[k], fs)) monotone = false;
      if (k + 1 < ladder.size() && !profile_leq(ladder[k], ladder[k + 1])) monotone = false;
    }
    const T miss = monotone ? profile_distance(ladder.back(), fs, kOne) : T(1);
    out.push_back(Check<T>::vanishing("truncation_ladder", miss, unit));
  }

  const auto [pairing, rearranged] = hardy_littlewood_check(f, g);
  out.push_back(Check<T>::inequality("hardy_littlewood", pairing, rearranged));
  out.push_back(Check<T>::inequality("holder[L^1]", rearranged, norm(RINorm::lp(kOne), f) * sup_abs(g)));
  out.push_back(Check<T>::inequality("holder[L^2]", T(rearranged * rearranged),
                                     T(lp_integral(f, kTwo) * lp_integral(g, kTwo))));

  const SimpleFunction<T> sum = f + g;
  out.push_back(Check<T>::inequality("sublinearity", decreasing_rearrangement(sum).sup(), T(fs.sup() + gs.sup())));
  return out;
}

template <Scalar T>
std::vector<Check<T>> evaluate_checks(const TrialConfig& cfg, const Instance& instance) {
  const SpacePtr<T> space = instance.space<T>();
  const SimpleFunction<T> f = instance.function<T>("f", space);
  const SimpleFunction<T> g = instance.function<T>("g", space);
  switch (cfg.suite) {
    case Suite::Lemma31: {
      const auto [lhs, rhs] = lemma31_bound(f, g, instance.function<T>("h", space));
      return {Check<T>::inequality("lemma31", lhs, rhs)};
    }
    case Suite::Thm32:
      return {thm32_check(f, g, instance.function<T>("h", space))};
    case Suite::Thm41:
      return {thm41_check(cfg.exponents, f, g)};
    case Suite::Thm43: {
      auto [first, second] = thm43_checks(cfg.norm, f, g);
      return {std::move(first), std::move(second)};
    }
    case Suite::Rearrange:
      return rearrange_checks(f, g);
    case Suite::All:
      break;
  }
  throw InvalidInput("the combined suite has no single evaluation");
}

std::size_t VerificationReport::total_violations() const {
  std::size_t total = violations.size();
  for (const auto& f : fixtures) total += f.passed ? 0 : 1;
  for (const auto& child : children) total += child.total_violations();
  return total;
}

Json VerificationReport::to_json() const {
  Json j{{"suite", suite}, {"trials", trials}, {"config", config}, {"grazes", grazes}};
  j["min_gap"] = min_gap ? Json(*min_gap) : Json(nullptr);
  j["argmin_trial"] = argmin_trial ? Json(*argmin_trial) : Json(nullptr);
  j["argmin_instance"] = argmin_instance;
  j["violations"] = Json::array();
  for (const auto& v : violations) j["violations"].push_back(v);
  j["properties"] = Json::array();
  for (const auto& p : properties) {
    j["properties"].push_back({{"name", p.name},
                               {"checked", p.checked},
                               {"passed", p.passed},
                               {"min_gap", p.min_gap ? Json(*p.min_gap) : Json(nullptr)}});
  }
  j["fixtures"] = Json::array();
  for (const auto& f : fixtures) {
    j["fixtures"].push_back({{"name", f.name},
                             {"property", f.property},
                             {"mode", f.mode},
                             {"lhs", f.lhs},
                             {"rhs", f.rhs},
                             {"gap", f.gap},
                             {"passed", f.passed}});
  }
  j["histogram"] = histogram;
  if (!children.empty()) {
    Json suites = Json::object();
    for (const auto& child : children) suites[child.suite] = child.to_json();
    j["suites"] = std::move(suites);
  }
  return j;
}

VerificationReport verify(const TrialConfig& cfg) {
  cfg.validate();
  if (cfg.suite != Suite::All) return run_single(cfg);

  VerificationReport report;
  report.suite = "all";
  report.trials = cfg.trials;
  report.config = cfg.to_json();
  for (Suite s : {Suite::Lemma31, Suite::Thm32, Suite::Thm41, Suite::Thm43, Suite::Rearrange}) {
    TrialConfig child = cfg;
    child.suite = s;
    if (s == Suite::Thm43) child.weights = WeightScheme::Equal;
    report.children.push_back(run_single(child));
    const auto& r = report.children.back();
    for (const auto& v : r.violations) report.violations.push_back(v);
    report.grazes += r.grazes;
    if (r.min_gap_value && (!report.min_gap_value || *r.min_gap_value < *report.min_gap_value)) {
      report.min_gap = r.min_gap;
      report.min_gap_value = r.min_gap_value;
      report.argmin_trial = r.argmin_trial;
      report.argmin_instance = r.argmin_instance;
    }
  }
  return report;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        const std::size_t end = std::min(count, (t + 1) * chunk);
        for (std::size_t i = t * chunk; i < end; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

#define RLAB_INSTANTIATE(T)                                                                              \
  template struct Check<T>;                                                                              \
  template Check<T> thm32_check(const SimpleFunction<T>&, const SimpleFunction<T>&, const SimpleFunction<T>&); \
  template Check<T> thm41_check(const ExponentTuple&, const SimpleFunction<T>&, const SimpleFunction<T>&); \
  template std::pair<Check<T>, Check<T>> thm43_checks(const RINorm&, const SimpleFunction<T>&,          \
                                                      const SimpleFunction<T>&);                         \
  template std::vector<Check<T>> rearrange_checks(const SimpleFunction<T>&, const SimpleFunction<T>&);   \
  template std::vector<Check<T>> evaluate_checks<T>(const TrialConfig&, const Instance&);

RLAB_INSTANTIATE(Rational)
RLAB_INSTANTIATE(double)
RLAB_INSTANTIATE(Quad)

#undef RLAB_INSTANTIATE

}  // namespace rlab
