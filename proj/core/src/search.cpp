#include "rlab/search.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace rlab {

namespace {

constexpr int kDyadicBits = 20;

class SearchRng {
 public:
  SearchRng(std::uint64_t seed, std::size_t restart) {
    std::uint64_t x = seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(restart) + 1;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    engine_.seed(x ^ (x >> 31));
  }

  int uniform(int lo, int hi) { return boost::random::uniform_int_distribution<int>(lo, hi)(engine_); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform(0, static_cast<int>(n) - 1)); }
  // Dyadic value in [-1, 1].
  double unit() {
    return std::ldexp(static_cast<double>(uniform(-(1 << kDyadicBits), 1 << kDyadicBits)), -kDyadicBits);
  }

 private:
  boost::random::mt19937_64 engine_;
};

double ratio_of(const std::pair<double, double>& sides) {
  if (!(sides.second > 0) || !std::isfinite(sides.first) || !std::isfinite(sides.second)) {
    return -std::numeric_limits<double>::infinity();
  }
  return sides.first / sides.second;
}

void center_in_place(std::vector<double>& g, const std::vector<double>& w) {
  double mean = 0;
  for (std::size_t i = 0; i < g.size(); ++i) mean += g[i] * w[i];
  for (auto& v : g) v -= mean;
}

struct RestartOutcome {
  double ratio = -std::numeric_limits<double>::infinity();
  std::pair<double, double> sides{0, 0};
  std::vector<std::vector<double>> values;
  std::vector<TracePoint> trace;
};

RestartOutcome climb(const SearchProblem& problem, const std::vector<double>& weights, std::size_t iters,
                     std::uint64_t seed, std::size_t restart) {
  SearchRng rng(seed, restart);
  const std::size_t vars = problem.variables().size();
  const std::size_t n = problem.atoms;
  const bool centered_g = problem.target == Target::Thm32;
  constexpr std::size_t kG = 1;

  auto normalize = [&](std::vector<std::vector<double>>& v) {
    if (centered_g) center_in_place(v[kG], weights);
  };

  std::vector<std::vector<double>> current(vars, std::vector<double>(n, 0.0));
  double current_ratio = -std::numeric_limits<double>::infinity();
  std::pair<double, double> current_sides{0, 0};
  for (int attempt = 0; attempt < 64 && !std::isfinite(current_ratio); ++attempt) {
    for (auto& fn : current) {
      for (auto& x : fn) x = rng.unit();
    }
    normalize(current);
    current_sides = evaluate_ratio_sides(problem, current);
    current_ratio = ratio_of(current_sides);
  }

  RestartOutcome out;
  out.ratio = current_ratio;
  out.sides = current_sides;
  out.values = current;
  if (std::isfinite(current_ratio)) out.trace.push_back({0, current_ratio});

  double step = 0.5;
  std::size_t failures = 0;
  const std::size_t patience = 4 * vars * n;
  for (std::size_t it = 1; it <= iters; ++it) {
    auto candidate = current;
    const std::size_t k = rng.index(vars);
    const std::size_t i = rng.index(n);
    double& x = candidate[k][i];
    switch (rng.uniform(0, 7)) {
      case 0:
        x += step;
        break;
      case 1:
        x -= step;
        break;
      case 2:
        x *= 1 + step;
        break;
      case 3:
        x *= 1 - step;
        break;
      case 4:
        x = 1;
        break;
      case 5:
        x = -1;
        break;
      case 6:
        x = candidate[k][rng.index(n)];
        break;
      default:
        x = -x;
        break;
    }
    x = std::clamp(x, -1.0, 1.0);
    normalize(candidate);
    const auto sides = evaluate_ratio_sides(problem, candidate);
    const double r = ratio_of(sides);
    if (r > current_ratio) {
      current = std::move(candidate);
      current_ratio = r;
      current_sides = sides;
      step = std::min(1.0, step * 1.5);
      failures = 0;
      if (r > out.ratio) {
        out.ratio = r;
        out.sides = sides;
        out.values = current;
        out.trace.push_back({it, r});
      }
    } else if (++failures > patience) {
      step *= 0.5;
      failures = 0;
      if (step < 1e-9) step = 0.5;
    }
  }
  return out;
}

// Rational instance for the recheck; g is centered exactly.
Instance exact_instance(const SearchProblem& problem, const std::vector<std::vector<double>>& values) {
  Instance inst;
  inst.weights = problem.resolved_weights();
  const auto names = problem.variables();
  for (std::size_t k = 0; k < names.size(); ++k) {
    std::vector<Rational> v;
    for (double x : values[k]) v.push_back(to_rational(x));
    inst.functions.emplace(names[k], std::move(v));
  }
  if (problem.target == Target::Thm32) {
    auto& g = inst.functions.at("g");
    Rational mean = 0;
    for (std::size_t i = 0; i < g.size(); ++i) mean += g[i] * inst.weights[i];
    for (auto& v : g) v -= mean;
  }
  return inst;
}

TrialConfig config_for(const SearchProblem& problem) {
  TrialConfig cfg;
  cfg.suite = problem.target == Target::Thm32 ? Suite::Thm32
              : problem.target == Target::Thm41 ? Suite::Thm41
                                                : Suite::Thm43;
  cfg.exponents = problem.exponents;
  cfg.norm = problem.norm;
  return cfg;
}

template <Scalar T>
std::optional<Json> confirm(const TrialConfig& cfg, const Instance& inst, const std::string& mode) {
  const auto checks = evaluate_checks<T>(cfg, inst);
  for (const auto& c : checks) {
    const bool violated = is_exact_v<T> ? c.gap() < 0 : c.gap() < -c.tolerance(kQuadRelTol, kQuadRelTol);
    if (violated) {
      return Json{{"property", c.property},
                  {"instance", instance_to_json(inst)},
                  {"recheck", {{"mode", mode}, {"lhs", to_string(c.lhs)}, {"rhs", to_string(c.rhs)},
                               {"gap", to_string(c.gap())}}}};
    }
  }
  return std::nullopt;
}

std::optional<Json> recheck(const SearchProblem& problem, const std::vector<std::vector<double>>& values) {
  const TrialConfig cfg = config_for(problem);
  const Instance inst = exact_instance(problem, values);
  try {
    return confirm<Rational>(cfg, inst, "exact");
  } catch (const InexactOperation&) {
    return confirm<Quad>(cfg, inst, "quad");
  }
}

std::string csv_number(double x) { return std::isnan(x) ? "nan" : to_string(x); }

}  // namespace

std::string to_string(Target target) {
  switch (target) {
    case Target::Thm32:
      return "thm32";
    case Target::Thm41:
      return "thm41";
    case Target::Thm43:
      return "thm43";
  }
  return "?";
}

Target parse_target(std::string_view text) {
  for (Target t : {Target::Thm32, Target::Thm41, Target::Thm43}) {
    if (text == to_string(t) || text == to_string(t) + "-ratio") return t;
  }
  throw InvalidInput("unknown search target '" + std::string(text) + "'");
}

std::vector<Rational> SearchProblem::resolved_weights() const {
  if (weights.empty()) return std::vector<Rational>(atoms, Rational(1, static_cast<long>(atoms)));
  return weights;
}

std::vector<std::string> SearchProblem::variables() const {
  if (target == Target::Thm32) return {"f", "g", "h"};
  return {"f", "g"};
}

void SearchProblem::validate() const {
  if (atoms < 1) throw InvalidInput("search needs at least one atom");
  if (!weights.empty() && weights.size() != atoms) throw InvalidInput("weight count does not match atoms");
  const auto w = resolved_weights();
  (void)DiscreteSpace<Rational>(w);
  exponents.validate();
  if (atoms == 1) {
    throw InfeasibleProblem("one atom admits no instance with positive right-hand side" +
                            std::string(target == Target::Thm32 ? " (zero-mean g must vanish)" : ""));
  }
  if (target == Target::Thm43) {
    for (const auto& x : w) {
      if (x != w.front()) throw NonEqualAtomSpace("thm43 search runs on equal-atom spaces only");
    }
    // Surface unsupported norms before searching.
    (void)evaluate_ratio_sides(*this, std::vector<std::vector<double>>(2, std::vector<double>(atoms, 1.0)));
  }
}

Json SearchProblem::to_json() const {
  Json weights_json = Json::array();
  for (const auto& w : resolved_weights()) weights_json.push_back(rlab::to_string(w));
  Json j{{"target", to_string(target)}, {"atoms", atoms}, {"weights", std::move(weights_json)}};
  if (target == Target::Thm41) j["exponents"] = exponents.to_string();
  if (target == Target::Thm43) j["norm"] = norm_to_json(norm);
  return j;
}

std::pair<double, double> evaluate_ratio_sides(const SearchProblem& problem,
                                               const std::vector<std::vector<double>>& values) {
  std::vector<double> w;
  for (const auto& x : problem.resolved_weights()) w.push_back(rational_to_double(x));
  const auto space = DiscreteSpace<double>::make(std::move(w));
  const SimpleFunction<double> f(space, values.at(0));
  const SimpleFunction<double> g(space, values.at(1));
  switch (problem.target) {
    case Target::Thm32: {
      const auto c = thm32_check(f, g, SimpleFunction<double>(space, values.at(2)));
      return {c.lhs, c.rhs};
    }
    case Target::Thm41: {
      const auto c = thm41_check(problem.exponents, f, g);
      return {c.lhs, c.rhs};
    }
    case Target::Thm43: {
      const auto [first, second] = thm43_checks(problem.norm, f, g);
      const double r1 = ratio_of({first.lhs, first.rhs});
      const double r2 = ratio_of({second.lhs, second.rhs});
      return r2 > r1 ? std::pair{second.lhs, second.rhs} : std::pair{first.lhs, first.rhs};
    }
  }
  throw InvalidInput("unknown search target");
}

SearchResult search(const SearchProblem& problem, const SearchOptions& options) {
  if (options.iters < 1 || options.restarts < 1) throw InvalidInput("iters and restarts must be at least 1");
  if (options.threads < 1) throw InvalidInput("thread count must be at least 1");
  problem.validate();
  std::vector<double> weights;
  for (const auto& x : problem.resolved_weights()) weights.push_back(rational_to_double(x));

  std::vector<RestartOutcome> outcomes(options.restarts);
  parallel_for(options.restarts, options.threads, [&](std::size_t r) {
    outcomes[r] = climb(problem, weights, options.iters, options.seed, r);
  });

  SearchResult result;
  result.restarts = options.restarts;
  result.iterations = options.iters;
  std::optional<std::size_t> best;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    result.restart_best.push_back(outcomes[r].ratio);
    if (std::isfinite(outcomes[r].ratio) && (!best || outcomes[r].ratio > outcomes[*best].ratio)) best = r;
  }
  if (!best) throw InfeasibleProblem("no starting point with positive right-hand side was found");
  const auto& winner = outcomes[*best];
  result.best_restart = *best;
  result.best_ratio = winner.ratio;
  result.best_lhs = winner.sides.first;
  result.best_rhs = winner.sides.second;
  result.best_values = winner.values;
  result.trace = winner.trace;
  if (result.best_ratio > 1 + kRatioTol) result.certificate = recheck(problem, result.best_values);
  return result;
}

Json SearchResult::to_json(const SearchProblem& problem, const SearchOptions& options) const {
  Json functions = Json::object();
  const auto names = problem.variables();
  for (std::size_t k = 0; k < names.size() && k < best_values.size(); ++k) {
    Json v = Json::array();
    for (double x : best_values[k]) v.push_back(rlab::to_string(x));
    functions[names[k]] = std::move(v);
  }
  Json weights_json = Json::array();
  for (const auto& w : problem.resolved_weights()) weights_json.push_back(rlab::to_string(w));

  Json trace_json = Json::array();
  for (const auto& p : trace) trace_json.push_back({p.iteration, rlab::to_string(p.ratio)});
  Json restart_json = Json::array();
  for (double r : restart_best) restart_json.push_back(rlab::to_string(r));

  return Json{{"target", to_string(problem.target)},
              {"problem", problem.to_json()},
              {"iterations", options.iters},
              {"restarts", restarts},
              {"seed", options.seed},
              {"best_ratio", rlab::to_string(best_ratio)},
              {"best_lhs", rlab::to_string(best_lhs)},
              {"best_rhs", rlab::to_string(best_rhs)},
              {"best_restart", best_restart},
              {"best_instance", {{"space", {{"weights", std::move(weights_json)}}}, {"functions", std::move(functions)}}},
              {"restart_best", std::move(restart_json)},
              {"trace", std::move(trace_json)},
              {"violations", certificate ? Json::array({*certificate}) : Json::array()}};
}

std::string ratio_landscape(const SearchProblem& problem, const LandscapeOptions& options) {
  if (problem.atoms != 2) {
    throw TooManyFreeParameters("landscapes need a two-atom problem; " + std::to_string(problem.atoms) +
                                " atoms leave more than two free parameters");
  }
  if (options.params != 1 && options.params != 2) throw InvalidInput("landscape parameters must be 1 or 2");
  if (options.grid < 1) throw InvalidInput("grid resolution must be at least 1");
  if (!(options.lo <= options.hi)) throw InvalidInput("landscape range must satisfy lo <= hi");
  problem.validate();

  auto axis = [&](std::size_t k) {
    if (options.grid == 1) return options.lo;
    return options.lo + (options.hi - options.lo) * static_cast<double>(k) / static_cast<double>(options.grid - 1);
  };
  std::ostringstream out;
  out << "param1,param2,lhs,rhs,ratio\n";
  const std::size_t rows2 = options.params == 2 ? options.grid : 1;
  for (std::size_t a = 0; a < options.grid; ++a) {
    for (std::size_t b = 0; b < rows2; ++b) {
      const double s = axis(a);
      const double t = axis(b);
      std::vector<std::vector<double>> values;
      if (problem.target == Target::Thm32) {
        // g = (1, -1) is the only zero-mean shape up to scale on equal atoms;
        // on weighted atoms it is centered below.
        values = {{1, s}, {1, -1}, {-1, options.params == 2 ? t : 1}};
        std::vector<double> w;
        for (const auto& x : problem.resolved_weights()) w.push_back(rational_to_double(x));
        center_in_place(values[1], w);
      } else {
        values = {{1, s}, {1, options.params == 2 ? t : -1}};
      }
      const auto sides = evaluate_ratio_sides(problem, values);
      const double ratio = sides.second > 0 ? sides.first / sides.second : std::nan("");
      out << csv_number(s) << "," << (options.params == 2 ? csv_number(t) : "") << "," << csv_number(sides.first)
          << "," << csv_number(sides.second) << "," << csv_number(ratio) << "\n";
    }
  }
  return out.str();
}

}  // namespace rlab
