#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rlab/search.hpp"

using namespace rlab;

namespace {

std::vector<std::vector<std::string>> csv_rows(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST(SearchProblem, TargetsAndVariables) {
  EXPECT_EQ(parse_target("thm32-ratio"), Target::Thm32);
  EXPECT_EQ(parse_target("thm43"), Target::Thm43);
  EXPECT_THROW(parse_target("thm5"), InvalidInput);
  SearchProblem p;
  EXPECT_EQ(p.variables(), (std::vector<std::string>{"f", "g", "h"}));
  p.target = Target::Thm41;
  EXPECT_EQ(p.variables(), (std::vector<std::string>{"f", "g"}));
}

TEST(SearchProblem, Validation) {
  SearchProblem p;
  p.atoms = 0;
  EXPECT_THROW(p.validate(), InvalidInput);
  p.atoms = 2;
  p.weights = {Rational(1, 2), Rational(1, 3)};
  EXPECT_THROW(p.validate(), PreconditionViolated);
  p.target = Target::Thm43;
  p.weights = {Rational(1, 4), Rational(3, 4)};
  EXPECT_THROW(p.validate(), NonEqualAtomSpace);
}

TEST(EvaluateRatio, EqualityWitness) {
  SearchProblem p;
  const auto [lhs, rhs] = evaluate_ratio_sides(p, {{1, 1}, {1, -1}, {-1, 1}});
  EXPECT_DOUBLE_EQ(lhs, 2.0);
  EXPECT_DOUBLE_EQ(rhs, 2.0);
}

TEST(Search, Thm32ReachesEquality) {
  SearchProblem p;
  SearchOptions o;
  o.iters = 1000;
  o.seed = 3;
  const auto r = search(p, o);
  EXPECT_GE(r.best_ratio, 1 - 1e-6);
  EXPECT_LE(r.best_ratio, 1 + kRatioTol);
  EXPECT_FALSE(r.certificate.has_value());
}

TEST(Search, Thm43L1NearOne) {
  SearchProblem p;
  p.target = Target::Thm43;
  p.atoms = 4;
  SearchOptions o;
  o.iters = 1000;
  o.seed = 5;
  const auto r = search(p, o);
  EXPECT_GE(r.best_ratio, 0.99);
  EXPECT_LE(r.best_ratio, 1 + kRatioTol);
}

TEST(Search, TraceIsMonotone) {
  SearchProblem p;
  p.target = Target::Thm41;
  p.atoms = 3;
  p.exponents = ExponentTuple::parse("1,2,2,2,2");
  SearchOptions o;
  o.iters = 300;
  o.restarts = 3;
  o.seed = 9;
  const auto r = search(p, o);
  ASSERT_FALSE(r.trace.empty());
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    EXPECT_GE(r.trace[i].ratio, r.trace[i - 1].ratio);
    EXPECT_GE(r.trace[i].iteration, r.trace[i - 1].iteration);
  }
  EXPECT_DOUBLE_EQ(r.trace.back().ratio, r.best_ratio);
  EXPECT_EQ(r.restart_best.size(), 3u);
  EXPECT_EQ(r.best_values.size(), 2u);
  const auto [lhs, rhs] = evaluate_ratio_sides(p, r.best_values);
  EXPECT_NEAR(lhs / rhs, r.best_ratio, 1e-12);
}

TEST(Search, DeterministicAcrossThreads) {
  SearchProblem p;
  p.atoms = 3;
  SearchOptions o;
  o.iters = 200;
  o.restarts = 4;
  o.seed = 1;
  o.threads = 1;
  const std::string one = dump_canonical(search(p, o).to_json(p, o));
  o.threads = 4;
  EXPECT_EQ(dump_canonical(search(p, o).to_json(p, o)), one);
}

TEST(Landscape, Thm41Grid) {
  SearchProblem p;
  p.target = Target::Thm41;
  const std::string csv = ratio_landscape(p, LandscapeOptions{});
  const auto rows = csv_rows(csv);
  ASSERT_EQ(rows.size(), 102u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"param1", "param2", "lhs", "rhs", "ratio"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 5u);
    EXPECT_TRUE(rows[i][1].empty());
    EXPECT_LE(std::stod(rows[i][4]), 1 + kRatioTol);
  }
  EXPECT_DOUBLE_EQ(std::stod(rows[1][0]), -2.0);
  EXPECT_DOUBLE_EQ(std::stod(rows.back()[0]), 2.0);
}

TEST(Landscape, Thm32PeaksAtWitness) {
  SearchProblem p;
  LandscapeOptions o;
  o.grid = 41;
  const auto rows = csv_rows(ratio_landscape(p, o));
  ASSERT_EQ(rows.size(), 42u);
  double best = -1;
  double at_one = -1;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double ratio = std::stod(rows[i][4]);
    best = std::max(best, ratio);
    if (std::abs(std::stod(rows[i][0]) - 1) < 1e-12) at_one = ratio;
  }
  EXPECT_LE(best, 1 + kRatioTol);
  EXPECT_NEAR(at_one, 1.0, 1e-12);
}

TEST(Landscape, SinglePointAndTwoParameters) {
  SearchProblem p;
  p.target = Target::Thm41;
  LandscapeOptions one;
  one.grid = 1;
  EXPECT_EQ(csv_rows(ratio_landscape(p, one)).size(), 2u);
  LandscapeOptions two;
  two.grid = 5;
  two.params = 2;
  const auto rows = csv_rows(ratio_landscape(p, two));
  EXPECT_EQ(rows.size(), 26u);
  EXPECT_FALSE(rows[1][1].empty());
}

TEST(Landscape, RejectsLargerProblems) {
  SearchProblem p;
  p.atoms = 3;
  EXPECT_THROW(ratio_landscape(p, LandscapeOptions{}), TooManyFreeParameters);
}
