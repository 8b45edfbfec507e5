#include "rlab_cli/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rlab/json_io.hpp"
#include "rlab/oscillation.hpp"
#include "rlab/search.hpp"
#include "rlab/verify.hpp"

namespace rlab::cli {

namespace {

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        break;
      default:
        out += c;
    }
  }
  return out;
}

int report_error(std::ostream& err, const std::string& code, const std::string& message, int exit_code) {
  err << "error: code=" << code << " message=\"" << escape(message) << "\"\n";
  return exit_code;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << content;
  if (!out) throw InvalidInput("failed writing '" + path + "'");
}

int float_bits_from_env() {
  const char* value = std::getenv("REARRANGE_LAB_PRECISION");
  if (value == nullptr || std::string(value).empty()) return 53;
  const std::string text(value);
  if (text == "53") return 53;
  if (text == "113") return 113;
  throw InvalidInput("REARRANGE_LAB_PRECISION must be 53 or 113, got '" + text + "'");
}

std::pair<std::size_t, std::size_t> parse_atoms(const std::string& text) {
  auto number = [&](const std::string& part) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
      throw InvalidInput("--atoms expects n or a..b, got '" + text + "'");
    }
    return static_cast<std::size_t>(std::stoull(part));
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const std::size_t n = number(text);
    return {n, n};
  }
  return {number(text.substr(0, dots)), number(text.substr(dots + 2))};
}

RINorm parse_norm_flag(const std::string& text) {
  const std::string body = !text.empty() && text.front() == '@' ? read_file(text.substr(1)) : text;
  return norm_from_json(parse_json(body));
}

std::vector<Rational> parse_weights_flag(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(parse_rational(part));
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

void emit(std::ostream& out, const std::string& path, const std::string& content) {
  if (path.empty()) {
    out << content;
  } else {
    write_file(path, content);
  }
}

template <Scalar T>
Json rearrange_in(const Instance& instance, const std::string& name) {
  const auto space = instance.space<T>();
  return profile_to_json(decreasing_rearrangement(instance.function<T>(name, space)));
}

struct Options {
  std::string input;
  std::string rearrange_function;
  std::string decompose_function;
  std::string suite;
  std::size_t trials = 10000;
  std::string atoms;
  std::uint64_t seed = 0;
  std::string mode = "exact";
  std::string weights;
  std::string norm;
  std::string exponents;
  std::string out;
  std::string sidecar;
  std::string lattice_step = "1/4";
  int lattice_radius = 8;
  unsigned threads = 1;
  std::string target;
  std::size_t iters = 1000;
  std::size_t restarts = 8;
  std::size_t grid = 101;
  int params = 1;
  double lo = -2;
  double hi = 2;
};

SearchProblem search_problem(const Options& o) {
  SearchProblem problem;
  problem.target = parse_target(o.target);
  const auto [lo, hi] = parse_atoms(o.atoms.empty() ? "2" : o.atoms);
  if (lo != hi) throw InvalidInput("search takes a single atom count");
  problem.atoms = lo;
  if (!o.weights.empty() && o.weights != "equal") problem.weights = parse_weights_flag(o.weights);
  if (!o.exponents.empty()) problem.exponents = ExponentTuple::parse(o.exponents);
  if (!o.norm.empty()) problem.norm = parse_norm_flag(o.norm);
  return problem;
}

int cmd_rearrange(const Options& o, std::ostream& out) {
  const Instance instance = instance_from_json(parse_json(read_file(o.input)));
  const Mode mode = instance.natural_mode();
  (void)instance.values(o.rearrange_function);
  Json result;
  if (mode == Mode::Exact) {
    result = rearrange_in<Rational>(instance, o.rearrange_function);
  } else if (float_bits_from_env() == 113) {
    result = rearrange_in<Quad>(instance, o.rearrange_function);
  } else {
    result = rearrange_in<double>(instance, o.rearrange_function);
  }
  out << dump_canonical(result);
  return kOk;
}

int cmd_decompose(const Options& o, std::ostream& out) {
  const Instance instance = instance_from_json(parse_json(read_file(o.input)));
  if (instance.natural_mode() != Mode::Exact) {
    throw PreconditionViolated("decomposition needs weights summing to exactly 1");
  }
  const auto space = instance.space<Rational>();
  const auto decomposition = zero_mean_decompose(instance.function<Rational>(o.decompose_function, space));
  out << dump_canonical(decomposition_to_json(decomposition));
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  TrialConfig cfg;
  cfg.suite = parse_suite(o.suite);
  cfg.trials = o.trials;
  if (!o.atoms.empty()) std::tie(cfg.atoms_min, cfg.atoms_max) = parse_atoms(o.atoms);
  cfg.seed = o.seed;
  cfg.mode = parse_mode(o.mode);
  cfg.float_bits = float_bits_from_env();
  if (!o.weights.empty()) cfg.weights = parse_weight_scheme(o.weights);
  cfg.lattice_step = parse_rational(o.lattice_step);
  cfg.lattice_radius = o.lattice_radius;
  if (!o.exponents.empty()) cfg.exponents = ExponentTuple::parse(o.exponents);
  if (!o.norm.empty()) cfg.norm = parse_norm_flag(o.norm);
  cfg.threads = o.threads;
  cfg.validate();

  const auto start = std::chrono::steady_clock::now();
  const VerificationReport report = verify(cfg);
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  emit(out, o.out, dump_canonical(report.to_json()));
  if (!o.sidecar.empty()) {
    write_file(o.sidecar, dump_canonical(Json{{"timestamp", utc_timestamp()},
                                              {"elapsed_ms", elapsed},
                                              {"threads", cfg.threads}}));
  }
  return report.total_violations() > 0 ? kViolation : kOk;
}

int cmd_search(const Options& o, std::ostream& out) {
  const SearchProblem problem = search_problem(o);
  SearchOptions options{o.iters, o.restarts, o.seed, o.threads};
  const SearchResult result = search(problem, options);
  emit(out, o.out, dump_canonical(result.to_json(problem, options)));
  return result.certificate ? kViolation : kOk;
}

int cmd_landscape(const Options& o, std::ostream& out) {
  const SearchProblem problem = search_problem(o);
  LandscapeOptions options{o.grid, o.lo, o.hi, o.params};
  emit(out, o.out, ratio_landscape(problem, options));
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rearrangement inequality lab: rearrangements, decompositions, verification and extremal search",
               "rlab"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  Options o;

  auto* rearrange = app.add_subcommand("rearrange", "Decreasing rearrangement of a function as a step profile");
  rearrange->add_option("--input", o.input, "Instance JSON file")->required();
  rearrange->add_option("--function", o.rearrange_function, "Function name in the instance")->default_val("f");

  auto* decompose = app.add_subcommand("decompose", "Zero-mean two-level block decomposition");
  decompose->add_option("--input", o.input, "Instance JSON file")->required();
  decompose->add_option("--function", o.decompose_function, "Function name in the instance")->default_val("g");

  auto* verify_cmd = app.add_subcommand("verify", "Randomized verification suite");
  verify_cmd->add_option("--suite", o.suite, "lemma31|thm32|thm41|thm43|rearrange|all")
      ->required()
      ->check(CLI::IsMember({"lemma31", "thm32", "thm41", "thm43", "rearrange", "all"}));
  verify_cmd->add_option("--trials", o.trials, "Number of random trials")->default_val(10000);
  verify_cmd->add_option("--atoms", o.atoms, "Atom count n, or a range a..b (default 2..8)");
  verify_cmd->add_option("--seed", o.seed, "Seed")->default_val(0);
  verify_cmd->add_option("--mode", o.mode, "exact|float")->check(CLI::IsMember({"exact", "float"}));
  verify_cmd->add_option("--weights", o.weights, "equal|random")->check(CLI::IsMember({"equal", "random"}));
  verify_cmd->add_option("--norm", o.norm, "Norm descriptor JSON, inline or @file");
  verify_cmd->add_option("--exponents", o.exponents, "r,p1,q1,p2,q2");
  verify_cmd->add_option("--lattice-step", o.lattice_step, "Value lattice step")->default_val("1/4");
  verify_cmd->add_option("--lattice-radius", o.lattice_radius, "Value lattice radius")->default_val(8);
  verify_cmd->add_option("--out", o.out, "Write the report here instead of stdout");
  verify_cmd->add_option("--sidecar", o.sidecar, "Write a timestamp sidecar JSON here");
  verify_cmd->add_option("--threads", o.threads, "Concurrency cap")->default_val(1)->check(CLI::PositiveNumber);

  auto add_problem_flags = [&](CLI::App* cmd) {
    cmd->add_option("--target", o.target, "thm32|thm41|thm43 (optionally with -ratio)")->required();
    cmd->add_option("--atoms", o.atoms, "Atom count (default 2)");
    cmd->add_option("--weights", o.weights, "Comma-separated weights (default equal)");
    cmd->add_option("--exponents", o.exponents, "r,p1,q1,p2,q2 for thm41");
    cmd->add_option("--norm", o.norm, "Norm descriptor JSON for thm43, inline or @file");
    cmd->add_option("--out", o.out, "Write output here instead of stdout");
  };

  auto* search_cmd = app.add_subcommand("search", "Hill-climbing search for near-extremal ratios");
  add_problem_flags(search_cmd);
  search_cmd->add_option("--iters", o.iters, "Iterations per restart")->default_val(1000);
  search_cmd->add_option("--restarts", o.restarts, "Independent restarts")->default_val(8);
  search_cmd->add_option("--seed", o.seed, "Seed")->default_val(0);
  search_cmd->add_option("--threads", o.threads, "Concurrency cap")->default_val(1)->check(CLI::PositiveNumber);

  auto* landscape = app.add_subcommand("landscape", "Tabulate LHS/RHS over a two-atom parameter grid as CSV");
  add_problem_flags(landscape);
  landscape->add_option("--grid", o.grid, "Points per axis")->default_val(101);
  landscape->add_option("--params", o.params, "Free parameters: 1 or 2")->default_val(1);
  landscape->add_option("--lo", o.lo, "Lower end of the parameter range")->default_val(-2);
  landscape->add_option("--hi", o.hi, "Upper end of the parameter range")->default_val(2);

  std::vector<std::string> argv_storage{"rlab"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return report_error(err, "invalid_flag", e.what(), kUsageError);
  }

  try {
    if (rearrange->parsed()) return cmd_rearrange(o, out);
    if (decompose->parsed()) return cmd_decompose(o, out);
    if (verify_cmd->parsed()) return cmd_verify(o, out);
    if (search_cmd->parsed()) return cmd_search(o, out);
    if (landscape->parsed()) return cmd_landscape(o, out);
  } catch (const PreconditionViolated& e) {
    return report_error(err, e.code(), e.what(), kPreconditionError);
  } catch (const Error& e) {
    return report_error(err, e.code(), e.what(), kUsageError);
  } catch (const std::exception& e) {
    return report_error(err, "internal_error", e.what(), kUsageError);
  }
  return report_error(err, "invalid_flag", "no command given", kUsageError);
}

}  // namespace rlab::cli
