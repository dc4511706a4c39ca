#include "wsum/cli.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wsum/appendix.hpp"
#include "wsum/bounds.hpp"
#include "wsum/errors.hpp"
#include "wsum/report_json.hpp"
#include "wsum/sum_engine.hpp"

namespace wsum::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string dist;
  std::string mode;
  std::string a;
  std::string b;
  std::string t_grid = "auto";
  std::size_t samples = kDefaultSamples;
  std::uint64_t seed = 0;
  double z = kDefaultZ;
  double q = 0.0;
  std::string out_path;
  std::string format;
  std::size_t grid_size = kDefaultConditionGrid;
  std::optional<double> p;
  std::optional<double> beta;
  std::optional<double> t;
  std::size_t y_resolution = kDefaultYResolution;
  std::size_t n = 2;
  std::optional<std::size_t> steps;
};

Eigen::VectorXd parse_t_grid(const std::string& text) {
  if (text == "auto") return {};
  std::vector<double> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto colon = std::min(text.find(':', pos), text.size());
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + colon, v);
    if (ec != std::errc() || ptr != text.data() + colon || colon == pos)
      throw ParseError(text, static_cast<std::size_t>(ptr - text.data()), "expected 'auto' or 'min:max:count'");
    parts.push_back(v);
    pos = colon + 1;
  }
  if (parts.size() != 3) throw ParseError(text, text.size(), "expected 'auto' or 'min:max:count'");
  const double count = parts[2];
  if (!(count >= 2.0) || count != std::floor(count)) throw ParseError(text, text.rfind(':') + 1, "count must be an integer >= 2");
  if (!(parts[1] > parts[0])) throw ParseError(text, 0, "max must exceed min");
  return linear_grid(parts[0], parts[1], static_cast<std::size_t>(count));
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out_path.empty() || o.out_path == "-") {
    out << text;
    return;
  }
  std::ofstream file(o.out_path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file '" + o.out_path + "'");
  file << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_check_conditions(const Options& o, std::ostream& out) {
  const auto d = DistributionSpec::parse(o.dist);
  std::vector<ConditionReport> reports;
  if (o.mode.empty()) {
    if (d.positive_support())
      reports.push_back(check_theorem1_condition(d, o.grid_size));
    else
      reports.push_back(check_theorem4_condition(d, o.grid_size));
  } else {
    const auto mode = PremiseMode::parse(o.mode);
    switch (mode.kind()) {
      case PremiseMode::Kind::Thm1Log: reports.push_back(check_theorem1_condition(d, o.grid_size)); break;
      case PremiseMode::Kind::Thm2Power: reports.push_back(check_theorem2_condition(d, mode.p(), o.grid_size)); break;
      case PremiseMode::Kind::KrPower: reports.push_back(check_kr_condition(d, mode.p(), o.grid_size)); break;
      case PremiseMode::Kind::Thm4Identity: reports.push_back(check_theorem4_condition(d, o.grid_size)); break;
    }
  }
  emit(o, out, dump(json(reports)));
  for (const auto& r : reports)
    if (!r.holds) return kExitViolated;
  return kExitHolds;
}

int cmd_check_premise(const Options& o, std::ostream& out) {
  const auto mode = PremiseMode::parse(o.mode);
  const auto a = WeightVector::parse(o.a);
  const auto b = WeightVector::parse(o.b);
  if (a.size() != b.size()) throw std::invalid_argument("--a and --b must have the same length");
  const auto ta = transform(a, mode);
  const auto tb = transform(b, mode);
  const bool holds = majorizes(tb, ta);
  json j{{"mode", mode.to_string()},
         {"holds", holds},
         {"transformed_a", std::vector<double>(ta.begin(), ta.end())},
         {"transformed_b", std::vector<double>(tb.begin(), tb.end())}};
  emit(o, out, dump(j));
  return holds ? kExitHolds : kExitViolated;
}

int cmd_dominance(const Options& o, std::ostream& out) {
  const auto d = DistributionSpec::parse(o.dist);
  const auto mode = PremiseMode::parse(o.mode);
  const auto a = WeightVector::parse(o.a);
  const auto b = WeightVector::parse(o.b);
  const auto grid = parse_t_grid(o.t_grid);
  const auto cmp = compare_weighted_sums(d, a, b, mode, grid, o.samples, o.seed, o.z);
  emit(o, out, o.format == "csv" ? comparison_csv(cmp) : dump(json(cmp.report)));
  return cmp.report.holds ? kExitHolds : kExitViolated;
}

int cmd_bounds(const Options& o, std::ostream& out) {
  const auto d = DistributionSpec::parse(o.dist);
  const auto a = WeightVector::parse(o.a);
  const auto grid = parse_t_grid(o.t_grid);
  const auto report = sandwich(d, a, o.q, grid, o.samples, o.seed, o.z);
  emit(o, out, o.format == "json" ? dump(json(report)) : bounds_csv(report));
  return report.holds ? kExitHolds : kExitViolated;
}

int cmd_capacity(const Options& o, std::ostream& out) {
  const auto d = DistributionSpec::parse(o.dist);
  const auto a = WeightVector::parse(o.a);
  const auto ea = expected_log_capacity(d, a, o.samples, o.seed);
  json j{{"a", {{"estimate", ea.estimate}, {"std_error", ea.std_error}}}};
  int code = kExitHolds;
  if (!o.b.empty()) {
    const auto b = WeightVector::parse(o.b);
    const auto mode = PremiseMode::parse(o.mode.empty() ? "thm1" : o.mode);
    if (a.size() != b.size()) throw std::invalid_argument("--a and --b must have the same length");
    bool premise = false;
    try {
      premise = premise_holds(a, b, mode);
    } catch (const std::invalid_argument& e) {
      throw PreconditionError(mode.theorem_name() + " premise", e.what());
    }
    if (!premise) throw PreconditionError(mode.theorem_name() + " premise", "transformed a is not majorized by transformed b");
    require_condition(d, mode);
    const auto eb = expected_log_capacity(d, b, o.samples, o.seed);
    const double pooled = std::hypot(ea.std_error, eb.std_error);
    // theorem 2 reverses the order of the two sums
    const bool reversed = mode.kind() == PremiseMode::Kind::Thm2Power;
    const double smaller = reversed ? eb.estimate : ea.estimate;
    const double larger = reversed ? ea.estimate : eb.estimate;
    const bool holds = smaller <= larger + o.z * pooled;
    j["b"] = {{"estimate", eb.estimate}, {"std_error", eb.std_error}};
    j["ordering"] = {{"expected", reversed ? "E_b <= E_a" : "E_a <= E_b"}, {"pooled_se", pooled}, {"holds", holds}};
    code = holds ? kExitHolds : kExitViolated;
  }
  emit(o, out, dump(j));
  return code;
}

int cmd_verify_appendix(const Options& o, std::ostream& out) {
  AppendixGrid grid;
  grid.y_resolution = o.y_resolution;
  const int given = int(o.p.has_value()) + int(o.beta.has_value()) + int(o.t.has_value());
  if (given != 0 && given != 3) throw std::invalid_argument("give all of --p, --beta, --t or none of them");
  if (given == 3) {
    MappingContext::make(*o.p, *o.beta, *o.t);  // validates
    grid.p_values = {*o.p};
    grid.beta_values = {*o.beta};
    grid.t_values = {*o.t};
    grid.kernel_betas = {*o.beta};
  }
  const auto reports = run_appendix_suite(grid);
  emit(o, out, dump(json(reports)));
  for (const auto& r : reports)
    if (!r.holds) return kExitViolated;
  return kExitHolds;
}

int cmd_gen_pair(const Options& o, std::ostream& out) {
  const auto mode = PremiseMode::parse(o.mode);
  SeededStream stream(o.seed, 0);
  const auto pair = random_majorization_pair(o.n, mode, stream, o.steps.value_or(o.n));
  const auto& a = pair.a.values();
  const auto& b = pair.b.values();
  json j{{"mode", mode.to_string()},
         {"a", std::vector<double>(a.begin(), a.end())},
         {"b", std::vector<double>(b.begin(), b.end())},
         {"premise_holds", premise_holds(pair.a, pair.b, mode)}};
  emit(o, out, dump(j));
  return kExitHolds;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic comparison of weighted sums of i.i.d. random variables"};
  app.require_subcommand(1);
  Options o;

  auto add_output = [&](CLI::App* sub, bool has_csv) {
    sub->add_option("--out", o.out_path, "Output file (default: stdout)");
    if (has_csv)
      sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    else
      sub->add_option("--format", o.format, "json")->check(CLI::IsMember({"json"}));
  };
  auto add_mc = [&](CLI::App* sub) {
    sub->add_option("--samples", o.samples, "Monte Carlo sample size");
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--z", o.z, "Tolerance multiplier on pooled standard errors");
  };

  auto* conditions = app.add_subcommand("check-conditions", "Grid check of a log-concavity condition");
  conditions->add_option("--dist", o.dist, "Distribution spec, e.g. gamma:alpha=2,beta=1")->required();
  conditions->add_option("--mode", o.mode, "thm1, thm2:p=<p>, kr:p=<p> or thm4 (default: thm1 / thm4)");
  conditions->add_option("--grid-size", o.grid_size, "Number of grid points")->check(CLI::Range(3, 1 << 24));
  add_output(conditions, false);

  auto* premise = app.add_subcommand("check-premise", "Majorization premise for a pair of weight vectors");
  premise->add_option("--mode", o.mode)->required();
  premise->add_option("--a", o.a)->required();
  premise->add_option("--b", o.b)->required();
  add_output(premise, false);

  auto* dominance = app.add_subcommand("dominance", "Usual stochastic order test between two weighted sums");
  dominance->add_option("--dist", o.dist)->required();
  dominance->add_option("--mode", o.mode)->required();
  dominance->add_option("--a", o.a)->required();
  dominance->add_option("--b", o.b)->required();
  dominance->add_option("--t-grid", o.t_grid, "auto or min:max:count");
  add_mc(dominance);
  add_output(dominance, true);

  auto* bounds = app.add_subcommand("bounds", "Geometric-mean / power-mean two-sided bound");
  bounds->add_option("--dist", o.dist)->required();
  bounds->add_option("--a", o.a)->required();
  bounds->add_option("--q", o.q, "Power-mean exponent q > 1")->required();
  bounds->add_option("--t-grid", o.t_grid, "auto or min:max:count");
  add_mc(bounds);
  add_output(bounds, true);

  auto* capacity = app.add_subcommand("capacity", "Monte Carlo E log(1 + sum a_i Y_i)");
  capacity->add_option("--dist", o.dist)->required();
  capacity->add_option("--a", o.a)->required();
  capacity->add_option("--b", o.b, "Second weight vector to compare against");
  capacity->add_option("--mode", o.mode, "Premise mode for the comparison (default thm1)");
  add_mc(capacity);
  add_output(capacity, false);

  auto* appendix = app.add_subcommand("verify-appendix", "Check every claim of the two-weight reduction");
  appendix->add_option("--p", o.p);
  appendix->add_option("--beta", o.beta);
  appendix->add_option("--t", o.t);
  appendix->add_option("--y-resolution", o.y_resolution)->check(CLI::Range(1, 1 << 20));
  add_output(appendix, false);

  auto* pair = app.add_subcommand("gen-pair", "Random weight pair satisfying a majorization premise");
  pair->add_option("--n", o.n)->check(CLI::Range(2, 1 << 20));
  pair->add_option("--mode", o.mode)->required();
  pair->add_option("--seed", o.seed);
  pair->add_option("--steps", o.steps);
  add_output(pair, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitHolds;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (conditions->parsed()) return cmd_check_conditions(o, out);
    if (premise->parsed()) return cmd_check_premise(o, out);
    if (dominance->parsed()) return cmd_dominance(o, out);
    if (bounds->parsed()) return cmd_bounds(o, out);
    if (capacity->parsed()) return cmd_capacity(o, out);
    if (appendix->parsed()) return cmd_verify_appendix(o, out);
    if (pair->parsed()) return cmd_gen_pair(o, out);
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace wsum::cli
