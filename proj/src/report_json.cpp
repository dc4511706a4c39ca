#include "wsum/report_json.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace wsum {

namespace {

using nlohmann::json;

json real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double real_from(const json& j) {
  return j.is_null() ? -std::numeric_limits<double>::infinity() : j.get<double>();
}

json vec(const Eigen::VectorXd& v) { return json(std::vector<double>(v.begin(), v.end())); }

Eigen::VectorXd vec_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json optional_real(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void to_json(json& j, const CdfCurve& c) {
  j = json{{"t", vec(c.t)},           {"value", vec(c.value)}, {"se", vec(c.se)},
           {"method", to_string(c.method)}, {"seed", c.seed},   {"n_samples", c.n_samples}};
}

void from_json(const json& j, CdfCurve& c) {
  c.t = vec_from(j.at("t"));
  c.value = vec_from(j.at("value"));
  c.se = vec_from(j.at("se"));
  c.method = cdf_method_from_string(j.at("method").get<std::string>());
  c.seed = j.at("seed").get<std::uint64_t>();
  c.n_samples = j.value("n_samples", std::size_t{0});
}

void to_json(json& j, const DominanceReport& r) {
  j = json{{"direction", to_string(r.direction)},
           {"holds", r.holds},
           {"worst_margin", real(r.worst_margin)},
           {"violating_t", optional_real(r.violating_t)},
           {"tolerance_rule", r.tolerance_rule}};
}

void from_json(const json& j, DominanceReport& r) {
  r.direction = direction_from_string(j.at("direction").get<std::string>());
  r.holds = j.at("holds").get<bool>();
  r.worst_margin = real_from(j.at("worst_margin"));
  r.violating_t = optional_from(j.at("violating_t"));
  r.tolerance_rule = j.at("tolerance_rule").get<std::string>();
}

void to_json(json& j, const ConditionReport& r) {
  j = json{{"condition_id", to_string(r.condition_id)},
           {"p", r.p},
           {"grid", r.grid},
           {"holds", r.holds},
           {"worst_violation", real(r.worst_violation)},
           {"notes", r.notes}};
}

void from_json(const json& j, ConditionReport& r) {
  r.condition_id = condition_id_from_string(j.at("condition_id").get<std::string>());
  r.p = j.at("p").get<double>();
  r.grid = j.at("grid").get<std::vector<double>>();
  r.holds = j.at("holds").get<bool>();
  r.worst_violation = real_from(j.at("worst_violation"));
  r.notes = j.at("notes").get<std::string>();
}

void to_json(json& j, const ClaimReport& r) {
  j = json{{"claim_id", to_string(r.claim_id)},
           {"grid", r.grid},
           {"holds", r.holds},
           {"worst_margin", real(r.worst_margin)},
           {"worst_point", r.worst_point},
           {"notes", r.notes}};
}

void from_json(const json& j, ClaimReport& r) {
  r.claim_id = claim_id_from_string(j.at("claim_id").get<std::string>());
  r.grid = j.at("grid").get<std::string>();
  r.holds = j.at("holds").get<bool>();
  r.worst_margin = real_from(j.at("worst_margin"));
  r.worst_point = j.at("worst_point").get<std::vector<double>>();
  r.notes = j.at("notes").get<std::string>();
}

void to_json(json& j, const BoundReport& r) {
  j = json{{"b_star_geo", r.b_star_geo},   {"b_star_pow", r.b_star_pow},     {"q", r.q},
           {"upper_curve", r.upper_curve}, {"lower_curve", r.lower_curve},   {"target_curve", r.target_curve},
           {"holds", r.holds},             {"worst_margin", real(r.worst_margin)},
           {"violating_t", optional_real(r.violating_t)}};
}

void from_json(const json& j, BoundReport& r) {
  r.b_star_geo = j.at("b_star_geo").get<double>();
  r.b_star_pow = j.at("b_star_pow").get<double>();
  r.q = j.at("q").get<double>();
  r.upper_curve = j.at("upper_curve").get<CdfCurve>();
  r.lower_curve = j.at("lower_curve").get<CdfCurve>();
  r.target_curve = j.at("target_curve").get<CdfCurve>();
  r.holds = j.at("holds").get<bool>();
  r.worst_margin = real_from(j.at("worst_margin"));
  r.violating_t = optional_from(j.at("violating_t"));
}

std::string curve_csv(const CdfCurve& c) {
  std::ostringstream os;
  os << "t,value,se\n";
  for (Eigen::Index k = 0; k < c.t.size(); ++k)
    os << format_real(c.t[k]) << ',' << format_real(c.value[k]) << ',' << format_real(c.se[k]) << '\n';
  return os.str();
}

std::string bounds_csv(const BoundReport& r) {
  std::ostringstream os;
  os << "t,lower,target,upper\n";
  for (Eigen::Index k = 0; k < r.target_curve.t.size(); ++k)
    os << format_real(r.target_curve.t[k]) << ',' << format_real(r.lower_curve.value[k]) << ','
       << format_real(r.target_curve.value[k]) << ',' << format_real(r.upper_curve.value[k]) << '\n';
  return os.str();
}

std::string comparison_csv(const WeightedSumComparison& c) {
  std::ostringstream os;
  os << "t,value_a,se_a,value_b,se_b\n";
  for (Eigen::Index k = 0; k < c.curve_a.t.size(); ++k)
    os << format_real(c.curve_a.t[k]) << ',' << format_real(c.curve_a.value[k]) << ','
       << format_real(c.curve_a.se[k]) << ',' << format_real(c.curve_b.value[k]) << ','
       << format_real(c.curve_b.se[k]) << '\n';
  return os.str();
}

}  // namespace wsum
