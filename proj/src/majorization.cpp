#include "wsum/majorization.hpp"

#include <charconv>
#include <cmath>

#include "wsum/errors.hpp"

namespace wsum {

namespace {

double parse_number(std::string_view text, std::string_view token, std::size_t offset) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(std::string(text), offset + static_cast<std::size_t>(ptr - token.data()), "expected a number");
  return v;
}

void validate_weights(const Eigen::VectorXd& v) {
  if (v.size() < 1) throw std::invalid_argument("weight vector must have at least one entry");
  for (double x : v)
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("weights must be finite and non-negative");
}

}  // namespace

WeightVector::WeightVector(Eigen::VectorXd values) : values_(std::move(values)) { validate_weights(values_); }

WeightVector::WeightVector(std::initializer_list<double> values)
    : values_(Eigen::Map<const Eigen::VectorXd>(values.begin(), static_cast<Eigen::Index>(values.size()))) {
  validate_weights(values_);
}

WeightVector WeightVector::parse(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    const double v = parse_number(text, text.substr(pos, comma - pos), pos);
    if (!(v >= 0.0) || !std::isfinite(v)) throw ParseError(std::string(text), pos, "weights must be non-negative");
    out.push_back(v);
    pos = comma + 1;
  }
  return WeightVector(Eigen::Map<const Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size())));
}

PremiseMode PremiseMode::thm2(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("thm2 mode requires p > 1");
  return {Kind::Thm2Power, p};
}

PremiseMode PremiseMode::kr(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("kr mode requires 0 < p < 1");
  return {Kind::KrPower, p};
}

PremiseMode PremiseMode::parse(std::string_view text) {
  if (text == "thm1") return thm1();
  if (text == "thm4") return thm4();
  const auto colon = text.find(':');
  const auto head = text.substr(0, colon);
  if (head != "thm2" && head != "kr") throw ParseError(std::string(text), 0, "unknown mode (thm1, thm2:p=, kr:p=, thm4)");
  if (colon == std::string_view::npos || text.substr(colon + 1, 2) != "p=")
    throw ParseError(std::string(text), std::min(text.size(), head.size() + 1), "expected 'p=<value>'");
  const double p = parse_number(text, text.substr(colon + 3), colon + 3);
  try {
    return head == "thm2" ? thm2(p) : kr(p);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string(text), colon + 3, e.what());
  }
}

std::string PremiseMode::to_string() const {
  auto fmt = [](double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
  };
  switch (kind_) {
    case Kind::Thm1Log: return "thm1";
    case Kind::Thm2Power: return "thm2:p=" + fmt(p_);
    case Kind::KrPower: return "kr:p=" + fmt(p_);
    case Kind::Thm4Identity: return "thm4";
  }
  return "?";
}

std::string PremiseMode::theorem_name() const {
  switch (kind_) {
    case Kind::Thm1Log: return "Theorem 1";
    case Kind::Thm2Power: return "Theorem 2";
    case Kind::KrPower: return "Theorem KR";
    case Kind::Thm4Identity: return "Theorem 4";
  }
  return "?";
}

Eigen::VectorXd transform(const WeightVector& w, const PremiseMode& mode) {
  const auto& v = w.values();
  switch (mode.kind()) {
    case PremiseMode::Kind::Thm1Log:
      if (!w.strictly_positive()) throw std::invalid_argument("log transform requires strictly positive weights");
      return v.array().log().matrix();
    case PremiseMode::Kind::Thm2Power:
      return v.array().pow(mode.q()).matrix();
    case PremiseMode::Kind::KrPower:
      if (!w.strictly_positive())
        throw std::invalid_argument("negative-power transform requires strictly positive weights");
      return v.array().pow(mode.q()).matrix();
    case PremiseMode::Kind::Thm4Identity:
      return v;
  }
  return v;
}

WeightVector inverse_transform(const Eigen::VectorXd& x, const PremiseMode& mode) {
  switch (mode.kind()) {
    case PremiseMode::Kind::Thm1Log:
      return WeightVector(x.array().exp().matrix());
    case PremiseMode::Kind::Thm2Power:
    case PremiseMode::Kind::KrPower:
      return WeightVector(x.array().pow(1.0 / mode.q()).matrix());
    case PremiseMode::Kind::Thm4Identity:
      return WeightVector(x);
  }
  return WeightVector(x);
}

bool premise_holds(const WeightVector& a, const WeightVector& b, const PremiseMode& mode) {
  return majorizes(transform(b, mode), transform(a, mode));
}

MajorizationPair random_majorization_pair(std::size_t n, const PremiseMode& mode, SeededStream& stream,
                                          std::size_t steps) {
  if (n < 2) throw std::invalid_argument("random_majorization_pair: n must be at least 2");
  // range of the transformed components
  double lo = 0.2;
  double hi = 3.0;
  switch (mode.kind()) {
    case PremiseMode::Kind::Thm1Log: lo = -1.5; hi = 1.5; break;
    case PremiseMode::Kind::Thm4Identity: lo = 0.1; hi = 3.0; break;
    default: break;
  }
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::VectorXd spread(size);
  for (auto& v : spread) v = lo + (hi - lo) * stream.uniform();

  Eigen::VectorXd mixed = spread;
  for (std::size_t s = 0; s < steps; ++s) {
    const auto i = static_cast<Eigen::Index>(stream.below(n));
    auto j = static_cast<Eigen::Index>(stream.below(n - 1));
    if (j >= i) ++j;
    t_transform(mixed, i, j, stream.uniform());
  }
  // Fisher-Yates
  for (Eigen::Index i = size - 1; i > 0; --i) {
    const auto j = static_cast<Eigen::Index>(stream.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(mixed[i], mixed[j]);
  }
  return {inverse_transform(mixed, mode), inverse_transform(spread, mode)};
}

}  // namespace wsum
