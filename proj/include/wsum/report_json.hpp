#pragma once

#include <string>

#include <json.hpp>

#include "wsum/appendix.hpp"
#include "wsum/bounds.hpp"
#include "wsum/distributions.hpp"
#include "wsum/sum_engine.hpp"

// JSON forms of the report types. Non-finite reals are written as null and
// read back as -inf (the only non-finite value a report can carry).
namespace wsum {

void to_json(nlohmann::json& j, const CdfCurve& c);
void from_json(const nlohmann::json& j, CdfCurve& c);

void to_json(nlohmann::json& j, const DominanceReport& r);
void from_json(const nlohmann::json& j, DominanceReport& r);

void to_json(nlohmann::json& j, const ConditionReport& r);
void from_json(const nlohmann::json& j, ConditionReport& r);

void to_json(nlohmann::json& j, const ClaimReport& r);
void from_json(const nlohmann::json& j, ClaimReport& r);

void to_json(nlohmann::json& j, const BoundReport& r);
void from_json(const nlohmann::json& j, BoundReport& r);

// Shortest round-trip decimal form.
std::string format_real(double v);

// t,value,se
std::string curve_csv(const CdfCurve& c);
// t,lower,target,upper
std::string bounds_csv(const BoundReport& r);
// t,value_a,se_a,value_b,se_b
std::string comparison_csv(const WeightedSumComparison& c);

}  // namespace wsum
