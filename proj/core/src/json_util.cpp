#include "json_util.hpp"

namespace blab::detail {

using nlohmann::json;

json spec_obj(const DistributionSpec& s) {
  json masses = json::array();
  for (const auto& pm : s.masses) masses.push_back({{"x", pm.x}, {"weight", pm.weight}});
  return {{"n", s.n},
          {"eps", s.eps},
          {"delta", s.delta},
          {"variant", variant_name(s.variant)},
          {"shifted_count", s.shifted_count},
          {"masses", masses}};
}

DistributionSpec spec_from_obj(const json& j) {
  DistributionSpec s;
  s.n = j.at("n").get<int>();
  s.eps = j.at("eps").get<double>();
  s.delta = j.at("delta").get<double>();
  s.variant = variant_from_name(j.at("variant").get<std::string>());
  s.shifted_count = j.at("shifted_count").get<std::uint64_t>();
  for (const auto& m : j.at("masses")) {
    PointMass pm;
    pm.x = m.at("x").get<Point>();
    pm.weight = m.at("weight").get<double>();
    s.masses.push_back(std::move(pm));
  }
  return s;
}

json activation_obj(const ActivationSpec& a) {
  return {{"family", activation_family_name(a.family)},
          {"theta", a.theta},
          {"slope", a.slope},
          {"shift", a.shift},
          {"theta1", a.theta1}};
}

ActivationSpec activation_from_obj(const json& j) {
  ActivationSpec a;
  a.family = activation_family_from_name(j.at("family").get<std::string>());
  a.theta = j.at("theta").get<double>();
  a.slope = j.value("slope", a.slope);
  a.shift = j.value("shift", a.shift);
  a.theta1 = j.value("theta1", a.theta1);
  return a;
}

}  // namespace blab::detail
