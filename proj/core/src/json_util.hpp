#pragma once

#include <json.hpp>

#include "blab/distributions.hpp"
#include "blab/networks.hpp"

// Shared JSON shapes for the pieces that appear in more than one envelope.

namespace blab::detail {

nlohmann::json spec_obj(const DistributionSpec& s);
DistributionSpec spec_from_obj(const nlohmann::json& j);

nlohmann::json activation_obj(const ActivationSpec& a);
ActivationSpec activation_from_obj(const nlohmann::json& j);

}  // namespace blab::detail
