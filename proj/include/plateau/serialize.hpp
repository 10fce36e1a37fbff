#pragma once

#include <json.hpp>

#include "plateau/plmap.hpp"

namespace plateau {

nlohmann::json norm_to_json(const NormDescriptor& n);
NormDescriptor norm_from_json(const nlohmann::json& j);

nlohmann::json target_to_json(const TargetSpace& t);
TargetSpace target_from_json(const nlohmann::json& j);

}  // namespace plateau
