#pragma once

#include "commtask/majorization.hpp"

#include <json.hpp>

namespace commtask {

nlohmann::json to_json(const Verdict &v);
nlohmann::json to_json(const EquivalenceVerdict &v);

std::string equivalence_name(Equivalence e);

} // namespace commtask
