#pragma once

#include <string>

#include "json.hpp"
#include "pet_erg/config.hpp"

namespace testing_support {

inline nlohmann::json paper_json() {
  return nlohmann::json::parse(pet_erg::paper_scenario_json());
}

inline pet_erg::ScenarioConfig make(const nlohmann::json& doc,
                                    const pet_erg::ConfigOverrides& ov = {}) {
  return pet_erg::parse_config(doc.dump(), ov);
}

}  // namespace testing_support
