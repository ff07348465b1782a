#pragma once

#include <json.hpp>

#include "pinlab/analysis.hpp"
#include "pinlab/excursion.hpp"

namespace pinlab {

/// Law specification block as used in CLI configs, e.g.
/// {"family": "biased_rw", "p": 0.7}. Round-trips losslessly.
nlohmann::json law_to_json(const ExcursionLaw& law);
ExcursionLaw law_from_json(const nlohmann::json& j);

/// PhaseReport with the stable field names. Non-finite values map to null.
nlohmann::json report_to_json(const PhaseReport& rep);

}  // namespace pinlab
