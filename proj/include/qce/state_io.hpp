#pragma once

#include "qce/linalg.hpp"

#include <json.hpp>

#include <string>

namespace qce {

// {"dims": [dA, dB], "matrix": {"re": [[...]], "im": [[...]]}}
BipartiteState state_from_json(const nlohmann::json& j);
nlohmann::json state_to_json(const BipartiteState& rho);
nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);

BipartiteState load_state(const std::string& path);
void save_state(const BipartiteState& rho, const std::string& path);

}  // namespace qce
