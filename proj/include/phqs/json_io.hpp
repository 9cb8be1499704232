#pragma once

#include "phqs/classify.hpp"
#include "phqs/power_sums.hpp"
#include "phqs/reconstruct.hpp"
#include "phqs/states.hpp"

#include <json.hpp>

#include <string>

namespace phqs::io {

inline constexpr int kSchemaVersion = 1;

// State configs: {"kind": "...", <kind parameter>, "noise_photons": v, "seed": s}
nlohmann::json to_json(const states::StateConfig& cfg);
states::StateConfig state_config_from_json(const nlohmann::json& j);
states::StateConfig state_config_from_string(const std::string& text);

// CumulantSet: {"schema_version", "count", "c":[6], "se":[6]|null, "shift"}
nlohmann::json to_json(const stats::CumulantSet& cs);
stats::CumulantSet cumulant_set_from_json(const nlohmann::json& j);

// PhotonMoments: {"schema_version", "n", "dn2", "dn3", "se":[3]|null}
nlohmann::json to_json(const reconstruct::PhotonMoments& pm);
reconstruct::PhotonMoments photon_moments_from_json(const nlohmann::json& j);

// ClassicalityReport: fano/mandel_q/g2 (null when undefined), bound checks
// with margins, verdict string.
nlohmann::json to_json(const classify::ClassicalityReport& rep);

} // namespace phqs::io
