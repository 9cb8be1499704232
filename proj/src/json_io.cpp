#include "phqs/json_io.hpp"

#include <cmath>
#include <stdexcept>

namespace phqs::io {

using nlohmann::json;

namespace {

json real_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

void check_schema(const json& j, const char* what) {
    if (!j.is_object()) throw std::invalid_argument(std::string(what) + ": not a JSON object");
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != kSchemaVersion)
        throw std::invalid_argument(std::string(what) + ": unsupported schema_version");
}

} // namespace

json to_json(const states::StateConfig& cfg) {
    json j{{"kind", states::to_string(cfg.kind)},
           {"noise_photons", cfg.noise_photons},
           {"seed", cfg.seed}};
    switch (cfg.kind) {
        case states::StateKind::Coherent: j["alpha2"] = cfg.alpha2; break;
        case states::StateKind::Thermal: j["nbar"] = cfg.nbar; break;
        case states::StateKind::SqueezedVacuum: j["r"] = cfg.squeeze_r; break;
        case states::StateKind::Fock: j["n"] = cfg.fock_n; break;
        case states::StateKind::ModulatedCoherent:
            j["ibar"] = cfg.ibar;
            j["scheme"] = states::to_string(cfg.scheme);
            break;
        case states::StateKind::Background: break;
    }
    return j;
}

states::StateConfig state_config_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("state config: not a JSON object");
    states::StateConfig cfg;
    cfg.kind = states::state_kind_from_string(j.at("kind").get<std::string>());
    cfg.noise_photons = j.value("noise_photons", 0.0);
    cfg.seed = j.value("seed", std::uint64_t{0});
    switch (cfg.kind) {
        case states::StateKind::Coherent: cfg.alpha2 = j.at("alpha2").get<double>(); break;
        case states::StateKind::Thermal: cfg.nbar = j.at("nbar").get<double>(); break;
        case states::StateKind::SqueezedVacuum: cfg.squeeze_r = j.at("r").get<double>(); break;
        case states::StateKind::Fock: cfg.fock_n = j.at("n").get<int>(); break;
        case states::StateKind::ModulatedCoherent:
            cfg.ibar = j.at("ibar").get<double>();
            cfg.scheme = states::mod_scheme_from_string(j.at("scheme").get<std::string>());
            break;
        case states::StateKind::Background: break;
    }
    cfg.validate();
    return cfg;
}

states::StateConfig state_config_from_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("state config: ") + e.what());
    }
    return state_config_from_json(j);
}

json to_json(const stats::CumulantSet& cs) {
    json j{{"schema_version", kSchemaVersion},
           {"count", cs.count},
           {"c", cs.c},
           {"shift", cs.shift}};
    if (cs.se)
        j["se"] = *cs.se;
    else
        j["se"] = nullptr;
    return j;
}

stats::CumulantSet cumulant_set_from_json(const json& j) {
    check_schema(j, "cumulant set");
    stats::CumulantSet cs;
    cs.count = j.at("count").get<std::uint64_t>();
    const auto& c = j.at("c");
    if (!c.is_array() || c.size() != 6)
        throw std::invalid_argument("cumulant set: field c must hold 6 values");
    for (int k = 0; k < 6; ++k) cs.c[k] = c[k].get<double>();
    cs.shift = j.value("shift", 0.0);
    if (j.contains("se") && !j.at("se").is_null()) {
        const auto& se = j.at("se");
        if (!se.is_array() || se.size() != 6)
            throw std::invalid_argument("cumulant set: field se must hold 6 values");
        std::array<double, 6> arr{};
        for (int k = 0; k < 6; ++k) arr[k] = se[k].get<double>();
        cs.se = arr;
    }
    return cs;
}

json to_json(const reconstruct::PhotonMoments& pm) {
    json j{{"schema_version", kSchemaVersion},
           {"n", pm.n},
           {"dn2", pm.dn2},
           {"dn3", pm.dn3}};
    if (pm.se)
        j["se"] = *pm.se;
    else
        j["se"] = nullptr;
    return j;
}

reconstruct::PhotonMoments photon_moments_from_json(const json& j) {
    check_schema(j, "photon moments");
    reconstruct::PhotonMoments pm;
    pm.n = j.at("n").get<double>();
    pm.dn2 = j.at("dn2").get<double>();
    pm.dn3 = j.at("dn3").get<double>();
    if (j.contains("se") && !j.at("se").is_null()) {
        const auto& se = j.at("se");
        if (!se.is_array() || se.size() != 3)
            throw std::invalid_argument("photon moments: field se must hold 3 values");
        std::array<double, 3> arr{};
        for (int k = 0; k < 3; ++k) arr[k] = se[k].get<double>();
        pm.se = arr;
    }
    return pm;
}

json to_json(const classify::ClassicalityReport& rep) {
    auto bound = [](const classify::BoundCheck& b) {
        json j{{"violated", b.violated}, {"margin", b.margin}};
        j["margin_se"] = b.margin_se ? json(*b.margin_se) : json(nullptr);
        return j;
    };
    return json{{"schema_version", kSchemaVersion},
                {"fano", real_or_null(rep.fano)},
                {"mandel_q", real_or_null(rep.mandel_q)},
                {"g2", real_or_null(rep.g2)},
                {"subpoisson_violation", bound(rep.subpoisson)},
                {"stieltjes_violation", bound(rep.stieltjes)},
                {"verdict", classify::to_string(rep.verdict)}};
}

} // namespace phqs::io
