#pragma once

#include <functional>
#include <string>
#include <vector>

#include "srzoo/zoo/assr.hpp"
#include "srzoo/zoo/awsrn.hpp"
#include "srzoo/zoo/dilaresnet.hpp"
#include "srzoo/zoo/imdn.hpp"
#include "srzoo/zoo/invres.hpp"
#include "srzoo/zoo/krahaon.hpp"
#include "srzoo/zoo/msrresnet.hpp"
#include "srzoo/zoo/noucsr.hpp"
#include "srzoo/zoo/ppz.hpp"
#include "srzoo/zoo/recdense.hpp"
#include "srzoo/zoo/wmrn.hpp"

namespace srzoo {

struct ModelInfo {
    std::string id;
    std::string team;
    /// Parameter count the team reported for its entry.
    std::int64_t reported_params = 0;
    /// Accepted relative deviation from reported_params, in percent.
    double tolerance_pct = 10.0;
    std::function<Graph(const ArchConfig&)> build;
};

inline const std::vector<ModelInfo>& model_registry() {
    static const std::vector<ModelInfo> models = {
        {"msrresnet", "Baseline", 1517571, 0.0, [](const ArchConfig& c) { return build_msrresnet(c); }},
        {"imdn", "rainbow", 893936, 10.0, [](const ArchConfig& c) { return build_imdn(c); }},
        {"noucsr", "ZJUCSR2019", 1227340, 10.0, [](const ArchConfig& c) { return build_noucsr(c); }},
        {"assr", "Alpha", 1127064, 10.0, [](const ArchConfig& c) { return build_assr(c); }},
        {"krahaon", "krahaon_ai_cv", 1461735, 10.0, [](const ArchConfig& c) { return build_krahaon(c); }},
        {"awsrn", "Rookie", 1387258, 10.0, [](const ArchConfig& c) { return build_awsrn(c); }},
        {"dilaresnet-t1", "SRSTAR", 852874, 10.0, [](const ArchConfig& c) { return build_dilaresnet(c, 1); }},
        {"dilaresnet-t2", "SRSTAR", 1074447, 10.0, [](const ArchConfig& c) { return build_dilaresnet(c, 2); }},
        {"dilaresnet-t3", "SRSTAR", 1369859, 10.0, [](const ArchConfig& c) { return build_dilaresnet(c, 3); }},
        {"recdense", "NPUCS_103", 910467, 10.0, [](const ArchConfig& c) { return build_recurrent_dense(c); }},
        {"ppz", "PPZ", 818432, 10.0, [](const ArchConfig& c) { return build_ppz(c); }},
        {"invres", "neptuneai", 1204227, 10.0, [](const ArchConfig& c) { return build_inverted_residual(c); }},
        {"wmrn", "GUET-HMI", 536005, 15.0, [](const ArchConfig& c) { return build_wmrn(c); }},
    };
    return models;
}

inline const ModelInfo* find_model(const std::string& id) {
    for (const ModelInfo& m : model_registry())
        if (m.id == id) return &m;
    return nullptr;
}

inline const ModelInfo& model_info(const std::string& id) {
    const ModelInfo* m = find_model(id);
    if (!m) {
        std::string known;
        for (const ModelInfo& x : model_registry()) known += (known.empty() ? "" : ", ") + x.id;
        fail(ErrorCode::invalid_argument, "unknown model '" + id + "' (known: " + known + ")");
    }
    return *m;
}

inline Graph build_model(const ArchConfig& cfg) {
    ArchConfig c = cfg;
    return model_info(cfg.arch).build(c);
}

inline Graph build_model(const std::string& id) { return build_model(ArchConfig{id, {}}); }

/// Signed relative deviation of `params` from the reported count, in percent.
inline double reported_delta_pct(const ModelInfo& m, std::int64_t params) {
    return 100.0 * double(params - m.reported_params) / double(m.reported_params);
}

}  // namespace srzoo
