#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "srzoo/analysis.hpp"
#include "srzoo/metrics.hpp"
#include "srzoo/parallel.hpp"
#include "srzoo/timing.hpp"
#include "srzoo/tracks.hpp"
#include "srzoo/zoo/registry.hpp"

namespace srzoo {

using json = nlohmann::ordered_json;

inline json breakdown_json(const Breakdown& b) {
    json by = json::object();
    for (const std::string& tag : b.tags) by[tag] = {{"count", b.of(tag)}, {"percent", b.percent(tag)}};
    return {{"total", b.total}, {"by_block", by}};
}

/// Static description of a graph: parameters, MACs for one input shape and
/// the receptive field.
inline json inspect_json(const std::string& model, const Graph& g, const Shape& input) {
    json j;
    j["model"] = model;
    j["config"] = g.config();
    j["params"] = breakdown_json(count_params(g));
    j["macs"] = breakdown_json(count_macs(g, input));
    j["macs"]["input"] = input.str();
    const ReceptiveField rf = receptive_field(g);
    j["receptive_field"] = {{"size", rf.size}, {"global", rf.global}};
    if (const ModelInfo* m = find_model(model)) {
        const std::int64_t p = count_params(g).total;
        j["reported_params"] = m->reported_params;
        j["reported_delta_pct"] = reported_delta_pct(*m, p);
        j["tolerance_pct"] = m->tolerance_pct;
    }
    return j;
}

inline json environment_json() {
    return {{"threads", num_threads()},
            {"hardware_concurrency", std::thread::hardware_concurrency()},
            {"compiler", __VERSION__},
#ifdef NDEBUG
            {"build", "release"},
#else
            {"build", "debug"},
#endif
            {"clock", "steady_clock"}};
}

struct BenchReport {
    std::string model;
    json inspect;
    TimingResult timing;
    std::optional<PsnrResult> psnr;
    std::vector<std::pair<Track, Verdict>> verdicts;

    json to_json() const {
        json j = inspect;
        j["model"] = model;
        j["trials"] = timing.trials;
        j["best_avg_runtime_s"] = timing.best;
        j["images"] = timing.images;
        if (psnr) {
            j["psnr"] = psnr->infinite ? json("inf") : json(psnr->db);
        } else {
            j["psnr"] = nullptr;
        }
        json v = json::array();
        for (const auto& [t, verdict] : verdicts) {
            v.push_back({{"track", static_cast<int>(t)}, {"ranked", verdict.ranked}, {"reasons", verdict.reasons}});
        }
        j["track_verdicts"] = v;
        j["environment"] = environment_json();
        return j;
    }
};

/// Track verdicts of a measured model against a baseline record; only
/// meaningful when a finite PSNR was measured.
inline std::vector<std::pair<Track, Verdict>> bench_verdicts(const std::string& model, std::int64_t params,
                                                            double runtime_s, const PsnrResult& psnr,
                                                            const EntryRecord& baseline) {
    std::vector<std::pair<Track, Verdict>> out;
    const EntryRecord e{model, psnr.infinite ? 1e9 : psnr.db, params, runtime_s, false};
    for (Track t : {Track::params, Track::runtime, Track::fidelity}) out.emplace_back(t, validate_track(e, baseline, t));
    return out;
}

// ---------------------------------------------------------------------------
// Entries files: a JSON list of {team, psnr, params, runtime_s, baseline}

inline EntryRecord entry_from_json(const json& j) {
    try {
        EntryRecord e;
        e.team = j.at("team").get<std::string>();
        e.psnr = j.at("psnr").get<double>();
        e.params = j.at("params").get<std::int64_t>();
        e.runtime_s = j.at("runtime_s").get<double>();
        e.baseline = j.value("baseline", false);
        return e;
    } catch (const json::exception& ex) {
        fail(ErrorCode::parse, std::string("entry: ") + ex.what());
    }
}

inline json entry_to_json(const EntryRecord& e) {
    return {{"team", e.team}, {"psnr", e.psnr}, {"params", e.params}, {"runtime_s", e.runtime_s}, {"baseline", e.baseline}};
}

inline std::vector<EntryRecord> load_entries(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot read entries file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& ex) {
        fail(ErrorCode::parse, "entries file '" + path + "': " + ex.what());
    }
    if (!j.is_array()) fail(ErrorCode::parse, "entries file '" + path + "' must hold a JSON list");
    std::vector<EntryRecord> out;
    for (const json& e : j) out.push_back(entry_from_json(e));
    return out;
}

inline json ranking_json(const std::vector<RankedEntry>& ranking, Track track) {
    json rows = json::array();
    for (const RankedEntry& r : ranking) {
        json row = entry_to_json(r.entry);
        row["ranked"] = r.verdict.ranked;
        row["rank"] = r.rank == 0 ? json(nullptr) : json(r.rank);
        row["reasons"] = r.verdict.reasons;
        rows.push_back(row);
    }
    return {{"track", static_cast<int>(track)}, {"track_name", to_string(track)}, {"entries", rows}};
}

}  // namespace srzoo
