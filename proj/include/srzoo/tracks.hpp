#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "srzoo/error.hpp"

namespace srzoo {

struct EntryRecord {
    std::string team;
    double psnr = 0.0;
    std::int64_t params = 1;
    double runtime_s = 1.0;
    bool baseline = false;
};

/// The three tracks optimize params, runtime and PSNR respectively.
enum class Track { params = 1, runtime = 2, fidelity = 3 };

inline Track track_from_int(int t) {
    if (t < 1 || t > 3) fail(ErrorCode::invalid_argument, "unknown track " + std::to_string(t) + " (expected 1, 2 or 3)");
    return static_cast<Track>(t);
}

inline const char* to_string(Track t) {
    switch (t) {
        case Track::params: return "parameters";
        case Track::runtime: return "inference";
        case Track::fidelity: return "fidelity";
    }
    return "unknown";
}

/// The track's own objective must match or beat the baseline exactly. The
/// two constrained metrics get a small tolerance: PSNR within
/// `psnr_slack_db` and runtime within `runtime_slack` (relative); parameter
/// counts get none. strict() removes all tolerance.
struct TrackRule {
    double psnr_slack_db = 0.01;
    double runtime_slack = 0.10;

    static TrackRule strict() { return {0.0, 0.0}; }
};

struct Verdict {
    bool ranked = true;
    std::vector<std::string> reasons;
};

namespace detail {

/// PSNR in hundredths of a dB, runtime in microseconds: the precision the
/// results are reported with, compared as integers.
inline long long centi_db(double v) { return std::llround(v * 100.0); }
inline long long micros(double v) { return std::llround(v * 1e6); }

inline std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace detail

inline Verdict validate_track(const EntryRecord& e, const EntryRecord& base, Track track, const TrackRule& rule = {}) {
    Verdict v;
    auto violate = [&](std::string why) {
        v.ranked = false;
        v.reasons.push_back(std::move(why));
    };
    const long long psnr_floor = detail::centi_db(base.psnr) - (track == Track::fidelity ? 0 : detail::centi_db(rule.psnr_slack_db));
    if (detail::centi_db(e.psnr) < psnr_floor) {
        violate("psnr " + detail::fixed(e.psnr, 2) + " < " + detail::fixed(double(psnr_floor) / 100.0, 2));
    }
    if (e.params > base.params) {
        violate("params " + std::to_string(e.params) + " > " + std::to_string(base.params));
    }
    const double runtime_cap = track == Track::runtime ? base.runtime_s : base.runtime_s * (1.0 + rule.runtime_slack);
    if (detail::micros(e.runtime_s) > detail::micros(runtime_cap)) {
        violate("runtime " + detail::fixed(e.runtime_s, 3) + " > " + detail::fixed(runtime_cap, 3));
    }
    return v;
}

struct RankedEntry {
    EntryRecord entry;
    Verdict verdict;
    int rank = 0;  // 1-based; 0 when unranked
};

/// Orders two entries by the track metric, then params, runtime, PSNR and
/// team id.
inline bool rank_before(const EntryRecord& a, const EntryRecord& b, Track track) {
    const long long pa = detail::centi_db(a.psnr), pb = detail::centi_db(b.psnr);
    const long long ra = detail::micros(a.runtime_s), rb = detail::micros(b.runtime_s);
    switch (track) {
        case Track::params:
            if (a.params != b.params) return a.params < b.params;
            break;
        case Track::runtime:
            if (ra != rb) return ra < rb;
            break;
        case Track::fidelity:
            if (pa != pb) return pa > pb;
            break;
    }
    if (a.params != b.params) return a.params < b.params;
    if (ra != rb) return ra < rb;
    if (pa != pb) return pa > pb;
    return a.team < b.team;
}

inline const EntryRecord& find_baseline(const std::vector<EntryRecord>& entries) {
    const EntryRecord* base = nullptr;
    for (const EntryRecord& e : entries) {
        if (!e.baseline) continue;
        if (base) fail(ErrorCode::invalid_argument, "entries: more than one baseline row");
        base = &e;
    }
    if (!base) fail(ErrorCode::invalid_argument, "entries: no baseline row");
    return *base;
}

/// Ranked entries first (in ranking order), then unranked ones in input order.
inline std::vector<RankedEntry> rank_entries(const std::vector<EntryRecord>& entries, Track track,
                                             const TrackRule& rule = {}) {
    const EntryRecord& base = find_baseline(entries);
    std::vector<RankedEntry> ranked, unranked;
    for (const EntryRecord& e : entries) {
        if (e.params < 1 || !(e.runtime_s > 0.0)) {
            fail(ErrorCode::invalid_argument, "entry '" + e.team + "': params must be >= 1 and runtime positive");
        }
        RankedEntry r{e, validate_track(e, base, track, rule), 0};
        (r.verdict.ranked ? ranked : unranked).push_back(std::move(r));
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](const RankedEntry& a, const RankedEntry& b) { return rank_before(a.entry, b.entry, track); });
    for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i].rank = static_cast<int>(i + 1);
    ranked.insert(ranked.end(), unranked.begin(), unranked.end());
    return ranked;
}

/// The challenge baseline row.
inline EntryRecord challenge_baseline() { return {"Baseline", 28.70, 1517571, 0.130, true}; }

}  // namespace srzoo
