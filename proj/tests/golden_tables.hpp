#pragma once

// Expected outcome of ranking each shipped results table on its own track:
// ranked teams in rank order, then the unranked teams.

#include <string>
#include <vector>

namespace golden {

struct TableOutcome {
    const char* file;
    int track;
    std::vector<std::string> ranked;
    std::vector<std::string> unranked;
};

inline const std::vector<TableOutcome>& tables() {
    static const std::vector<TableOutcome> t = {
        {"track1_results.json", 1,
         {"rainbow", "Alpha", "ZJUCSR2019", "Rookie", "krahaon_ai_cv", "Baseline"},
         {"SRSTAR", "NPUCS_103", "PPZ", "neptuneai", "GUET-HMI"}},
        {"track2_results.json", 2,
         {"rainbow", "ZJUCSR2019", "Alpha", "krahaon_ai_cv", "Rookie", "SRSTAR", "Baseline"},
         {"GUET-HMI", "neptuneai"}},
        {"track3_results.json", 3,
         {"krahaon_ai_cv", "Rookie", "rainbow", "ZJUCSR2019", "SRSTAR", "Alpha", "Baseline"},
         {"neptuneai", "GUET-HMI"}},
    };
    return t;
}

}  // namespace golden
