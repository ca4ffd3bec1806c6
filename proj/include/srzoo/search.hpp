#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <ranges>
#include <string>
#include <unordered_set>
#include <vector>

#include "srzoo/analysis.hpp"
#include "srzoo/parallel.hpp"
#include "srzoo/zoo/invres.hpp"
#include "srzoo/zoo/krahaon.hpp"

namespace srzoo {

namespace detail {

struct SpaceAxes {
    static constexpr std::int64_t xs[4] = {48, 64, 80, 96};
    static constexpr std::int64_t divisors[2] = {2, 4};
    static constexpr std::int64_t nx_count = 21;  // 10..30
    static constexpr std::int64_t ny_count = 17;  // 0..16
    static constexpr std::int64_t nz_count = 17;  // 0..16
};

inline SearchConfig config_at(std::int64_t index) {
    SearchConfig c;
    c.n_z = index % SpaceAxes::nz_count;
    index /= SpaceAxes::nz_count;
    c.n_y = index % SpaceAxes::ny_count;
    index /= SpaceAxes::ny_count;
    c.n_x = 10 + index % SpaceAxes::nx_count;
    index /= SpaceAxes::nx_count;
    const std::int64_t zdiv = SpaceAxes::divisors[index % 2];
    index /= 2;
    const std::int64_t ydiv = SpaceAxes::divisors[index % 2];
    index /= 2;
    c.x = SpaceAxes::xs[index];
    c.y = c.x / ydiv;
    c.z = c.y / zdiv;
    return c;
}

/// Uniform integer in [0, bound) by rejection, independent of the standard
/// library's distribution implementation.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
        const std::uint64_t v = rng();
        if (v < limit) return v % bound;
    }
}

}  // namespace detail

/// Number of points in the krahaon space.
inline constexpr std::int64_t krahaon_space_size() {
    return 4 * 2 * 2 * detail::SpaceAxes::nx_count * detail::SpaceAxes::ny_count * detail::SpaceAxes::nz_count;
}

/// Lazily generated view over the whole space; order is x, y, z, n_x, n_y,
/// n_z (slowest to fastest varying).
inline auto enumerate_krahaon_space() {
    return std::views::iota(std::int64_t{0}, krahaon_space_size()) | std::views::transform(detail::config_at);
}

/// The whole space materialized in enumeration order.
inline std::vector<SearchConfig> all_krahaon_configs() {
    std::vector<SearchConfig> out;
    out.reserve(static_cast<std::size_t>(krahaon_space_size()));
    for (const SearchConfig& c : enumerate_krahaon_space()) out.push_back(c);
    return out;
}

/// k distinct configs chosen uniformly (Floyd's algorithm), returned in
/// enumeration order.
inline std::vector<SearchConfig> sample_krahaon_space(std::uint64_t seed, std::int64_t k) {
    const std::int64_t n = krahaon_space_size();
    if (k < 0 || k > n) {
        fail(ErrorCode::invalid_argument, "sample: k=" + std::to_string(k) + " outside [0, " + std::to_string(n) + "]");
    }
    std::mt19937_64 rng(seed);
    std::unordered_set<std::int64_t> chosen;
    for (std::int64_t j = n - k; j < n; ++j) {
        const auto t = static_cast<std::int64_t>(detail::uniform_below(rng, static_cast<std::uint64_t>(j + 1)));
        if (!chosen.insert(t).second) chosen.insert(j);
    }
    std::vector<std::int64_t> idx(chosen.begin(), chosen.end());
    std::sort(idx.begin(), idx.end());
    std::vector<SearchConfig> out;
    out.reserve(idx.size());
    for (std::int64_t i : idx) out.push_back(detail::config_at(i));
    return out;
}

struct SearchConstraints {
    std::int64_t max_params = std::numeric_limits<std::int64_t>::max();
    std::int64_t max_macs = std::numeric_limits<std::int64_t>::max();
    /// LR input the MAC budget refers to.
    Shape input{1, 3, 32, 32};
    std::int64_t max_rf = std::numeric_limits<std::int64_t>::max();
};

struct SearchResult {
    SearchConfig config;
    std::int64_t params = 0;
    std::int64_t macs = 0;
    std::int64_t rf = 0;
};

/// Builds every config, measures it with the graph counters and keeps those
/// within all bounds, ordered by params, then MACs, then input order.
inline std::vector<SearchResult> filter_constraints(const std::vector<SearchConfig>& configs,
                                                    const SearchConstraints& limits) {
    std::vector<SearchResult> measured(configs.size());
    std::vector<char> keep(configs.size(), 0);
    parallel_for(static_cast<std::int64_t>(configs.size()), [&](std::int64_t i) {
        const SearchConfig& c = configs[static_cast<std::size_t>(i)];
        const Graph g = build_krahaon(c);
        SearchResult r{c, count_params(g).total, 0, 0};
        if (r.params > limits.max_params) return;
        r.macs = count_macs(g, limits.input).total;
        if (r.macs > limits.max_macs) return;
        r.rf = receptive_field(g).size;
        if (r.rf > limits.max_rf) return;
        measured[static_cast<std::size_t>(i)] = r;
        keep[static_cast<std::size_t>(i)] = 1;
    });
    std::vector<SearchResult> out;
    for (std::size_t i = 0; i < configs.size(); ++i)
        if (keep[i]) out.push_back(measured[i]);
    std::stable_sort(out.begin(), out.end(), [](const SearchResult& a, const SearchResult& b) {
        return a.params != b.params ? a.params < b.params : a.macs < b.macs;
    });
    return out;
}

inline std::vector<SearchResult> filter_constraints(const SearchConstraints& limits) {
    return filter_constraints(all_krahaon_configs(), limits);
}

// ---------------------------------------------------------------------------
// Per-position block menu (inverted residuals t=3 / t=6, basic residual with
// relu or leaky relu)

enum class BlockKind { ir_t3, ir_t6, basic_residual, basic_residual_lrelu };

inline constexpr BlockKind block_menu[] = {BlockKind::ir_t3, BlockKind::ir_t6, BlockKind::basic_residual,
                                           BlockKind::basic_residual_lrelu};

inline const char* to_string(BlockKind k) {
    switch (k) {
        case BlockKind::ir_t3: return "inverted_residual_t3";
        case BlockKind::ir_t6: return "inverted_residual_t6";
        case BlockKind::basic_residual: return "basic_residual";
        case BlockKind::basic_residual_lrelu: return "basic_residual_lrelu";
    }
    return "unknown";
}

/// All 4^depth per-position choices, lexicographic in menu order.
inline std::vector<std::vector<BlockKind>> enumerate_block_choices(std::int64_t depth) {
    if (depth < 0 || depth > 8) fail(ErrorCode::invalid_argument, "block menu depth must lie in [0, 8]");
    std::vector<std::vector<BlockKind>> out;
    std::int64_t total = 1;
    for (std::int64_t i = 0; i < depth; ++i) total *= 4;
    for (std::int64_t code = 0; code < total; ++code) {
        std::vector<BlockKind> choice(static_cast<std::size_t>(depth));
        std::int64_t c = code;
        for (std::int64_t pos = depth - 1; pos >= 0; --pos) {
            choice[static_cast<std::size_t>(pos)] = block_menu[c % 4];
            c /= 4;
        }
        out.push_back(std::move(choice));
    }
    return out;
}

/// Baseline skeleton whose body uses the chosen block at each position.
inline Graph build_block_menu_network(const std::vector<BlockKind>& choice, std::int64_t width = 64) {
    GraphBuilder b(3);
    b.conv("conv_first", b.input(), width, 3, "SfeBlk");
    std::string x = b.act("first_act", "conv_first", zoo::lrelu(), "SfeBlk");
    std::string kinds;
    for (std::size_t i = 0; i < choice.size(); ++i) {
        const std::string p = zoo::block_name("body", static_cast<std::int64_t>(i));
        kinds += (i ? "," : "") + std::string(to_string(choice[i]));
        switch (choice[i]) {
            case BlockKind::ir_t3: x = zoo::inverted_residual(b, x, p, "ResBlk", 3, zoo::relu()); break;
            case BlockKind::ir_t6: x = zoo::inverted_residual(b, x, p, "ResBlk", 6, zoo::relu()); break;
            case BlockKind::basic_residual: {
                zoo::ResidualOptions opt;
                opt.act = zoo::relu();
                x = zoo::residual_block(b, x, p, "ResBlk", opt);
                break;
            }
            case BlockKind::basic_residual_lrelu: x = zoo::residual_block(b, x, p, "ResBlk"); break;
        }
    }
    const std::string out = zoo::msr_upsampler(b, x, zoo::lrelu());
    zoo::global_skip(b, out);
    b.set_config({{"arch", "block-menu"}, {"blocks", kinds}, {"width", std::to_string(width)}});
    return std::move(b).finish("output");
}

}  // namespace srzoo
