#pragma once

#include <string>

#include "srzoo/zoo/common.hpp"

namespace srzoo {

/// A point of the krahaon search space: widths before / between / after the
/// two x2 upsampling stages and the residual block count at each width.
struct SearchConfig {
    std::int64_t x = 64;
    std::int64_t y = 16;
    std::int64_t z = 4;
    std::int64_t n_x = 19;
    std::int64_t n_y = 12;
    std::int64_t n_z = 3;

    std::string str() const {
        return "(" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + "," +
               std::to_string(n_x) + "," + std::to_string(n_y) + "," + std::to_string(n_z) + ")";
    }

    friend bool operator==(const SearchConfig&, const SearchConfig&) = default;
    friend auto operator<=>(const SearchConfig&, const SearchConfig&) = default;
};

/// Empty when `c` lies in the search space, otherwise the first violation.
inline std::string search_space_violation(const SearchConfig& c) {
    if (c.x != 48 && c.x != 64 && c.x != 80 && c.x != 96) return "x must be one of 48, 64, 80, 96";
    if (c.y * 2 != c.x && c.y * 4 != c.x) return "y must be x/2 or x/4";
    if (c.z * 2 != c.y && c.z * 4 != c.y) return "z must be y/2 or y/4";
    if (c.n_x < 10 || c.n_x > 30) return "n_x must lie in [10, 30]";
    if (c.n_y < 0 || c.n_y > 16) return "n_y must lie in [0, 16]";
    if (c.n_z < 0 || c.n_z > 16) return "n_z must lie in [0, 16]";
    return {};
}

inline bool in_search_space(const SearchConfig& c) { return search_space_violation(c).empty(); }

/// n_x blocks at x -> conv(x, 4y) -> PS2 -> n_y blocks at y -> conv(y, 4z)
/// -> PS2 -> n_z blocks at z -> conv(z, 3), plus the bilinear input skip.
/// `strict` rejects points outside the search space.
inline Graph build_krahaon(const SearchConfig& sc, bool strict = true, float alpha = 0.2f) {
    if (strict) {
        const std::string why = search_space_violation(sc);
        if (!why.empty()) fail(ErrorCode::invalid_argument, "krahaon: config " + sc.str() + " outside search space: " + why);
    }
    if (sc.x < 1 || sc.y < 1 || sc.z < 1 || sc.n_x < 0 || sc.n_y < 0 || sc.n_z < 0) {
        fail(ErrorCode::invalid_argument, "krahaon: widths must be positive and block counts non-negative");
    }
    GraphBuilder b(3);
    b.conv("conv_first", b.input(), sc.x, 3, "SfeBlk");
    std::string h = b.act("first_act", "conv_first", zoo::lrelu(alpha), "SfeBlk");
    zoo::ResidualOptions opt;
    opt.act = zoo::lrelu(alpha);
    for (std::int64_t i = 0; i < sc.n_x; ++i) h = zoo::residual_block(b, h, zoo::block_name("bx", i), "ResBlk", opt);
    b.conv("upconv1", h, 4 * sc.y, 3, "UpsBlk");
    b.pixel_shuffle("ps1", "upconv1", 2, "UpsBlk");
    h = b.act("ups_act1", "ps1", zoo::lrelu(alpha), "UpsBlk");
    for (std::int64_t i = 0; i < sc.n_y; ++i) h = zoo::residual_block(b, h, zoo::block_name("by", i), "ResBlk", opt);
    b.conv("upconv2", h, 4 * sc.z, 3, "UpsBlk");
    b.pixel_shuffle("ps2", "upconv2", 2, "UpsBlk");
    h = b.act("ups_act2", "ps2", zoo::lrelu(alpha), "UpsBlk");
    for (std::int64_t i = 0; i < sc.n_z; ++i) h = zoo::residual_block(b, h, zoo::block_name("bz", i), "ResBlk", opt);
    const std::string out = b.conv("conv_last", h, 3, 3, "RecBlk");
    zoo::global_skip(b, out);
    std::map<std::string, std::string> conf{{"arch", "krahaon"},
                                            {"x", std::to_string(sc.x)},
                                            {"y", std::to_string(sc.y)},
                                            {"z", std::to_string(sc.z)},
                                            {"n_x", std::to_string(sc.n_x)},
                                            {"n_y", std::to_string(sc.n_y)},
                                            {"n_z", std::to_string(sc.n_z)},
                                            {"strict", strict ? "true" : "false"}};
    std::ostringstream a;
    a.precision(9);
    a << alpha;
    conf["alpha"] = a.str();
    b.set_config(std::move(conf));
    return std::move(b).finish("output");
}

inline Graph build_krahaon(const ArchConfig& cfg = {"krahaon", {}}) {
    Knobs k(cfg);
    SearchConfig sc;
    sc.x = k.integer("x", 64);
    sc.y = k.integer("y", 16);
    sc.z = k.integer("z", 4);
    sc.n_x = k.integer("n_x", 19);
    sc.n_y = k.integer("n_y", 12);
    sc.n_z = k.integer("n_z", 3);
    const bool strict = k.flag("strict", true);
    const float alpha = k.real("alpha", 0.2f);
    k.finish();
    return build_krahaon(sc, strict, alpha);
}

}  // namespace srzoo
