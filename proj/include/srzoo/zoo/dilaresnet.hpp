#pragma once

#include <sstream>

#include "srzoo/zoo/common.hpp"

namespace srzoo {

/// Dilation pair of the two 3x3 convs inside one residual block.
struct DilationPattern {
    std::int64_t first = 1;
    std::int64_t second = 1;
};

/// Parses "1-1,1-2,2-2".
inline std::vector<DilationPattern> parse_dilation_patterns(const std::string& text) {
    std::vector<DilationPattern> out;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) {
        const auto dash = part.find('-');
        try {
            if (dash == std::string::npos) throw std::invalid_argument(part);
            out.push_back({std::stoll(part.substr(0, dash)), std::stoll(part.substr(dash + 1))});
        } catch (const std::exception&) {
            fail(ErrorCode::invalid_argument, "dilaresnet: bad dilation pattern '" + part + "'");
        }
        if (out.back().first < 1 || out.back().second < 1) {
            fail(ErrorCode::invalid_argument, "dilaresnet: dilations must be positive");
        }
    }
    if (out.empty()) fail(ErrorCode::invalid_argument, "dilaresnet: empty dilation pattern list");
    return out;
}

/// Residual blocks whose two 3x3 convs use dilation patterns cycled from a
/// menu, optional fixed residual scaling, and optional weight sharing: block
/// j >= share_start reuses the weights of block j - share_period.
/// Track defaults: 1 = 15 blocks sharing down to 7 unique, 2 = 12 blocks,
/// 3 = 15 blocks with 0.5 residual scaling.
inline Graph build_dilaresnet(const ArchConfig& cfg, int track) {
    if (track < 1 || track > 3) fail(ErrorCode::invalid_argument, "dilaresnet: track must be 1, 2 or 3");
    Knobs k(cfg);
    const std::int64_t width = k.positive("width", 64);
    const std::int64_t blocks = k.positive("blocks", track == 2 ? 12 : 15);
    const auto patterns = parse_dilation_patterns(k.text("patterns", track == 2 ? "1-2,2-2" : "1-1,1-2,2-2"));
    const float res_scale = k.real("res_scale", track == 3 ? 0.5f : 1.0f);
    const std::int64_t share_start = k.non_negative("share_start", track == 1 ? 7 : track == 2 ? 10 : 0);
    const std::int64_t share_period = k.non_negative("share_period", track == 1 ? 6 : track == 2 ? 10 : 0);
    const float alpha = k.real("alpha", 0.2f);
    if (share_start > 0 && (share_period < 1 || share_period > share_start)) {
        fail(ErrorCode::invalid_argument, "dilaresnet: share_period must lie in [1, share_start]");
    }

    GraphBuilder b(3);
    b.conv("conv_first", b.input(), width, 3, "SfeBlk");
    std::string x = b.act("first_act", "conv_first", zoo::lrelu(alpha), "SfeBlk");
    std::vector<std::int64_t> source(static_cast<std::size_t>(blocks));
    for (std::int64_t j = 0; j < blocks; ++j) {
        const DilationPattern d = patterns[static_cast<std::size_t>(j) % patterns.size()];
        zoo::ResidualOptions opt;
        opt.act = zoo::lrelu(alpha);
        opt.dilation1 = d.first;
        opt.dilation2 = d.second;
        opt.res_scale = res_scale;
        x = zoo::residual_block(b, x, zoo::block_name("body", j), "ResBlk", opt);
        source[static_cast<std::size_t>(j)] =
            share_start > 0 && j >= share_start ? source[static_cast<std::size_t>(j - share_period)] : j;
    }
    // one shared group per (canonical block, conv)
    for (std::int64_t root = 0; root < blocks; ++root) {
        for (const char* conv : {".conv1", ".conv2"}) {
            std::vector<std::string> group;
            for (std::int64_t j = 0; j < blocks; ++j)
                if (source[static_cast<std::size_t>(j)] == root) group.push_back(zoo::block_name("body", j) + conv);
            if (group.size() > 1) b.share(group);
        }
    }
    const std::string out = zoo::msr_upsampler(b, x, zoo::lrelu(alpha));
    zoo::global_skip(b, out);
    b.set_config(k.finish());
    return std::move(b).finish("output");
}

}  // namespace srzoo
