#pragma once

#include <algorithm>

#include "srzoo/zoo/common.hpp"

namespace srzoo {

/// Progressive x2 + x2 upsampling without upsampling convs: the outputs of
/// selected residual blocks are concatenated and pixel-shuffled directly.
/// Tap positions are 1-based block indices within each stage.
inline Graph build_noucsr(const ArchConfig& cfg = {"noucsr", {}}) {
    Knobs k(cfg);
    const std::int64_t width = k.positive("width", 64);
    const std::int64_t lr_blocks = k.positive("lr_blocks", 12);
    const auto lr_taps = k.integers("lr_taps", {9, 10, 11, 12});
    const std::int64_t hr_blocks = k.positive("hr_blocks", 4);
    const auto hr_taps = k.integers("hr_taps", {1, 2, 3, 4});
    const float alpha = k.real("alpha", 0.2f);

    GraphBuilder b(3);
    b.conv("conv_first", b.input(), width, 3, "SfeBlk");
    std::string x = b.act("first_act", "conv_first", zoo::lrelu(alpha), "SfeBlk");
    zoo::ResidualOptions opt;
    opt.act = zoo::lrelu(alpha);

    auto stage = [&](const std::string& name, std::int64_t blocks, const std::vector<std::int64_t>& taps) {
        if (taps.empty()) fail(ErrorCode::invalid_argument, "noucsr: " + name + " needs at least one tap");
        std::vector<std::string> tapped;
        for (std::int64_t i = 1; i <= blocks; ++i) {
            x = zoo::residual_block(b, x, name + std::to_string(i), "ResBlk", opt);
            if (std::find(taps.begin(), taps.end(), i) != taps.end()) tapped.push_back(x);
        }
        for (std::int64_t t : taps) {
            if (t < 1 || t > blocks) {
                fail(ErrorCode::invalid_argument, "noucsr: tap " + std::to_string(t) + " outside 1.." + std::to_string(blocks));
            }
        }
        std::int64_t channels = 0;
        for (const auto& t : tapped) channels += b.channels(t);
        if (channels % 4 != 0) {
            fail(ErrorCode::invalid_argument, "noucsr: " + name + " concatenates " + std::to_string(channels) +
                                                  " channels, not divisible by 4 for the x2 pixel shuffle");
        }
        b.concat(name + "_cat", tapped, "UpsBlk");
        x = b.pixel_shuffle(name + "_ps", name + "_cat", 2, "UpsBlk");
    };
    stage("lr", lr_blocks, lr_taps);
    stage("hr", hr_blocks, hr_taps);
    const std::string out = b.conv("conv_last", x, 3, 3, "RecBlk");
    zoo::global_skip(b, out);
    b.set_config(k.finish());
    return std::move(b).finish("output");
}

}  // namespace srzoo
