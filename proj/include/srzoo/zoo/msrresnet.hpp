#pragma once

#include "srzoo/zoo/common.hpp"

namespace srzoo {

/// Baseline: conv_first, B residual blocks, two x2 pixel-shuffle stages,
/// HR conv, last conv, plus the bilinear x4 input skip.
inline Graph build_msrresnet(const ArchConfig& cfg = {"msrresnet", {}}) {
    Knobs k(cfg);
    const std::int64_t width = k.positive("width", 64);
    const std::int64_t blocks = k.non_negative("blocks", 16);
    const float alpha = k.real("alpha", 0.2f);
    const bool align = k.flag("align_corners", false);

    GraphBuilder b(3);
    b.conv("conv_first", b.input(), width, 3, "SfeBlk");
    std::string x = b.act("first_act", "conv_first", zoo::lrelu(alpha), "SfeBlk");
    zoo::ResidualOptions opt;
    opt.act = zoo::lrelu(alpha);
    for (std::int64_t i = 0; i < blocks; ++i) x = zoo::residual_block(b, x, zoo::block_name("body", i), "ResBlk", opt);
    const std::string out = zoo::msr_upsampler(b, x, zoo::lrelu(alpha));
    zoo::global_skip(b, out, ResizeMode::bilinear, align);
    b.set_config(k.finish());
    return std::move(b).finish("output");
}

}  // namespace srzoo
