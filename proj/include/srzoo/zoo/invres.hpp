#pragma once

#include "srzoo/zoo/common.hpp"

namespace srzoo {
namespace zoo {

/// 1x1 expand (ratio t) -> act -> depthwise 3x3 -> act -> 1x1 project, + x.
/// All three convs are bias-free.
inline std::string inverted_residual(GraphBuilder& b, const std::string& in, const std::string& p,
                                     const std::string& tag, std::int64_t t, Activation act) {
    if (t < 1) fail(ErrorCode::invalid_argument, "inverted residual: expand ratio t must be >= 1");
    const std::int64_t w = b.channels(in);
    const std::int64_t e = w * t;
    b.conv(p + ".expand", in, e, 1, tag, false);
    b.act(p + ".act1", p + ".expand", act, tag);
    b.conv(p + ".dw", p + ".act1", same_conv(e, e, 3, 1, false, PadMode::zero, e), tag);
    b.act(p + ".act2", p + ".dw", act, tag);
    b.conv(p + ".project", p + ".act2", w, 1, tag, false);
    return b.add_nodes(p + ".add", {in, p + ".project"}, tag);
}

}  // namespace zoo

/// The baseline with every residual block replaced by an inverted residual.
inline Graph build_inverted_residual(const ArchConfig& cfg = {"invres", {}}) {
    Knobs k(cfg);
    const std::int64_t width = k.positive("width", 64);
    const std::int64_t blocks = k.non_negative("blocks", 16);
    const std::int64_t t = k.integer("t", 6);
    const float alpha = k.real("alpha", 0.2f);
    if (t < 1) fail(ErrorCode::invalid_argument, "invres: expand ratio t must be >= 1, got " + std::to_string(t));

    GraphBuilder b(3);
    b.conv("conv_first", b.input(), width, 3, "SfeBlk");
    std::string x = b.act("first_act", "conv_first", zoo::lrelu(alpha), "SfeBlk");
    for (std::int64_t i = 0; i < blocks; ++i) x = zoo::inverted_residual(b, x, zoo::block_name("body", i), "ResBlk", t, zoo::relu());
    const std::string out = zoo::msr_upsampler(b, x, zoo::lrelu(alpha));
    zoo::global_skip(b, out);
    b.set_config(k.finish());
    return std::move(b).finish("output");
}

}  // namespace srzoo
