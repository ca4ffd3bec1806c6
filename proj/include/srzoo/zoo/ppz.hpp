#pragma once

#include "srzoo/zoo/common.hpp"

namespace srzoo {
namespace zoo {

/// Bias-free reflect-padded residual block with h-swish and an SE gate
/// (h-sigmoid). `mid` is the (prunable) output width of the first conv.
inline std::string ppz_block(GraphBuilder& b, const std::string& in, const std::string& p, const std::string& tag,
                             std::int64_t mid, std::int64_t se_reduction) {
    const std::int64_t w = b.channels(in);
    b.conv(p + ".conv1", in, mid, 3, tag, false, 1, PadMode::reflect);
    b.act(p + ".act", p + ".conv1", Activation{ActKind::h_swish, 0.2f}, tag);
    b.conv(p + ".conv2", p + ".act", w, 3, tag, false, 1, PadMode::reflect);
    const std::string se = se_block(b, p + ".conv2", p + ".se", tag, se_reduction, true, relu(),
                                    Activation{ActKind::h_sigmoid, 0.2f});
    return b.add_nodes(p + ".add", {in, se}, tag);
}

}  // namespace zoo

inline Graph build_ppz(const ArchConfig& cfg = {"ppz", {}}) {
    Knobs k(cfg);
    const std::int64_t width = k.positive("width", 64);
    const std::int64_t blocks = k.positive("blocks", 10);
    const std::int64_t mid = k.positive("mid", 42);
    const std::int64_t reduction = k.positive("se_reduction", 4);
    const Activation hswish{ActKind::h_swish, 0.2f};

    GraphBuilder b(3);
    b.conv("conv_first", b.input(), width, 3, "SfeBlk", false, 1, PadMode::reflect);
    std::string x = b.act("first_act", "conv_first", hswish, "SfeBlk");
    for (std::int64_t i = 0; i < blocks; ++i) x = zoo::ppz_block(b, x, zoo::block_name("body", i), "ResBlk", mid, reduction);
    const std::string out = zoo::msr_upsampler(b, x, hswish);
    zoo::global_skip(b, out, ResizeMode::bicubic);
    b.set_config(k.finish());
    return std::move(b).finish("output");
}

}  // namespace srzoo
