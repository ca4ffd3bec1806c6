#pragma once

#include "srzoo/zoo/common.hpp"

namespace srzoo {
namespace zoo {

/// Depthwise k x k -> pointwise 1x1, both biased.
inline std::string depthwise_separable(GraphBuilder& b, const std::string& in, const std::string& p,
                                       const std::string& tag, std::int64_t kernel, std::int64_t out) {
    const std::int64_t c = b.channels(in);
    b.conv(p + ".dw", in, same_conv(c, c, kernel, 1, true, PadMode::zero, c), tag);
    return b.conv(p + ".pw", p + ".dw", out, 1, tag);
}

/// Weighted multi-scale residual block: one depthwise-separable branch per
/// kernel size, each activated and scaled by a learnable weight, summed,
/// fused by a pointwise conv and added to the input.
inline std::string wm_res_block(GraphBuilder& b, const std::string& in, const std::string& p, const std::string& tag,
                                const std::vector<std::int64_t>& kernels, float alpha) {
    const std::int64_t c = b.channels(in);
    std::vector<std::string> branches;
    for (std::int64_t kk : kernels) {
        const std::string bp = p + ".k" + std::to_string(kk);
        depthwise_separable(b, in, bp, tag, kk, c);
        b.act(bp + ".act", bp + ".pw", lrelu(alpha), tag);
        branches.push_back(b.scale(bp + ".weight_scale", bp + ".act", true, 1.0f, tag));
    }
    const std::string merged = branches.size() == 1 ? branches.front() : b.add_nodes(p + ".sum", branches, tag);
    b.conv(p + ".fuse", merged, c, 1, tag);
    return b.add_nodes(p + ".add", {p + ".fuse", in}, tag);
}

}  // namespace zoo

/// Feature extraction (conv + residual block), a non-linear mapping of
/// WMResBlocks, and a reconstruction that fuses the FE and mapping outputs
/// before the baseline upsampler; the interpolated input is added at the end.
inline Graph build_wmrn(const ArchConfig& cfg = {"wmrn", {}}) {
    Knobs k(cfg);
    const std::int64_t width = k.positive("width", 64);
    const std::int64_t blocks = k.positive("blocks", 8);
    const auto kernels = k.integers("kernels", {3, 5});
    const float alpha = k.real("alpha", 0.2f);
    if (kernels.empty()) fail(ErrorCode::invalid_argument, "wmrn: needs at least one kernel size");
    for (std::int64_t kk : kernels) {
        if (kk < 1 || kk % 2 == 0) fail(ErrorCode::invalid_argument, "wmrn: kernel sizes must be odd and positive");
    }

    GraphBuilder b(3);
    b.conv("conv_first", b.input(), width, 3, "SfeBlk");
    b.act("first_act", "conv_first", zoo::lrelu(alpha), "SfeBlk");
    zoo::ResidualOptions opt;
    opt.act = zoo::lrelu(alpha);
    const std::string fe = zoo::residual_block(b, "first_act", "fe", "SfeBlk", opt);
    std::string x = fe;
    for (std::int64_t i = 0; i < blocks; ++i) x = zoo::wm_res_block(b, x, zoo::block_name("nlm", i), "ResBlk", kernels, alpha);
    b.concat("rec_cat", {fe, x}, "FuseBlk");
    b.conv("rec_fuse", "rec_cat", width, 1, "FuseBlk");
    const std::string out = zoo::msr_upsampler(b, "rec_fuse", zoo::lrelu(alpha));
    zoo::global_skip(b, out);
    b.set_config(k.finish());
    return std::move(b).finish("output");
}

}  // namespace srzoo
