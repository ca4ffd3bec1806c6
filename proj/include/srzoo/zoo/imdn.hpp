#pragma once

#include "srzoo/zoo/common.hpp"

namespace srzoo {
namespace zoo {

/// Information multi-distillation block: three conv + (distilled, remaining)
/// splits, a last conv on the remainder, concat of the distilled slices,
/// 1x1 fusion and an identity skip.
inline std::string imdb(GraphBuilder& b, const std::string& in, const std::string& p, const std::string& tag,
                        std::int64_t distilled, Activation act, bool attention) {
    const std::int64_t w = b.channels(in);
    const std::int64_t rest = w - distilled;
    std::vector<std::string> slices;
    std::string x = in;
    for (int s = 1; s <= 3; ++s) {
        const std::string id = p + ".c" + std::to_string(s);
        b.conv(id, x, w, 3, tag);
        b.act(id + "_act", id, act, tag);
        slices.push_back(b.split(id + "_d", id + "_act", {distilled, rest}, 0, tag));
        x = b.split(id + "_r", id + "_act", {distilled, rest}, 1, tag);
    }
    slices.push_back(b.conv(p + ".c4", x, distilled, 3, tag));
    std::string cat = b.concat(p + ".cat", slices, tag);
    if (attention) cat = se_block(b, cat, p + ".att", tag, 16, true, relu(), Activation{ActKind::sigmoid, 0.2f});
    b.conv(p + ".fuse", cat, w, 1, tag);
    return b.add_nodes(p + ".add", {p + ".fuse", in}, tag);
}

}  // namespace zoo

/// IMDB body in place of the residual blocks; body outputs are concatenated,
/// fused by a 1x1 conv, refined by a 3x3 conv with a long skip, then a single
/// conv + x4 pixel shuffle produces the image.
inline Graph build_imdn(const ArchConfig& cfg = {"imdn", {}}) {
    Knobs k(cfg);
    const std::int64_t width = k.positive("width", 64);
    const std::int64_t blocks = k.positive("blocks", 8);
    const std::int64_t distilled = k.positive("distilled", 16);
    const float alpha = k.real("alpha", 0.2f);
    const bool attention = k.flag("attention", false);
    if (distilled >= width) fail(ErrorCode::invalid_argument, "imdn: distilled channels must be below the width");
    const Activation act = zoo::lrelu(alpha);

    GraphBuilder b(3);
    const std::string fea = b.conv("conv_first", b.input(), width, 3, "SfeBlk");
    std::string x = fea;
    std::vector<std::string> outs;
    for (std::int64_t i = 0; i < blocks; ++i) {
        x = zoo::imdb(b, x, zoo::block_name("imdb", i), "ResBlk", distilled, act, attention);
        outs.push_back(x);
    }
    b.concat("body_cat", outs, "FuseBlk");
    b.conv("fuse", "body_cat", width, 1, "FuseBlk");
    b.act("fuse_act", "fuse", act, "FuseBlk");
    b.conv("lr_conv", "fuse_act", width, 3, "FuseBlk");
    b.add_nodes("lr_add", {"lr_conv", fea}, "FuseBlk");
    b.conv("upconv", "lr_add", 3 * 16, 3, "UpsBlk");
    b.pixel_shuffle("output", "upconv", 4, "UpsBlk");
    b.set_config(k.finish());
    return std::move(b).finish("output");
}

}  // namespace srzoo
