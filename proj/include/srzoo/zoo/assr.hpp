#pragma once

#include "srzoo/zoo/common.hpp"

namespace srzoo {

/// Single-width network without biases or special convolutions: a shallow
/// feature conv, aggregative blocks of residual units (each block ends in one
/// concat + 1x1 aggregation), a 1x1 feature fusion followed by SE attention,
/// a global feature residual and a conv + x4 pixel-shuffle upsampler.
inline Graph build_assr(const ArchConfig& cfg = {"assr", {}}) {
    Knobs k(cfg);
    const std::int64_t width = k.positive("width", 68);
    const std::int64_t blocks = k.positive("blocks", 3);
    const std::int64_t units = k.positive("units", 4);
    const std::int64_t reduction = k.positive("se_reduction", 4);

    GraphBuilder b(3);
    const std::string siel = b.conv("siel", b.input(), width, 3, "SfeBlk", false);
    zoo::ResidualOptions unit;
    unit.act = zoo::relu();
    unit.bias = false;
    std::string x = siel;
    std::vector<std::string> ab_outs;
    for (std::int64_t i = 0; i < blocks; ++i) {
        const std::string p = zoo::block_name("ab", i);
        std::vector<std::string> feats{x};
        for (std::int64_t j = 0; j < units; ++j) {
            feats.push_back(zoo::residual_block(b, feats.back(), p + ".unit" + std::to_string(j), "ResBlk", unit));
        }
        b.concat(p + ".cat", feats, "FuseBlk");
        x = b.conv(p + ".agg", p + ".cat", width, 1, "FuseBlk", false);
        ab_outs.push_back(x);
    }
    b.concat("aff_cat", ab_outs, "FuseBlk");
    b.conv("aff", "aff_cat", width, 1, "FuseBlk", false);
    const std::string se = zoo::se_block(b, "aff", "se", "FuseBlk", reduction, false, zoo::relu(),
                                         Activation{ActKind::sigmoid, 0.2f});
    b.add_nodes("global_add", {se, siel}, "FuseBlk");
    b.conv("usn_conv", "global_add", 3 * 16, 3, "UpsBlk");
    b.pixel_shuffle("output", "usn_conv", 4, "UpsBlk");
    b.set_config(k.finish());
    return std::move(b).finish("output");
}

}  // namespace srzoo
