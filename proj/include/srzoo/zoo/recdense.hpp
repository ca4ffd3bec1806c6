#pragma once

#include "srzoo/zoo/common.hpp"

namespace srzoo {

/// Two recurrent groups of residual blocks. Each group is applied `reps`
/// times with shared weights; a 1x1 conv reduces the concatenation of the
/// group's input and its final output. The two group outputs are fused by a
/// 3x3 conv (with a long skip from the shallow features) before the baseline
/// upsampler.
inline Graph build_recurrent_dense(const ArchConfig& cfg = {"recdense", {}}) {
    Knobs k(cfg);
    const std::int64_t width = k.positive("width", 64);
    const std::int64_t groups = k.positive("groups", 2);
    const std::int64_t blocks = k.positive("blocks_per_group", 3);
    const std::int64_t reps = k.positive("reps", 2);
    const float alpha = k.real("alpha", 0.2f);
    zoo::ResidualOptions opt;
    opt.act = zoo::lrelu(alpha);

    GraphBuilder b(3);
    b.conv("conv_first", b.input(), width, 3, "SfeBlk");
    const std::string fea = b.act("first_act", "conv_first", zoo::lrelu(alpha), "SfeBlk");
    std::string x = fea;
    std::vector<std::string> stage_outs;
    for (std::int64_t gi = 0; gi < groups; ++gi) {
        const std::string g = zoo::block_name("rb", gi);
        const std::string stage_in = x;
        for (std::int64_t r = 0; r < reps; ++r) {
            for (std::int64_t j = 0; j < blocks; ++j) {
                x = zoo::residual_block(b, x, g + ".rep" + std::to_string(r) + ".block" + std::to_string(j), "ResBlk", opt);
            }
        }
        for (std::int64_t j = 0; j < blocks && reps > 1; ++j) {
            for (const char* conv : {".conv1", ".conv2"}) {
                std::vector<std::string> group;
                for (std::int64_t r = 0; r < reps; ++r) group.push_back(g + ".rep" + std::to_string(r) + ".block" + std::to_string(j) + conv);
                b.share(group);
            }
        }
        b.concat(g + ".dense_cat", {stage_in, x}, "FuseBlk");
        x = b.conv(g + ".reduce", g + ".dense_cat", width, 1, "FuseBlk");
        stage_outs.push_back(x);
    }
    b.concat("fusion_cat", stage_outs, "FuseBlk");
    b.conv("fusion", "fusion_cat", width, 3, "FuseBlk");
    b.add_nodes("fusion_add", {"fusion", fea}, "FuseBlk");
    const std::string out = zoo::msr_upsampler(b, "fusion_add", zoo::lrelu(alpha));
    zoo::global_skip(b, out);
    b.set_config(k.finish());
    return std::move(b).finish("output");
}

}  // namespace srzoo
