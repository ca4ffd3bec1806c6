#pragma once

#include "srzoo/zoo/common.hpp"

namespace srzoo {
namespace zoo {

/// Adaptive weighted residual unit: lambda_res * body(x) + lambda_x * x with
/// body = wide conv expand -> relu -> conv contract.
inline std::string awru(GraphBuilder& b, const std::string& in, const std::string& p, const std::string& tag,
                        std::int64_t wide, float init_res, float init_x) {
    const std::int64_t w = b.channels(in);
    b.conv(p + ".expand", in, w * wide, 3, tag);
    b.act(p + ".act", p + ".expand", relu(), tag);
    b.conv(p + ".contract", p + ".act", w, 3, tag);
    b.scale(p + ".lambda_res", p + ".contract", true, init_res, tag);
    b.scale(p + ".lambda_x", in, true, init_x, tag);
    return b.add_nodes(p + ".add", {p + ".lambda_res", p + ".lambda_x"}, tag);
}

/// Adaptive weighted multi-scale reconstruction: parallel convs of several
/// kernel sizes to 3*r*r channels, a learnable weight per branch, summed.
inline std::string awms(GraphBuilder& b, const std::string& in, const std::vector<std::int64_t>& kernels,
                        const std::string& tag) {
    std::vector<std::string> branches;
    for (std::int64_t kk : kernels) {
        const std::string p = "awms.k" + std::to_string(kk);
        b.conv(p, in, 3 * 16, kk, tag);
        branches.push_back(b.scale(p + ".weight_scale", p, true, 1.0f, tag));
    }
    return branches.size() == 1 ? branches.front() : b.add_nodes("awms.sum", branches, tag);
}

}  // namespace zoo

/// conv_first, local fusion blocks (stacked AWRUs fused by a 1x1 conv over
/// their concatenated outputs, plus the block input), AWMS + x4 pixel shuffle,
/// bilinear input skip.
inline Graph build_awsrn(const ArchConfig& cfg = {"awsrn", {}}) {
    Knobs k(cfg);
    const std::int64_t width = k.positive("width", 32);
    const std::int64_t wide = k.positive("wide", 4);
    const std::int64_t lfbs = k.positive("lfbs", 4);
    const std::int64_t units = k.positive("units", 4);
    const auto kernels = k.integers("awms_kernels", {3, 5, 7});
    const float init_res = k.real("lambda_res_init", 1.0f);
    const float init_x = k.real("lambda_x_init", 1.0f);
    for (std::int64_t kk : kernels) {
        if (kk < 1 || kk % 2 == 0) fail(ErrorCode::invalid_argument, "awsrn: AWMS kernel sizes must be odd and positive");
    }
    if (kernels.empty()) fail(ErrorCode::invalid_argument, "awsrn: AWMS needs at least one kernel size");

    GraphBuilder b(3);
    std::string x = b.conv("conv_first", b.input(), width, 3, "SfeBlk");
    for (std::int64_t i = 0; i < lfbs; ++i) {
        const std::string p = zoo::block_name("lfb", i);
        std::vector<std::string> outs;
        std::string u = x;
        for (std::int64_t j = 0; j < units; ++j) {
            u = zoo::awru(b, u, p + ".awru" + std::to_string(j), "ResBlk", wide, init_res, init_x);
            outs.push_back(u);
        }
        b.concat(p + ".lrfu_cat", outs, "ResBlk");
        b.conv(p + ".lrfu", p + ".lrfu_cat", width, 1, "ResBlk");
        x = b.add_nodes(p + ".add", {p + ".lrfu", x}, "ResBlk");
    }
    const std::string rec = zoo::awms(b, x, kernels, "UpsBlk");
    const std::string out = b.pixel_shuffle("awms.ps", rec, 4, "UpsBlk");
    zoo::global_skip(b, out);
    b.set_config(k.finish());
    return std::move(b).finish("output");
}

}  // namespace srzoo
