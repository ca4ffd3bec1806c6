#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "srzoo/graph.hpp"
#include "srzoo/weights.hpp"

namespace srzoo {

namespace detail {

/// Keeps the listed indices along dim 0 (rows) or dim 1 (cols) of a rank-4 tensor.
inline Tensor select_dim(const Tensor& t, const std::vector<std::int64_t>& keep, int dim) {
    const Shape& s = t.shape();
    Shape o = s;
    (dim == 0 ? o.n : o.c) = static_cast<std::int64_t>(keep.size());
    Tensor out(o);
    for (std::int64_t a = 0; a < o.n; ++a)
        for (std::int64_t b = 0; b < o.c; ++b)
            for (std::int64_t y = 0; y < o.h; ++y)
                for (std::int64_t x = 0; x < o.w; ++x) {
                    const std::int64_t sa = dim == 0 ? keep[static_cast<std::size_t>(a)] : a;
                    const std::int64_t sb = dim == 1 ? keep[static_cast<std::size_t>(b)] : b;
                    out.at(a, b, y, x) = t.at(sa, sb, y, x);
                }
    return out;
}

}  // namespace detail

/// Removes output channels of `conv_id` (mask true = keep) and narrows every
/// downstream consumer. Consumers are followed through activations, fixed or
/// learnable scalar scales and depthwise convs, and must end at ordinary
/// (groups == 1) convs; anything else that mixes or regroups channels makes
/// the channel structurally unprunable.
inline std::pair<Graph, WeightStore> prune_channels(const Graph& g, const WeightStore& store, const std::string& conv_id,
                                                    const std::vector<bool>& keep_mask) {
    check_store(g, store);
    const std::size_t root = g.index_of(conv_id);
    const auto* root_conv = std::get_if<ConvLayer>(&g.nodes()[root].kind);
    if (!root_conv) fail(ErrorCode::invalid_argument, "prune: node '" + conv_id + "' is not a conv");
    if (static_cast<std::int64_t>(keep_mask.size()) != root_conv->params.out_channels) {
        fail(ErrorCode::invalid_argument, "prune: mask has " + std::to_string(keep_mask.size()) + " entries, conv '" +
                                              conv_id + "' has " + std::to_string(root_conv->params.out_channels) +
                                              " output channels");
    }
    std::vector<std::int64_t> keep;
    for (std::size_t i = 0; i < keep_mask.size(); ++i)
        if (keep_mask[i]) keep.push_back(static_cast<std::int64_t>(i));
    if (keep.empty()) fail(ErrorCode::invalid_argument, "prune: mask must keep at least one channel");

    auto is_shared = [&](const std::string& id) {
        for (const auto& group : g.shared_groups())
            if (std::find(group.begin(), group.end(), id) != group.end()) return true;
        return false;
    };
    const auto kept = static_cast<std::int64_t>(keep.size());

    std::vector<LayerSpec> nodes = g.nodes();
    WeightStore out = store;
    auto slice_bias = [&](const std::string& id) {
        Tensor& b = out.at(id + ".bias");
        Tensor nb(Shape{1, kept, 1, 1});
        for (std::int64_t i = 0; i < kept; ++i) nb.data()[i] = b.data()[keep[static_cast<std::size_t>(i)]];
        b = std::move(nb);
    };

    auto prune_outputs = [&](std::size_t idx) {
        LayerSpec& n = nodes[idx];
        if (is_shared(n.id)) fail(ErrorCode::graph, "prune: conv '" + n.id + "' shares weights and cannot be narrowed");
        ConvParams& p = std::get<ConvLayer>(n.kind).params;
        out.at(n.id + ".weight") = detail::select_dim(out.at(n.id + ".weight"), keep, 0);
        if (p.has_bias) slice_bias(n.id);
        p.out_channels = kept;
    };

    prune_outputs(root);
    std::vector<std::size_t> frontier{root};
    std::vector<bool> seen(g.size(), false);
    seen[root] = true;
    while (!frontier.empty()) {
        const std::size_t cur = frontier.back();
        frontier.pop_back();
        if (cur == g.output_index()) {
            fail(ErrorCode::graph, "prune: channels of '" + g.nodes()[cur].id + "' reach the graph output");
        }
        for (std::size_t c : g.consumers(cur)) {
            if (seen[c]) continue;
            seen[c] = true;
            LayerSpec& n = nodes[c];
            if (std::holds_alternative<ActivationLayer>(n.kind) || std::holds_alternative<ScaleLayer>(n.kind)) {
                frontier.push_back(c);
                continue;
            }
            if (auto* conv = std::get_if<ConvLayer>(&n.kind)) {
                ConvParams& p = conv->params;
                if (p.depthwise()) {
                    prune_outputs(c);
                    p.in_channels = kept;
                    p.groups = kept;
                    frontier.push_back(c);
                    continue;
                }
                if (p.groups == 1) {
                    if (is_shared(n.id)) fail(ErrorCode::graph, "prune: consumer conv '" + n.id + "' shares weights");
                    out.at(n.id + ".weight") = detail::select_dim(out.at(n.id + ".weight"), keep, 1);
                    p.in_channels = kept;
                    continue;
                }
            }
            fail(ErrorCode::graph, std::string("prune: consumer '") + n.id + "' (" + kind_name(n.kind) +
                                       ") cannot be narrowed consistently");
        }
    }

    Graph pruned(std::move(nodes), g.output(), g.shared_groups(), g.config());
    out.graph_fingerprint = fingerprint(pruned);
    return {std::move(pruned), std::move(out)};
}

}  // namespace srzoo
