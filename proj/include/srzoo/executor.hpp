#pragma once

#include <optional>
#include <string>
#include <vector>

#include "srzoo/analysis.hpp"
#include "srzoo/conv.hpp"
#include "srzoo/graph.hpp"
#include "srzoo/ops.hpp"
#include "srzoo/resize.hpp"
#include "srzoo/weights.hpp"

namespace srzoo {

namespace detail {

inline Tensor run_node(const Graph& g, const LayerSpec& n, const WeightStore& store,
                       const std::vector<const Tensor*>& in) {
    return std::visit(
        [&](const auto& l) -> Tensor {
            using T = std::decay_t<decltype(l)>;
            const std::string& owner = g.canonical(n.id);
            if constexpr (std::is_same_v<T, InputLayer>) {
                fail(ErrorCode::graph, "input node cannot be executed");
            } else if constexpr (std::is_same_v<T, ConvLayer>) {
                return conv2d(*in[0], l.params, store.at(owner + ".weight"),
                              l.params.has_bias ? &store.at(owner + ".bias") : nullptr);
            } else if constexpr (std::is_same_v<T, ActivationLayer>) {
                return activation(*in[0], l.act);
            } else if constexpr (std::is_same_v<T, PixelShuffleLayer>) {
                return pixel_shuffle(*in[0], l.factor);
            } else if constexpr (std::is_same_v<T, ResizeLayer>) {
                return resize(*in[0], l.scale, l.options);
            } else if constexpr (std::is_same_v<T, GlobalAvgPoolLayer>) {
                return global_avg_pool(*in[0]);
            } else if constexpr (std::is_same_v<T, ConcatLayer>) {
                return concat_channels(std::span<const Tensor* const>(in));
            } else if constexpr (std::is_same_v<T, SplitLayer>) {
                std::int64_t offset = 0;
                for (std::int64_t k = 0; k < l.take; ++k) offset += l.sizes[static_cast<std::size_t>(k)];
                const std::int64_t total = std::accumulate(l.sizes.begin(), l.sizes.end(), std::int64_t{0});
                if (total != in[0]->shape().c) {
                    fail(ErrorCode::shape_mismatch, "split sizes sum to " + std::to_string(total) + ", input has " +
                                                        std::to_string(in[0]->shape().c) + " channels");
                }
                return slice_channels(*in[0], offset, l.sizes[static_cast<std::size_t>(l.take)]);
            } else if constexpr (std::is_same_v<T, AddLayer>) {
                Tensor acc = add(*in[0], *in[1]);
                for (std::size_t k = 2; k < in.size(); ++k) acc = add(acc, *in[k]);
                return acc;
            } else if constexpr (std::is_same_v<T, MulLayer>) {
                return scale_channels(*in[0], *in[1]);
            } else if constexpr (std::is_same_v<T, ScaleLayer>) {
                const float v = l.learnable ? store.at(owner + ".value").data()[0] : l.init;
                return mul(*in[0], v);
            } else if constexpr (std::is_same_v<T, DenseLayer>) {
                return dense(*in[0], store.at(owner + ".weight"), l.has_bias ? &store.at(owner + ".bias") : nullptr);
            }
        },
        n.kind);
}

}  // namespace detail

/// Executes the graph in node order. Intermediate tensors are released after
/// their last consumer runs. Errors from the tensor kernels are rethrown with
/// the failing node's id prepended.
inline Tensor forward(const Graph& g, const WeightStore& store, const Tensor& input) {
    check_store(g, store);
    infer_shapes(g, input.shape());

    std::vector<std::size_t> last_use(g.size(), 0);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (const std::string& in : g.nodes()[i].inputs) last_use[g.index_of(in)] = i;
    last_use[g.output_index()] = g.size();

    std::vector<std::optional<Tensor>> values(g.size());
    values[0] = input;
    for (std::size_t i = 1; i < g.size(); ++i) {
        const LayerSpec& n = g.nodes()[i];
        std::vector<const Tensor*> in;
        for (const std::string& id : n.inputs) in.push_back(&*values[g.index_of(id)]);
        try {
            values[i] = detail::run_node(g, n, store, in);
        } catch (const Error& e) {
            fail(e.code(), "node '" + n.id + "': " + e.what());
        }
        for (const std::string& id : n.inputs) {
            const std::size_t k = g.index_of(id);
            if (last_use[k] == i) values[k].reset();
        }
    }
    return std::move(*values[g.output_index()]);
}

}  // namespace srzoo
