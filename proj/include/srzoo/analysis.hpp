#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "srzoo/graph.hpp"

namespace srzoo {

/// Per-node output shapes, indexed like graph.nodes().
inline std::vector<Shape> infer_shapes(const Graph& g, const Shape& input) {
    if (!input.valid() || input.n < 1 || input.c < 1 || input.h < 1 || input.w < 1) {
        fail(ErrorCode::shape_mismatch, "input shape must have positive extents, got " + input.str());
    }
    std::vector<Shape> shapes(g.size());
    auto in_shape = [&](const LayerSpec& n, std::size_t k) { return shapes[g.index_of(n.inputs.at(k))]; };
    for (std::size_t i = 0; i < g.size(); ++i) {
        const LayerSpec& n = g.nodes()[i];
        const std::string where = "node '" + n.id + "': ";
        auto expect_inputs = [&](std::size_t lo, std::size_t hi) {
            if (n.inputs.size() < lo || n.inputs.size() > hi) {
                fail(ErrorCode::graph, where + "wrong number of inputs (" + std::to_string(n.inputs.size()) + ")");
            }
        };
        std::visit(
            [&](const auto& l) {
                using T = std::decay_t<decltype(l)>;
                if constexpr (std::is_same_v<T, InputLayer>) {
                    expect_inputs(0, 0);
                    if (input.c != l.channels) {
                        fail(ErrorCode::shape_mismatch, where + "expects " + std::to_string(l.channels) +
                                                            " input channels, got " + input.str());
                    }
                    shapes[i] = input;
                } else if constexpr (std::is_same_v<T, ConvLayer>) {
                    expect_inputs(1, 1);
                    const Shape s = in_shape(n, 0);
                    const ConvParams& p = l.params;
                    if (s.c != p.in_channels) {
                        fail(ErrorCode::shape_mismatch, where + "conv expects " + std::to_string(p.in_channels) +
                                                            " channels, input has " + std::to_string(s.c));
                    }
                    const Shape o{s.n, p.out_channels, p.output_extent(s.h, p.kernel_h),
                                  p.output_extent(s.w, p.kernel_w)};
                    if (o.h < 1 || o.w < 1) fail(ErrorCode::shape_mismatch, where + "zero-size conv output from " + s.str());
                    if (p.pad_mode == PadMode::reflect && (p.padding >= s.h || p.padding >= s.w)) {
                        fail(ErrorCode::shape_mismatch, where + "reflect padding larger than input " + s.str());
                    }
                    shapes[i] = o;
                } else if constexpr (std::is_same_v<T, ActivationLayer> || std::is_same_v<T, ScaleLayer>) {
                    expect_inputs(1, 1);
                    shapes[i] = in_shape(n, 0);
                } else if constexpr (std::is_same_v<T, PixelShuffleLayer>) {
                    expect_inputs(1, 1);
                    const Shape s = in_shape(n, 0);
                    const std::int64_t rr = l.factor * l.factor;
                    if (l.factor < 1 || s.c % rr != 0) {
                        fail(ErrorCode::shape_mismatch, where + "channels " + std::to_string(s.c) +
                                                            " not divisible by " + std::to_string(rr));
                    }
                    shapes[i] = Shape{s.n, s.c / rr, s.h * l.factor, s.w * l.factor};
                } else if constexpr (std::is_same_v<T, ResizeLayer>) {
                    expect_inputs(1, 1);
                    const Shape s = in_shape(n, 0);
                    shapes[i] = Shape{s.n, s.c, l.scale.apply(s.h), l.scale.apply(s.w)};
                } else if constexpr (std::is_same_v<T, GlobalAvgPoolLayer>) {
                    expect_inputs(1, 1);
                    const Shape s = in_shape(n, 0);
                    shapes[i] = Shape{s.n, s.c, 1, 1};
                } else if constexpr (std::is_same_v<T, ConcatLayer>) {
                    expect_inputs(1, SIZE_MAX);
                    Shape o = in_shape(n, 0);
                    o.c = 0;
                    for (std::size_t k = 0; k < n.inputs.size(); ++k) {
                        const Shape s = in_shape(n, k);
                        if (s.n != o.n || s.h != o.h || s.w != o.w) {
                            fail(ErrorCode::shape_mismatch, where + "concat input '" + n.inputs[k] + "' has shape " +
                                                                s.str() + ", incompatible with " + in_shape(n, 0).str());
                        }
                        o.c += s.c;
                    }
                    shapes[i] = o;
                } else if constexpr (std::is_same_v<T, SplitLayer>) {
                    expect_inputs(1, 1);
                    Shape s = in_shape(n, 0);
                    const std::int64_t total = std::accumulate(l.sizes.begin(), l.sizes.end(), std::int64_t{0});
                    if (total != s.c) {
                        fail(ErrorCode::shape_mismatch, where + "split sizes sum to " + std::to_string(total) +
                                                            ", input has " + std::to_string(s.c) + " channels");
                    }
                    if (l.take < 0 || l.take >= static_cast<std::int64_t>(l.sizes.size())) {
                        fail(ErrorCode::graph, where + "split part index out of range");
                    }
                    s.c = l.sizes[static_cast<std::size_t>(l.take)];
                    shapes[i] = s;
                } else if constexpr (std::is_same_v<T, AddLayer>) {
                    expect_inputs(2, SIZE_MAX);
                    const Shape s = in_shape(n, 0);
                    for (std::size_t k = 1; k < n.inputs.size(); ++k) {
                        if (in_shape(n, k) != s) {
                            fail(ErrorCode::shape_mismatch, where + "add operand '" + n.inputs[k] + "' has shape " +
                                                                in_shape(n, k).str() + ", expected " + s.str());
                        }
                    }
                    shapes[i] = s;
                } else if constexpr (std::is_same_v<T, MulLayer>) {
                    expect_inputs(2, 2);
                    const Shape s = in_shape(n, 0);
                    const Shape gshape = in_shape(n, 1);
                    if (gshape != Shape{s.n, s.c, 1, 1}) {
                        fail(ErrorCode::shape_mismatch, where + "gate " + gshape.str() + " does not broadcast over " + s.str());
                    }
                    shapes[i] = s;
                } else if constexpr (std::is_same_v<T, DenseLayer>) {
                    expect_inputs(1, 1);
                    const Shape s = in_shape(n, 0);
                    if (s.h != 1 || s.w != 1 || s.c != l.in_features) {
                        fail(ErrorCode::shape_mismatch, where + "dense expects (n," + std::to_string(l.in_features) +
                                                            ",1,1), got " + s.str());
                    }
                    shapes[i] = Shape{s.n, l.out_features, 1, 1};
                }
            },
            n.kind);
    }
    return shapes;
}

/// Totals broken down by block tag (tags in first-appearance order).
struct Breakdown {
    std::int64_t total = 0;
    std::vector<std::string> tags;
    std::map<std::string, std::int64_t> by_tag;

    void add(const std::string& tag, std::int64_t v) {
        if (!by_tag.count(tag)) {
            tags.push_back(tag);
            by_tag[tag] = 0;
        }
        by_tag[tag] += v;
        total += v;
    }

    std::int64_t of(const std::string& tag) const {
        auto it = by_tag.find(tag);
        return it == by_tag.end() ? 0 : it->second;
    }

    /// Share of `tag` in percent.
    double percent(const std::string& tag) const { return total == 0 ? 0.0 : 100.0 * double(of(tag)) / double(total); }
};

inline Breakdown count_params(const Graph& g) {
    Breakdown b;
    // zero-parameter tags stay visible, in graph order
    for (const LayerSpec& n : g.nodes()) b.add(n.block_tag, 0);
    for (const SlotSpec& s : g.parameter_slots()) b.add(s.block_tag, static_cast<std::int64_t>(s.shape.numel()));
    return b;
}

inline Breakdown count_macs(const Graph& g, const Shape& input) {
    const std::vector<Shape> shapes = infer_shapes(g, input);
    Breakdown b;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const LayerSpec& n = g.nodes()[i];
        std::int64_t macs = 0;
        if (const auto* c = std::get_if<ConvLayer>(&n.kind)) {
            const Shape& o = shapes[i];
            const ConvParams& p = c->params;
            macs = p.kernel_h * p.kernel_w * (p.in_channels / p.groups) * p.out_channels * o.h * o.w * o.n;
        } else if (const auto* d = std::get_if<DenseLayer>(&n.kind)) {
            macs = d->in_features * d->out_features * shapes[i].n;
        }
        b.add(n.block_tag, macs);
    }
    return b;
}

/// Exact non-negative rational for receptive-field bookkeeping.
struct Ratio {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Ratio make(std::int64_t n, std::int64_t d) {
        const std::int64_t g = std::gcd(n, d);
        return g == 0 ? Ratio{0, 1} : Ratio{n / g, d / g};
    }
    Ratio operator+(const Ratio& o) const { return make(num * o.den + o.num * den, den * o.den); }
    Ratio operator*(const Ratio& o) const { return make(num * o.num, den * o.den); }
    bool operator<(const Ratio& o) const { return num * o.den < o.num * den; }
    std::int64_t ceil() const { return (num + den - 1) / den; }
};

struct ReceptiveField {
    std::int64_t size = 1;
    /// True when a global pooling makes every input pixel reachable.
    bool global = false;
};

/// Side of the square input region one output pixel depends on, maximized
/// over all paths. Distances are tracked in input-pixel units: a conv grows
/// the field by (effective kernel - 1) * jump, striding multiplies the jump,
/// upsampling (pixel shuffle or resize) divides it, and a resize adds its
/// interpolation taps.
inline ReceptiveField receptive_field(const Graph& g) {
    struct State {
        Ratio rf{1, 1};
        Ratio jump{1, 1};
        bool global = false;
    };
    std::vector<State> st(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const LayerSpec& n = g.nodes()[i];
        State s;
        bool first = true;
        for (const std::string& in : n.inputs) {
            const State& p = st[g.index_of(in)];
            if (first) {
                s = p;
                first = false;
            } else {
                if (s.rf < p.rf) s.rf = p.rf;
                if (s.jump < p.jump) s.jump = p.jump;
                s.global = s.global || p.global;
            }
        }
        if (const auto* c = std::get_if<ConvLayer>(&n.kind)) {
            const ConvParams& p = c->params;
            const std::int64_t k_eff = (std::max(p.kernel_h, p.kernel_w) - 1) * p.dilation + 1;
            s.rf = s.rf + s.jump * Ratio::make(k_eff - 1, 1);
            s.jump = s.jump * Ratio::make(p.stride, 1);
        } else if (const auto* ps = std::get_if<PixelShuffleLayer>(&n.kind)) {
            s.jump = s.jump * Ratio::make(1, ps->factor);
        } else if (const auto* r = std::get_if<ResizeLayer>(&n.kind)) {
            const std::int64_t support = r->options.mode == ResizeMode::bicubic ? 4 : 2;
            Ratio taps = Ratio::make(support - 1, 1);
            if (r->options.antialias && r->scale.num < r->scale.den) {
                taps = Ratio::make(support * r->scale.den, r->scale.num) + Ratio::make(-1, 1);
            }
            s.rf = s.rf + s.jump * taps;
            s.jump = s.jump * Ratio::make(r->scale.den, r->scale.num);
        } else if (std::holds_alternative<GlobalAvgPoolLayer>(n.kind)) {
            s.global = true;
        }
        st[i] = s;
    }
    const State& out = st[g.output_index()];
    return ReceptiveField{out.rf.ceil(), out.global};
}

}  // namespace srzoo
