#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "srzoo/tensor.hpp"

namespace srzoo {

// ---------------------------------------------------------------------------
// Activations

enum class ActKind { relu, leaky_relu, sigmoid, h_swish, h_sigmoid };

struct Activation {
    ActKind kind = ActKind::relu;
    float alpha = 0.2f;  // leaky_relu slope

    friend bool operator==(const Activation&, const Activation&) = default;
};

inline const char* to_string(ActKind kind) {
    switch (kind) {
        case ActKind::relu: return "relu";
        case ActKind::leaky_relu: return "leaky_relu";
        case ActKind::sigmoid: return "sigmoid";
        case ActKind::h_swish: return "h_swish";
        case ActKind::h_sigmoid: return "h_sigmoid";
    }
    return "unknown";
}

inline ActKind parse_act_kind(const std::string& text) {
    for (ActKind k : {ActKind::relu, ActKind::leaky_relu, ActKind::sigmoid, ActKind::h_swish, ActKind::h_sigmoid}) {
        if (text == to_string(k)) return k;
    }
    fail(ErrorCode::invalid_argument, "unknown activation kind '" + text + "'");
}

inline float h_sigmoid(float x) { return std::clamp(x + 3.0f, 0.0f, 6.0f) / 6.0f; }

inline float apply_activation(float x, const Activation& act) {
    switch (act.kind) {
        case ActKind::relu: return x > 0.0f ? x : 0.0f;
        case ActKind::leaky_relu: return x >= 0.0f ? x : act.alpha * x;
        case ActKind::sigmoid: return 1.0f / (1.0f + std::exp(-x));
        case ActKind::h_swish: return x * h_sigmoid(x);
        case ActKind::h_sigmoid: return h_sigmoid(x);
    }
    fail(ErrorCode::invalid_argument, "unknown activation kind");
}

inline Tensor activation(const Tensor& input, const Activation& act) {
    if (act.kind == ActKind::leaky_relu && !(act.alpha > 0.0f && act.alpha < 1.0f)) {
        fail(ErrorCode::invalid_argument, "leaky_relu slope must lie in (0, 1), got " + std::to_string(act.alpha));
    }
    if (static_cast<int>(act.kind) < 0 || static_cast<int>(act.kind) > static_cast<int>(ActKind::h_sigmoid)) {
        fail(ErrorCode::invalid_argument, "unknown activation kind");
    }
    Tensor out = input;
    for (float& v : out.data()) v = apply_activation(v, act);
    return out;
}

// ---------------------------------------------------------------------------
// Sub-pixel rearrangement

/// (n, c*r*r, h, w) -> (n, c, h*r, w*r); output (c, r*y+dy, r*x+dx) reads
/// input channel c*r*r + dy*r + dx at (y, x).
inline Tensor pixel_shuffle(const Tensor& input, std::int64_t r) {
    const Shape& s = input.shape();
    if (r <= 0) fail(ErrorCode::invalid_argument, "pixel_shuffle: factor must be positive");
    if (s.c % (r * r) != 0) {
        fail(ErrorCode::shape_mismatch, "pixel_shuffle: channels " + std::to_string(s.c) + " not divisible by " +
                                            std::to_string(r * r));
    }
    const std::int64_t oc = s.c / (r * r);
    Tensor out(Shape{s.n, oc, s.h * r, s.w * r});
    for (std::int64_t n = 0; n < s.n; ++n)
        for (std::int64_t c = 0; c < oc; ++c)
            for (std::int64_t dy = 0; dy < r; ++dy)
                for (std::int64_t dx = 0; dx < r; ++dx) {
                    const std::int64_t ic = c * r * r + dy * r + dx;
                    for (std::int64_t y = 0; y < s.h; ++y)
                        for (std::int64_t x = 0; x < s.w; ++x) out.at(n, c, r * y + dy, r * x + dx) = input.at(n, ic, y, x);
                }
    return out;
}

/// Inverse of pixel_shuffle.
inline Tensor pixel_unshuffle(const Tensor& input, std::int64_t r) {
    const Shape& s = input.shape();
    if (r <= 0) fail(ErrorCode::invalid_argument, "pixel_unshuffle: factor must be positive");
    if (s.h % r != 0 || s.w % r != 0) {
        fail(ErrorCode::shape_mismatch, "pixel_unshuffle: spatial dims of " + s.str() + " not divisible by " +
                                            std::to_string(r));
    }
    Tensor out(Shape{s.n, s.c * r * r, s.h / r, s.w / r});
    for (std::int64_t n = 0; n < s.n; ++n)
        for (std::int64_t c = 0; c < s.c; ++c)
            for (std::int64_t dy = 0; dy < r; ++dy)
                for (std::int64_t dx = 0; dx < r; ++dx) {
                    const std::int64_t oc = c * r * r + dy * r + dx;
                    for (std::int64_t y = 0; y < s.h / r; ++y)
                        for (std::int64_t x = 0; x < s.w / r; ++x) out.at(n, oc, y, x) = input.at(n, c, r * y + dy, r * x + dx);
                }
    return out;
}

// ---------------------------------------------------------------------------
// Pooling, channel plumbing

inline Tensor global_avg_pool(const Tensor& input) {
    const Shape& s = input.shape();
    if (s.h < 1 || s.w < 1) fail(ErrorCode::shape_mismatch, "global_avg_pool: empty spatial extent " + s.str());
    Tensor out(Shape{s.n, s.c, 1, 1});
    for (std::int64_t n = 0; n < s.n; ++n)
        for (std::int64_t c = 0; c < s.c; ++c) {
            double sum = 0.0;
            for (float v : input.plane(n, c)) sum += v;
            out.at(n, c, 0, 0) = static_cast<float>(sum / double(s.h * s.w));
        }
    return out;
}

inline Tensor concat_channels(std::span<const Tensor* const> inputs) {
    if (inputs.empty()) fail(ErrorCode::invalid_argument, "concat: no inputs");
    const Shape& first = inputs[0]->shape();
    std::int64_t channels = 0;
    for (const Tensor* t : inputs) {
        const Shape& s = t->shape();
        if (s.n != first.n || s.h != first.h || s.w != first.w) {
            fail(ErrorCode::shape_mismatch, "concat: spatial/batch mismatch " + s.str() + " vs " + first.str());
        }
        channels += s.c;
    }
    Tensor out(Shape{first.n, channels, first.h, first.w});
    const std::size_t plane = static_cast<std::size_t>(first.h * first.w);
    for (std::int64_t n = 0; n < first.n; ++n) {
        std::int64_t offset = 0;
        for (const Tensor* t : inputs) {
            const std::size_t count = static_cast<std::size_t>(t->shape().c) * plane;
            std::copy_n(t->data().begin() + static_cast<std::ptrdiff_t>(t->index(n, 0, 0, 0)), count,
                        out.data().begin() + static_cast<std::ptrdiff_t>(out.index(n, offset, 0, 0)));
            offset += t->shape().c;
        }
    }
    return out;
}

inline Tensor concat_channels(const std::vector<Tensor>& inputs) {
    std::vector<const Tensor*> ptrs;
    for (const Tensor& t : inputs) ptrs.push_back(&t);
    return concat_channels(std::span<const Tensor* const>(ptrs));
}

/// Channel range [offset, offset + count).
inline Tensor slice_channels(const Tensor& input, std::int64_t offset, std::int64_t count) {
    const Shape& s = input.shape();
    if (offset < 0 || count <= 0 || offset + count > s.c) {
        fail(ErrorCode::shape_mismatch, "slice_channels: range [" + std::to_string(offset) + ", " +
                                            std::to_string(offset + count) + ") outside " + std::to_string(s.c) +
                                            " channels");
    }
    Tensor out(Shape{s.n, count, s.h, s.w});
    const std::size_t plane = static_cast<std::size_t>(s.h * s.w);
    for (std::int64_t n = 0; n < s.n; ++n) {
        std::copy_n(input.data().begin() + static_cast<std::ptrdiff_t>(input.index(n, offset, 0, 0)),
                    static_cast<std::size_t>(count) * plane,
                    out.data().begin() + static_cast<std::ptrdiff_t>(out.index(n, 0, 0, 0)));
    }
    return out;
}

inline std::vector<Tensor> split_channels(const Tensor& input, std::span<const std::int64_t> sizes) {
    const std::int64_t total = std::accumulate(sizes.begin(), sizes.end(), std::int64_t{0});
    if (total != input.shape().c) {
        fail(ErrorCode::shape_mismatch, "split: sizes sum to " + std::to_string(total) + " but input has " +
                                            std::to_string(input.shape().c) + " channels");
    }
    std::vector<Tensor> parts;
    std::int64_t offset = 0;
    for (std::int64_t size : sizes) {
        parts.push_back(slice_channels(input, offset, size));
        offset += size;
    }
    return parts;
}

// ---------------------------------------------------------------------------
// Elementwise

enum class ElementwiseOp { add, mul };

inline Tensor elementwise(const Tensor& a, const Tensor& b, ElementwiseOp op) {
    if (a.shape() != b.shape()) {
        fail(ErrorCode::shape_mismatch, "elementwise: " + a.shape().str() + " vs " + b.shape().str());
    }
    Tensor out = a;
    auto o = out.data();
    auto bv = b.data();
    if (op == ElementwiseOp::add) {
        for (std::size_t i = 0; i < o.size(); ++i) o[i] += bv[i];
    } else {
        for (std::size_t i = 0; i < o.size(); ++i) o[i] *= bv[i];
    }
    return out;
}

inline Tensor elementwise(const Tensor& a, float scalar, ElementwiseOp op) {
    Tensor out = a;
    for (float& v : out.data()) v = op == ElementwiseOp::add ? v + scalar : v * scalar;
    return out;
}

inline Tensor add(const Tensor& a, const Tensor& b) { return elementwise(a, b, ElementwiseOp::add); }
inline Tensor mul(const Tensor& a, float s) { return elementwise(a, s, ElementwiseOp::mul); }

/// x * gate where gate is (n, c, 1, 1); the SE rescale.
inline Tensor scale_channels(const Tensor& x, const Tensor& gate) {
    const Shape& s = x.shape();
    const Shape& g = gate.shape();
    if (g.n != s.n || g.c != s.c || g.h != 1 || g.w != 1) {
        fail(ErrorCode::shape_mismatch, "scale_channels: gate " + g.str() + " does not broadcast over " + s.str());
    }
    Tensor out = x;
    for (std::int64_t n = 0; n < s.n; ++n)
        for (std::int64_t c = 0; c < s.c; ++c) {
            const float gv = gate.at(n, c, 0, 0);
            for (float& v : out.plane(n, c)) v *= gv;
        }
    return out;
}

/// Fully connected layer on (n, in, 1, 1); weight is (out, in, 1, 1).
inline Tensor dense(const Tensor& input, const Tensor& weight, const Tensor* bias = nullptr) {
    const Shape& s = input.shape();
    const Shape& ws = weight.shape();
    if (s.h != 1 || s.w != 1) fail(ErrorCode::shape_mismatch, "dense: input must be (n, c, 1, 1), got " + s.str());
    if (ws.c != s.c || ws.h != 1 || ws.w != 1) {
        fail(ErrorCode::shape_mismatch, "dense: weight " + ws.str() + " incompatible with input " + s.str());
    }
    if (bias && bias->numel() != static_cast<std::size_t>(ws.n)) {
        fail(ErrorCode::shape_mismatch, "dense: bias length mismatch");
    }
    Tensor out(Shape{s.n, ws.n, 1, 1});
    for (std::int64_t n = 0; n < s.n; ++n)
        for (std::int64_t o = 0; o < ws.n; ++o) {
            double sum = bias ? bias->data()[o] : 0.0;
            for (std::int64_t i = 0; i < s.c; ++i) sum += double(weight.at(o, i, 0, 0)) * double(input.at(n, i, 0, 0));
            out.at(n, o, 0, 0) = static_cast<float>(sum);
        }
    return out;
}

}  // namespace srzoo
