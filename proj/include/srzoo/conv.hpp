#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srzoo/parallel.hpp"
#include "srzoo/tensor.hpp"

namespace srzoo {

enum class PadMode { zero, reflect };

inline const char* to_string(PadMode mode) { return mode == PadMode::zero ? "zero" : "reflect"; }

inline PadMode parse_pad_mode(const std::string& text) {
    if (text == "zero") return PadMode::zero;
    if (text == "reflect") return PadMode::reflect;
    fail(ErrorCode::parse, "unknown pad mode '" + text + "'");
}

struct ConvParams {
    std::int64_t in_channels = 1;
    std::int64_t out_channels = 1;
    std::int64_t kernel_h = 3;
    std::int64_t kernel_w = 3;
    std::int64_t stride = 1;
    std::int64_t padding = 1;
    std::int64_t dilation = 1;
    std::int64_t groups = 1;
    PadMode pad_mode = PadMode::zero;
    bool has_bias = true;

    void validate() const {
        if (in_channels <= 0 || out_channels <= 0 || kernel_h <= 0 || kernel_w <= 0 || stride <= 0 ||
            dilation <= 0 || groups <= 0) {
            fail(ErrorCode::invalid_argument, "conv params must be positive: " + describe());
        }
        if (padding < 0) fail(ErrorCode::invalid_argument, "conv padding must be non-negative");
        if (in_channels % groups != 0 || out_channels % groups != 0) {
            fail(ErrorCode::invalid_argument,
                 "conv channels must be divisible by groups=" + std::to_string(groups) + ": " + describe());
        }
    }

    bool depthwise() const { return groups > 1 && groups == in_channels && in_channels == out_channels; }
    bool pointwise() const { return kernel_h == 1 && kernel_w == 1 && groups == 1; }

    Shape weight_shape() const { return {out_channels, in_channels / groups, kernel_h, kernel_w}; }
    Shape bias_shape() const { return {1, out_channels, 1, 1}; }

    std::int64_t weight_count() const { return out_channels * (in_channels / groups) * kernel_h * kernel_w; }
    std::int64_t param_count() const { return weight_count() + (has_bias ? out_channels : 0); }

    std::int64_t output_extent(std::int64_t extent, std::int64_t kernel) const {
        const std::int64_t span = extent + 2 * padding - dilation * (kernel - 1) - 1;
        return span < 0 ? 0 : span / stride + 1;
    }

    std::string describe() const {
        return std::to_string(in_channels) + "->" + std::to_string(out_channels) + " k" + std::to_string(kernel_h) +
               "x" + std::to_string(kernel_w) + " s" + std::to_string(stride) + " p" + std::to_string(padding) +
               " d" + std::to_string(dilation) + " g" + std::to_string(groups);
    }

    friend bool operator==(const ConvParams&, const ConvParams&) = default;
};

/// k x k convolution that preserves spatial size at stride 1.
inline ConvParams same_conv(std::int64_t in, std::int64_t out, std::int64_t k, std::int64_t dilation = 1,
                            bool bias = true, PadMode mode = PadMode::zero, std::int64_t groups = 1) {
    ConvParams p;
    p.in_channels = in;
    p.out_channels = out;
    p.kernel_h = p.kernel_w = k;
    p.dilation = dilation;
    p.padding = (k - 1) * dilation / 2;
    p.has_bias = bias;
    p.pad_mode = mode;
    p.groups = groups;
    return p;
}

/// Maps a possibly out-of-range coordinate into [0, extent) by mirroring about
/// the edge sample (the edge itself is not repeated).
inline std::int64_t reflect_index(std::int64_t i, std::int64_t extent) {
    if (extent == 1) return 0;
    const std::int64_t period = 2 * (extent - 1);
    i %= period;
    if (i < 0) i += period;
    return i < extent ? i : period - i;
}

namespace detail {

inline Shape check_conv(const Tensor& input, const ConvParams& p, const Tensor& weight, const Tensor* bias) {
    p.validate();
    const Shape& in = input.shape();
    if (in.c != p.in_channels) {
        fail(ErrorCode::shape_mismatch, "conv2d: input channels " + std::to_string(in.c) + " != in_channels " +
                                            std::to_string(p.in_channels));
    }
    const Shape ws = p.weight_shape();
    const Shape& got = weight.shape();
    const char* names[4] = {"out_channels", "in_channels/groups", "kernel_h", "kernel_w"};
    const std::int64_t want[4] = {ws.n, ws.c, ws.h, ws.w};
    const std::int64_t have[4] = {got.n, got.c, got.h, got.w};
    for (int i = 0; i < 4; ++i) {
        if (want[i] != have[i]) {
            fail(ErrorCode::shape_mismatch, std::string("conv2d: weight dimension ") + names[i] + " is " +
                                                std::to_string(have[i]) + ", expected " + std::to_string(want[i]));
        }
    }
    if (p.has_bias != (bias != nullptr)) {
        fail(ErrorCode::shape_mismatch, p.has_bias ? "conv2d: bias required" : "conv2d: unexpected bias");
    }
    if (bias != nullptr && bias->numel() != static_cast<std::size_t>(p.out_channels)) {
        fail(ErrorCode::shape_mismatch, "conv2d: bias has " + std::to_string(bias->numel()) + " values, expected " +
                                            std::to_string(p.out_channels));
    }
    if (p.pad_mode == PadMode::reflect && p.padding > 0 && (p.padding >= in.h || p.padding >= in.w)) {
        fail(ErrorCode::shape_mismatch, "conv2d: reflect padding " + std::to_string(p.padding) +
                                            " needs spatial dims larger than the pad, got " + in.str());
    }
    const Shape out{in.n, p.out_channels, p.output_extent(in.h, p.kernel_h), p.output_extent(in.w, p.kernel_w)};
    if (out.h <= 0 || out.w <= 0) {
        fail(ErrorCode::shape_mismatch, "conv2d: zero-size output for input " + in.str() + " and " + p.describe());
    }
    return out;
}

}  // namespace detail

/// Padded copy of every (n, c) plane; the source for the blocked kernel below.
inline Tensor pad_planes(const Tensor& input, std::int64_t pad, PadMode mode) {
    const Shape& s = input.shape();
    Tensor out(Shape{s.n, s.c, s.h + 2 * pad, s.w + 2 * pad});
    for (std::int64_t n = 0; n < s.n; ++n) {
        for (std::int64_t c = 0; c < s.c; ++c) {
            for (std::int64_t y = 0; y < s.h + 2 * pad; ++y) {
                std::int64_t sy = y - pad;
                if (mode == PadMode::reflect) sy = reflect_index(sy, s.h);
                for (std::int64_t x = 0; x < s.w + 2 * pad; ++x) {
                    std::int64_t sx = x - pad;
                    if (mode == PadMode::reflect) sx = reflect_index(sx, s.w);
                    const bool inside = sy >= 0 && sy < s.h && sx >= 0 && sx < s.w;
                    out.at(n, c, y, x) = inside ? input.at(n, c, sy, sx) : 0.0f;
                }
            }
        }
    }
    return out;
}

/// Grouped, dilated, strided 2-D convolution. Output channels are computed
/// independently (in parallel when enabled); each output element accumulates
/// its taps in a fixed (input channel, ky, kx) order in double precision.
inline Tensor conv2d(const Tensor& input, const ConvParams& p, const Tensor& weight, const Tensor* bias = nullptr) {
    const Shape out_shape = detail::check_conv(input, p, weight, bias);
    Tensor out(out_shape);
    const Tensor padded = p.padding > 0 ? pad_planes(input, p.padding, p.pad_mode) : input;
    const std::int64_t pw = padded.shape().w;
    const std::int64_t oh = out_shape.h;
    const std::int64_t ow = out_shape.w;
    const std::int64_t cin_g = p.in_channels / p.groups;
    const std::int64_t cout_g = p.out_channels / p.groups;
    const float* wdata = weight.data().data();

    for (std::int64_t n = 0; n < out_shape.n; ++n) {
        parallel_for(p.out_channels, [&](std::int64_t oc) {
            std::vector<double> acc(static_cast<std::size_t>(oh * ow), bias ? double(bias->data()[oc]) : 0.0);
            const std::int64_t ic0 = (oc / cout_g) * cin_g;
            for (std::int64_t icl = 0; icl < cin_g; ++icl) {
                const float* src = padded.plane(n, ic0 + icl).data();
                const float* wk = wdata + (oc * cin_g + icl) * p.kernel_h * p.kernel_w;
                for (std::int64_t ky = 0; ky < p.kernel_h; ++ky) {
                    for (std::int64_t kx = 0; kx < p.kernel_w; ++kx) {
                        const double wv = wk[ky * p.kernel_w + kx];
                        for (std::int64_t oy = 0; oy < oh; ++oy) {
                            const float* row = src + (oy * p.stride + ky * p.dilation) * pw + kx * p.dilation;
                            double* dst = acc.data() + oy * ow;
                            if (p.stride == 1) {
                                for (std::int64_t ox = 0; ox < ow; ++ox) dst[ox] += wv * double(row[ox]);
                            } else {
                                for (std::int64_t ox = 0; ox < ow; ++ox) dst[ox] += wv * double(row[ox * p.stride]);
                            }
                        }
                    }
                }
            }
            float* o = out.plane(n, oc).data();
            for (std::size_t i = 0; i < acc.size(); ++i) o[i] = static_cast<float>(acc[i]);
        });
    }
    return out;
}

/// Slow path: one output element at a time, taps bounds-checked individually.
inline Tensor conv2d_reference(const Tensor& input, const ConvParams& p, const Tensor& weight,
                               const Tensor* bias = nullptr) {
    const Shape out_shape = detail::check_conv(input, p, weight, bias);
    const Shape& in = input.shape();
    Tensor out(out_shape);
    const std::int64_t cin_g = p.in_channels / p.groups;
    const std::int64_t cout_g = p.out_channels / p.groups;
    for (std::int64_t n = 0; n < out_shape.n; ++n)
        for (std::int64_t oc = 0; oc < out_shape.c; ++oc)
            for (std::int64_t oy = 0; oy < out_shape.h; ++oy)
                for (std::int64_t ox = 0; ox < out_shape.w; ++ox) {
                    double sum = bias ? bias->data()[oc] : 0.0;
                    for (std::int64_t icl = 0; icl < cin_g; ++icl) {
                        const std::int64_t ic = (oc / cout_g) * cin_g + icl;
                        for (std::int64_t ky = 0; ky < p.kernel_h; ++ky)
                            for (std::int64_t kx = 0; kx < p.kernel_w; ++kx) {
                                std::int64_t y = oy * p.stride + ky * p.dilation - p.padding;
                                std::int64_t x = ox * p.stride + kx * p.dilation - p.padding;
                                if (p.pad_mode == PadMode::reflect) {
                                    y = reflect_index(y, in.h);
                                    x = reflect_index(x, in.w);
                                } else if (y < 0 || y >= in.h || x < 0 || x >= in.w) {
                                    continue;
                                }
                                sum += double(weight.at(oc, icl, ky, kx)) * double(input.at(n, ic, y, x));
                            }
                    }
                    out.at(n, oc, oy, ox) = static_cast<float>(sum);
                }
    return out;
}

}  // namespace srzoo
