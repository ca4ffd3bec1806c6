#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "srzoo/tensor.hpp"

namespace srzoo {

enum class ResizeMode { bilinear, bicubic };

inline const char* to_string(ResizeMode mode) { return mode == ResizeMode::bilinear ? "bilinear" : "bicubic"; }

inline ResizeMode parse_resize_mode(const std::string& text) {
    if (text == "bilinear") return ResizeMode::bilinear;
    if (text == "bicubic") return ResizeMode::bicubic;
    fail(ErrorCode::parse, "unknown resize mode '" + text + "'");
}

/// Positive rational scale factor num/den.
struct Scale {
    std::int64_t num = 1;
    std::int64_t den = 1;

    double value() const { return double(num) / double(den); }
    bool valid() const { return num > 0 && den > 0; }
    /// ceil(extent * num / den)
    std::int64_t apply(std::int64_t extent) const { return (extent * num + den - 1) / den; }

    std::string str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }

    static Scale parse(const std::string& text) {
        Scale s;
        try {
            const auto slash = text.find('/');
            s.num = std::stoll(text.substr(0, slash));
            s.den = slash == std::string::npos ? 1 : std::stoll(text.substr(slash + 1));
        } catch (const std::exception&) {
            fail(ErrorCode::parse, "bad scale '" + text + "'");
        }
        if (!s.valid()) fail(ErrorCode::parse, "scale must be positive, got '" + text + "'");
        const std::int64_t g = std::gcd(s.num, s.den);
        s.num /= g;
        s.den /= g;
        return s;
    }

    friend bool operator==(const Scale&, const Scale&) = default;
};

struct ResizeOptions {
    ResizeMode mode = ResizeMode::bilinear;
    /// Widen the kernel by 1/scale when shrinking.
    bool antialias = false;
    /// Map corner samples onto corner samples instead of pixel areas.
    bool align_corners = false;

    friend bool operator==(const ResizeOptions&, const ResizeOptions&) = default;
};

/// Cubic convolution kernel with a = -0.5.
inline double cubic_kernel(double x) {
    const double ax = std::abs(x);
    const double ax2 = ax * ax;
    const double ax3 = ax2 * ax;
    if (ax <= 1.0) return 1.5 * ax3 - 2.5 * ax2 + 1.0;
    if (ax <= 2.0) return -0.5 * ax3 + 2.5 * ax2 - 4.0 * ax + 2.0;
    return 0.0;
}

inline double triangle_kernel(double x) {
    const double ax = std::abs(x);
    return ax < 1.0 ? 1.0 - ax : 0.0;
}

/// Symmetric boundary (edge sample repeated), as used by imresize.
inline std::int64_t symmetric_index(std::int64_t i, std::int64_t extent) {
    const std::int64_t period = 2 * extent;
    i %= period;
    if (i < 0) i += period;
    return i < extent ? i : period - 1 - i;
}

/// Sparse 1-D resampling matrix: for each output sample, the source indices
/// and normalized weights contributing to it.
struct Contributions {
    std::vector<std::vector<std::int64_t>> indices;
    std::vector<std::vector<double>> weights;
};

inline Contributions contributions(std::int64_t in_len, std::int64_t out_len, double scale,
                                   const ResizeOptions& opt) {
    const bool cubic = opt.mode == ResizeMode::bicubic;
    const double support = cubic ? 2.0 : 1.0;
    const bool widen = opt.antialias && scale < 1.0;
    const double kernel_width = 2.0 * support / (widen ? scale : 1.0);
    auto kernel = [&](double x) {
        if (widen) return scale * (cubic ? cubic_kernel(scale * x) : triangle_kernel(scale * x));
        return cubic ? cubic_kernel(x) : triangle_kernel(x);
    };
    Contributions c;
    c.indices.resize(static_cast<std::size_t>(out_len));
    c.weights.resize(static_cast<std::size_t>(out_len));
    const std::int64_t taps = static_cast<std::int64_t>(std::ceil(kernel_width)) + 2;
    for (std::int64_t i = 0; i < out_len; ++i) {
        double u;
        if (opt.align_corners) {
            u = out_len > 1 ? double(i) * double(in_len - 1) / double(out_len - 1) : 0.0;
        } else {
            u = (double(i) + 0.5) / scale - 0.5;
        }
        const std::int64_t left = static_cast<std::int64_t>(std::floor(u - kernel_width / 2.0));
        double total = 0.0;
        auto& idx = c.indices[static_cast<std::size_t>(i)];
        auto& wts = c.weights[static_cast<std::size_t>(i)];
        for (std::int64_t t = 0; t < taps; ++t) {
            const std::int64_t j = left + t;
            const double w = kernel(u - double(j));
            if (w == 0.0) continue;
            idx.push_back(symmetric_index(j, in_len));
            wts.push_back(w);
            total += w;
        }
        for (double& w : wts) w /= total;
    }
    return c;
}

namespace detail {

inline Tensor resize_axis(const Tensor& input, std::int64_t out_len, double scale, const ResizeOptions& opt,
                          bool along_h) {
    const Shape& s = input.shape();
    const std::int64_t in_len = along_h ? s.h : s.w;
    const Contributions c = contributions(in_len, out_len, scale, opt);
    Shape os = s;
    (along_h ? os.h : os.w) = out_len;
    Tensor out(os);
    for (std::int64_t n = 0; n < s.n; ++n)
        for (std::int64_t ch = 0; ch < s.c; ++ch)
            for (std::int64_t y = 0; y < os.h; ++y)
                for (std::int64_t x = 0; x < os.w; ++x) {
                    const std::size_t o = static_cast<std::size_t>(along_h ? y : x);
                    double sum = 0.0;
                    for (std::size_t t = 0; t < c.indices[o].size(); ++t) {
                        const std::int64_t j = c.indices[o][t];
                        sum += c.weights[o][t] * (along_h ? input.at(n, ch, j, x) : input.at(n, ch, y, j));
                    }
                    out.at(n, ch, y, x) = static_cast<float>(sum);
                }
    return out;
}

}  // namespace detail

/// Separable resampling to an explicit size; rows first, then columns.
/// `scale_h`/`scale_w` drive kernel placement and antialias widening.
inline Tensor resize_to(const Tensor& input, std::int64_t out_h, std::int64_t out_w, const ResizeOptions& opt,
                        double scale_h, double scale_w) {
    if (out_h <= 0 || out_w <= 0) {
        fail(ErrorCode::invalid_argument,
             "resize: non-positive target size " + std::to_string(out_h) + "x" + std::to_string(out_w));
    }
    if (input.shape().h <= 0 || input.shape().w <= 0) fail(ErrorCode::shape_mismatch, "resize: empty input");
    Tensor rows = detail::resize_axis(input, out_h, scale_h, opt, true);
    return detail::resize_axis(rows, out_w, scale_w, opt, false);
}

inline Tensor resize_to(const Tensor& input, std::int64_t out_h, std::int64_t out_w, const ResizeOptions& opt) {
    return resize_to(input, out_h, out_w, opt, double(out_h) / double(input.shape().h),
                     double(out_w) / double(input.shape().w));
}

inline Tensor resize(const Tensor& input, Scale scale, const ResizeOptions& opt) {
    if (!scale.valid()) fail(ErrorCode::invalid_argument, "resize: scale must be positive");
    return resize_to(input, scale.apply(input.shape().h), scale.apply(input.shape().w), opt, scale.value(),
                     scale.value());
}

}  // namespace srzoo
