#pragma once

#include <cmath>
#include <string>

#include "srzoo/data.hpp"
#include "srzoo/tensor.hpp"

namespace srzoo {

/// PSNR in dB, or the distinguished infinite verdict for identical images.
struct PsnrResult {
    bool infinite = false;
    double db = 0.0;

    std::string str() const { return infinite ? "inf" : std::to_string(db); }
};

namespace detail {

/// ITU-R BT.601 luma of 8-bit RGB, in [16, 235].
inline double luma(double r, double g, double b) { return 16.0 + (65.481 * r + 128.553 * g + 24.966 * b) / 255.0; }

}  // namespace detail

/// PSNR of two (n, 3, H, W) images in the [0, 255] domain. Both images are
/// rounded to 8-bit integers first and `border` pixels are dropped on every
/// side. With `y_channel` the comparison uses BT.601 luma instead of RGB.
inline PsnrResult psnr(const Tensor& sr, const Tensor& gt, std::int64_t border = 4, bool y_channel = false) {
    const Shape& s = sr.shape();
    if (s != gt.shape()) fail(ErrorCode::shape_mismatch, "psnr: shapes differ: " + s.str() + " vs " + gt.shape().str());
    if (border < 0) fail(ErrorCode::invalid_argument, "psnr: border must be non-negative");
    if (s.h <= 2 * border || s.w <= 2 * border) {
        fail(ErrorCode::shape_mismatch, "psnr: image " + std::to_string(s.h) + "x" + std::to_string(s.w) +
                                            " too small for border " + std::to_string(border));
    }
    if (y_channel && s.c != 3) fail(ErrorCode::shape_mismatch, "psnr: luma mode needs 3 channels");
    const Tensor a = quantize_8bit(sr);
    const Tensor b = quantize_8bit(gt);
    double sse = 0.0;
    std::int64_t count = 0;
    for (std::int64_t n = 0; n < s.n; ++n)
        for (std::int64_t y = border; y < s.h - border; ++y)
            for (std::int64_t x = border; x < s.w - border; ++x) {
                if (y_channel) {
                    const double d = detail::luma(a.at(n, 0, y, x), a.at(n, 1, y, x), a.at(n, 2, y, x)) -
                                     detail::luma(b.at(n, 0, y, x), b.at(n, 1, y, x), b.at(n, 2, y, x));
                    sse += d * d;
                    ++count;
                } else {
                    for (std::int64_t c = 0; c < s.c; ++c) {
                        const double d = double(a.at(n, c, y, x)) - double(b.at(n, c, y, x));
                        sse += d * d;
                        ++count;
                    }
                }
            }
    if (sse == 0.0) return {true, 0.0};
    const double mse = sse / double(count);
    return {false, 10.0 * std::log10(255.0 * 255.0 / mse)};
}

}  // namespace srzoo
