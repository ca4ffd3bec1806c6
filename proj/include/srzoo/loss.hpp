#pragma once

#include <cmath>
#include <string>

#include "srzoo/tensor.hpp"

namespace srzoo {

enum class LossKind { l1, focal_l1, l1_tv };

/// How focal L1 weights the error: by each image's mean error or by each
/// pixel's own error.
enum class FocalGranularity { per_image, per_pixel };

struct LossSpec {
    LossKind kind = LossKind::l1;
    double lambda = 1e-4;  // l1_tv only
    FocalGranularity focal = FocalGranularity::per_image;
};

inline LossKind parse_loss_kind(const std::string& text) {
    if (text == "l1") return LossKind::l1;
    if (text == "focal_l1") return LossKind::focal_l1;
    if (text == "l1_tv") return LossKind::l1_tv;
    fail(ErrorCode::invalid_argument, "unknown loss '" + text + "'");
}

/// sqrt of the summed squared forward differences (replicate boundary, so the
/// last row/column contributes zero).
inline double gradient_l2(const Tensor& t) {
    const Shape& s = t.shape();
    double sum = 0.0;
    for (std::int64_t n = 0; n < s.n; ++n)
        for (std::int64_t c = 0; c < s.c; ++c)
            for (std::int64_t y = 0; y < s.h; ++y)
                for (std::int64_t x = 0; x < s.w; ++x) {
                    const double v = t.at(n, c, y, x);
                    const double dx = (x + 1 < s.w ? t.at(n, c, y, x + 1) : v) - v;
                    const double dy = (y + 1 < s.h ? t.at(n, c, y + 1, x) : v) - v;
                    sum += dx * dx + dy * dy;
                }
    return std::sqrt(sum);
}

/// Loss of `sr` against `gt`, both in the normalized [0, 1] domain.
inline double loss(const Tensor& sr, const Tensor& gt, const LossSpec& spec) {
    if (sr.shape() != gt.shape()) fail(ErrorCode::shape_mismatch, "loss: shapes differ: " + sr.shape().str() + " vs " + gt.shape().str());
    if (spec.lambda < 0.0) fail(ErrorCode::invalid_argument, "loss: lambda must be non-negative");
    const std::size_t total = sr.numel();
    if (total == 0) fail(ErrorCode::shape_mismatch, "loss: empty tensors");
    const auto a = sr.data();
    const auto b = gt.data();
    double l1 = 0.0;
    for (std::size_t i = 0; i < total; ++i) l1 += std::abs(double(a[i]) - double(b[i]));
    l1 /= double(total);

    switch (spec.kind) {
        case LossKind::l1: return l1;
        case LossKind::l1_tv: return l1 + spec.lambda * gradient_l2(sr) / double(total);
        case LossKind::focal_l1: {
            double num = 0.0, den = 0.0;
            if (spec.focal == FocalGranularity::per_pixel) {
                for (std::size_t i = 0; i < total; ++i) {
                    const double d = std::abs(double(a[i]) - double(b[i]));
                    num += d * d;
                    den += d;
                }
            } else {
                const std::size_t per = total / static_cast<std::size_t>(sr.shape().n);
                for (std::int64_t n = 0; n < sr.shape().n; ++n) {
                    double item = 0.0;
                    for (std::size_t i = 0; i < per; ++i) {
                        const std::size_t k = static_cast<std::size_t>(n) * per + i;
                        item += std::abs(double(a[k]) - double(b[k]));
                    }
                    item /= double(per);
                    num += item * item;
                    den += item;
                }
            }
            return den == 0.0 ? 0.0 : num / den;
        }
    }
    fail(ErrorCode::invalid_argument, "loss: unknown kind");
}

}  // namespace srzoo
