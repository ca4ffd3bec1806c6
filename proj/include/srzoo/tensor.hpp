#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "srzoo/error.hpp"

namespace srzoo {

/// Rank-4 extent in (batch, channel, height, width) order.
struct Shape {
    std::int64_t n = 0;
    std::int64_t c = 0;
    std::int64_t h = 0;
    std::int64_t w = 0;

    std::size_t numel() const { return static_cast<std::size_t>(n * c * h * w); }
    bool valid() const { return n >= 0 && c >= 0 && h >= 0 && w >= 0; }

    std::string str() const {
        return std::to_string(n) + "x" + std::to_string(c) + "x" + std::to_string(h) + "x" +
               std::to_string(w);
    }

    friend bool operator==(const Shape&, const Shape&) = default;
};

/// Parses "NxCxHxW".
inline Shape parse_shape(const std::string& text) {
    Shape s;
    std::int64_t* dims[4] = {&s.n, &s.c, &s.h, &s.w};
    std::size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
        std::size_t next = text.find('x', pos);
        if ((i < 3) != (next != std::string::npos)) {
            fail(ErrorCode::parse, "shape '" + text + "' must look like NxCxHxW");
        }
        std::string part = text.substr(pos, i < 3 ? next - pos : std::string::npos);
        try {
            std::size_t used = 0;
            *dims[i] = std::stoll(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            fail(ErrorCode::parse, "shape '" + text + "' has a non-integer dimension");
        }
        if (*dims[i] <= 0) fail(ErrorCode::parse, "shape '" + text + "' has a non-positive dimension");
        pos = next + 1;
    }
    return s;
}

/// Dense float tensor, contiguous and row-major in (n, c, h, w) order.
class Tensor {
public:
    Tensor() = default;

    explicit Tensor(Shape shape, float fill = 0.0f) : shape_(shape) {
        if (!shape.valid()) fail(ErrorCode::shape_mismatch, "negative tensor dimension in " + shape.str());
        data_.assign(shape.numel(), fill);
    }

    Tensor(Shape shape, std::vector<float> data) : shape_(shape), data_(std::move(data)) {
        if (!shape.valid() || data_.size() != shape.numel()) {
            fail(ErrorCode::shape_mismatch, "tensor data length " + std::to_string(data_.size()) +
                                                " does not match shape " + shape.str());
        }
    }

    const Shape& shape() const { return shape_; }
    std::size_t numel() const { return data_.size(); }

    std::span<float> data() { return data_; }
    std::span<const float> data() const { return data_; }
    const std::vector<float>& values() const { return data_; }

    std::size_t index(std::int64_t n, std::int64_t c, std::int64_t y, std::int64_t x) const {
        return static_cast<std::size_t>(((n * shape_.c + c) * shape_.h + y) * shape_.w + x);
    }

    float& at(std::int64_t n, std::int64_t c, std::int64_t y, std::int64_t x) { return data_[index(n, c, y, x)]; }
    float at(std::int64_t n, std::int64_t c, std::int64_t y, std::int64_t x) const {
        return data_[index(n, c, y, x)];
    }

    /// Contiguous (h, w) plane of one channel.
    std::span<float> plane(std::int64_t n, std::int64_t c) {
        return std::span<float>(data_).subspan(index(n, c, 0, 0), static_cast<std::size_t>(shape_.h * shape_.w));
    }
    std::span<const float> plane(std::int64_t n, std::int64_t c) const {
        return std::span<const float>(data_).subspan(index(n, c, 0, 0),
                                                     static_cast<std::size_t>(shape_.h * shape_.w));
    }

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    Shape shape_;
    std::vector<float> data_;
};

inline bool all_finite(const Tensor& t) {
    for (float v : t.data()) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

/// Byte-level equality; distinguishes -0.0 from 0.0 and compares NaN payloads.
inline bool bitwise_equal(const Tensor& a, const Tensor& b) {
    return a.shape() == b.shape() &&
           (a.numel() == 0 || std::memcmp(a.data().data(), b.data().data(), a.numel() * sizeof(float)) == 0);
}

inline float max_abs_diff(const Tensor& a, const Tensor& b) {
    if (a.shape() != b.shape()) {
        fail(ErrorCode::shape_mismatch, "max_abs_diff: " + a.shape().str() + " vs " + b.shape().str());
    }
    float m = 0.0f;
    for (std::size_t i = 0; i < a.numel(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

}  // namespace srzoo
