#pragma once

#include <png.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "srzoo/resize.hpp"
#include "srzoo/tensor.hpp"

namespace srzoo {

// ---------------------------------------------------------------------------
// PNG I/O (8-bit RGB only). Pixel values live in [0, 255].

namespace detail {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline void png_error_handler(png_structp png, png_const_charp msg) {
    auto* text = static_cast<std::string*>(png_get_error_ptr(png));
    if (text) *text = msg;
    png_longjmp(png, 1);
}

inline void png_warning_handler(png_structp, png_const_charp) {}

inline std::uint8_t quantize(float v) {
    if (!(v > 0.0f)) return 0;  // also maps NaN to 0
    if (v >= 255.0f) return 255;
    return static_cast<std::uint8_t>(std::lround(v));
}


// libpng reports errors through longjmp, so the functions holding setjmp keep
// all C++ state in a caller-owned struct and only hold raw pointers locally.
struct PngImage {
    std::vector<unsigned char> pixels;
    std::vector<png_bytep> rows;
    png_uint_32 width = 0;
    png_uint_32 height = 0;
    int bit_depth = 0;
    int color_type = 0;
    std::string message;
};

inline bool png_read_raw(std::FILE* file, PngImage* img) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &img->message, png_error_handler,
                                             png_warning_handler);
    if (!png) return false;
    png_infop info = png_create_info_struct(png);
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        return false;
    }
    png_init_io(png, file);
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);
    png_get_IHDR(png, info, &img->width, &img->height, &img->bit_depth, &img->color_type, nullptr, nullptr, nullptr);
    if (img->bit_depth == 8 && img->color_type == PNG_COLOR_TYPE_RGB) {
        const png_size_t rowbytes = png_get_rowbytes(png, info);
        img->pixels.resize(rowbytes * img->height);
        img->rows.resize(img->height);
        for (png_uint_32 y = 0; y < img->height; ++y) img->rows[y] = img->pixels.data() + y * rowbytes;
        png_read_image(png, img->rows.data());
        png_read_end(png, nullptr);
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return true;
}

inline bool png_write_raw(std::FILE* file, PngImage* img) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &img->message, png_error_handler,
                                              png_warning_handler);
    if (!png) return false;
    png_infop info = png_create_info_struct(png);
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        return false;
    }
    png_init_io(png, file);
    png_set_IHDR(png, info, img->width, img->height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, img->rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}

}  // namespace detail

/// Reads an 8-bit RGB PNG into a (1, 3, H, W) tensor.
inline Tensor load_png(const std::string& path) {
    detail::FilePtr file(std::fopen(path.c_str(), "rb"));
    if (!file) fail(ErrorCode::io, "cannot open '" + path + "'");
    unsigned char sig[8];
    if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
        fail(ErrorCode::parse, "'" + path + "' is not a PNG file");
    }
    detail::PngImage img;
    if (!detail::png_read_raw(file.get(), &img)) fail(ErrorCode::parse, "corrupt PNG '" + path + "': " + img.message);
    if (img.bit_depth != 8 || img.color_type != PNG_COLOR_TYPE_RGB) {
        fail(ErrorCode::unsupported_format, "'" + path + "': only 8-bit RGB PNG is supported (bit depth " +
                                                std::to_string(img.bit_depth) + ", color type " +
                                                std::to_string(img.color_type) + ")");
    }
    const std::int64_t h = img.height, w = img.width;
    Tensor t(Shape{1, 3, h, w});
    for (std::int64_t y = 0; y < h; ++y)
        for (std::int64_t x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c) t.at(0, c, y, x) = img.pixels[static_cast<std::size_t>((y * w + x) * 3 + c)];
    return t;
}

/// Writes a (1, 3, H, W) tensor as an 8-bit RGB PNG; values are rounded and
/// clamped to [0, 255]. Output bytes depend only on the pixel values.
inline void save_png(const Tensor& t, const std::string& path) {
    const Shape& s = t.shape();
    if (s.n != 1 || s.c != 3 || s.h < 1 || s.w < 1) fail(ErrorCode::shape_mismatch, "save_png expects 1x3xHxW, got " + s.str());
    detail::PngImage img;
    img.width = static_cast<png_uint_32>(s.w);
    img.height = static_cast<png_uint_32>(s.h);
    img.pixels.resize(static_cast<std::size_t>(s.h * s.w * 3));
    for (std::int64_t y = 0; y < s.h; ++y)
        for (std::int64_t x = 0; x < s.w; ++x)
            for (int c = 0; c < 3; ++c) img.pixels[static_cast<std::size_t>((y * s.w + x) * 3 + c)] = detail::quantize(t.at(0, c, y, x));
    for (std::int64_t y = 0; y < s.h; ++y) img.rows.push_back(img.pixels.data() + y * s.w * 3);

    detail::FilePtr file(std::fopen(path.c_str(), "wb"));
    if (!file) fail(ErrorCode::io, "cannot write '" + path + "'");
    if (!detail::png_write_raw(file.get(), &img)) fail(ErrorCode::io, "failed writing PNG '" + path + "': " + img.message);
}

/// Rounds and clamps every value to the 8-bit grid, as a save/load would.
inline Tensor quantize_8bit(const Tensor& t) {
    Tensor out = t;
    for (float& v : out.data()) v = detail::quantize(v);
    return out;
}

// ---------------------------------------------------------------------------
// Degradation, patches, augmentation

/// Bicubic x1/4 with antialiasing, clamped to [0, 255].
inline Tensor degrade_bicubic_x4(const Tensor& hr) {
    const Shape& s = hr.shape();
    if (s.h % 4 != 0 || s.w % 4 != 0 || s.h < 4 || s.w < 4) {
        fail(ErrorCode::shape_mismatch, "degrade: HR size " + std::to_string(s.h) + "x" + std::to_string(s.w) +
                                            " is not divisible by 4");
    }
    ResizeOptions opt;
    opt.mode = ResizeMode::bicubic;
    opt.antialias = true;
    Tensor lr = resize(hr, Scale{1, 4}, opt);
    for (float& v : lr.data()) v = std::clamp(v, 0.0f, 255.0f);
    return lr;
}

struct ImagePair {
    Tensor hr;
    Tensor lr;
    std::string id;
};

inline ImagePair make_image_pair(const Tensor& hr, std::string id) { return {hr, degrade_bicubic_x4(hr), std::move(id)}; }

inline Tensor crop(const Tensor& t, std::int64_t y0, std::int64_t x0, std::int64_t h, std::int64_t w) {
    const Shape& s = t.shape();
    if (y0 < 0 || x0 < 0 || h < 1 || w < 1 || y0 + h > s.h || x0 + w > s.w) {
        fail(ErrorCode::shape_mismatch, "crop window outside " + s.str());
    }
    Tensor out(Shape{s.n, s.c, h, w});
    for (std::int64_t n = 0; n < s.n; ++n)
        for (std::int64_t c = 0; c < s.c; ++c)
            for (std::int64_t y = 0; y < h; ++y)
                for (std::int64_t x = 0; x < w; ++x) out.at(n, c, y, x) = t.at(n, c, y0 + y, x0 + x);
    return out;
}

/// Random aligned (HR, LR) patch pairs; HR offsets are multiples of 4 and the
/// LR patch is cut from the pair's LR image at offset / 4.
inline std::vector<ImagePair> crop_patches(const ImagePair& pair, std::int64_t hr_patch, std::int64_t count,
                                           std::uint64_t seed) {
    const Shape& s = pair.hr.shape();
    if (hr_patch < 4 || hr_patch % 4 != 0) fail(ErrorCode::invalid_argument, "crop: patch size must be a positive multiple of 4");
    if (hr_patch > s.h || hr_patch > s.w) {
        fail(ErrorCode::invalid_argument, "crop: patch " + std::to_string(hr_patch) + " larger than image " +
                                              std::to_string(s.h) + "x" + std::to_string(s.w));
    }
    if (pair.lr.shape().h * 4 != s.h || pair.lr.shape().w * 4 != s.w) {
        fail(ErrorCode::shape_mismatch, "crop: LR image is not HR / 4");
    }
    std::mt19937_64 rng(seed);
    const std::int64_t slots_y = (s.h - hr_patch) / 4 + 1;
    const std::int64_t slots_x = (s.w - hr_patch) / 4 + 1;
    const std::int64_t lp = hr_patch / 4;
    std::vector<ImagePair> out;
    for (std::int64_t i = 0; i < count; ++i) {
        const auto ly = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(slots_y));
        const auto lx = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(slots_x));
        out.push_back({crop(pair.hr, ly * 4, lx * 4, hr_patch, hr_patch), crop(pair.lr, ly, lx, lp, lp),
                       pair.id + "_p" + std::to_string(i)});
    }
    return out;
}

/// Dihedral transform selected by `index` in 0..7: bit 0 flips vertically,
/// bit 1 flips horizontally, bit 2 transposes (applied after the flips).
inline Tensor augment8(const Tensor& t, int index) {
    if (index < 0 || index > 7) fail(ErrorCode::invalid_argument, "augment8: index must lie in 0..7");
    const bool flip_v = index & 1, flip_h = index & 2, transpose = index & 4;
    const Shape& s = t.shape();
    const Shape o = transpose ? Shape{s.n, s.c, s.w, s.h} : s;
    Tensor out(o);
    for (std::int64_t n = 0; n < s.n; ++n)
        for (std::int64_t c = 0; c < s.c; ++c)
            for (std::int64_t y = 0; y < s.h; ++y)
                for (std::int64_t x = 0; x < s.w; ++x) {
                    const std::int64_t sy = flip_v ? s.h - 1 - y : y;
                    const std::int64_t sx = flip_h ? s.w - 1 - x : x;
                    if (transpose) {
                        out.at(n, c, x, y) = t.at(n, c, sy, sx);
                    } else {
                        out.at(n, c, y, x) = t.at(n, c, sy, sx);
                    }
                }
    return out;
}

/// Smooth random test image: a few coloured gradients and blobs, values in
/// [0, 255]; deterministic in `seed`.
inline Tensor synthetic_image(std::int64_t h, std::int64_t w, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto unit = [&] { return double(rng() >> 11) * 0x1.0p-53; };
    Tensor t(Shape{1, 3, h, w});
    for (int c = 0; c < 3; ++c) {
        const double gx = unit() * 2 - 1, gy = unit() * 2 - 1, base = 60 + 120 * unit();
        const double fx = 1 + 5 * unit(), fy = 1 + 5 * unit(), amp = 20 + 40 * unit();
        for (std::int64_t y = 0; y < h; ++y)
            for (std::int64_t x = 0; x < w; ++x) {
                const double u = double(x) / double(w), v = double(y) / double(h);
                const double val = base + 50 * (gx * u + gy * v) + amp * std::sin(6.2831853 * fx * u) * std::cos(6.2831853 * fy * v);
                t.at(0, c, y, x) = static_cast<float>(std::clamp(val, 0.0, 255.0));
            }
    }
    return t;
}

// ---------------------------------------------------------------------------
// Dataset directories

/// Sorted list of *.png files in `dir`.
inline std::vector<std::filesystem::path> list_pngs(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) fail(ErrorCode::io, "not a directory: '" + dir.string() + "'");
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".png") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace srzoo
