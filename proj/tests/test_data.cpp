#include <gtest/gtest.h>

#include <png.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>

#include "oracles.hpp"
#include "srzoo/data.hpp"

using namespace srzoo;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    fs::path p = fs::temp_directory_path() / (std::string("srzoo_data_") + info->name());
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_gray_png(const std::string& path, int w, int h) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    ASSERT_NE(f, nullptr);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    png_init_io(png, f);
    png_set_IHDR(png, info, w, h, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<unsigned char> row(static_cast<std::size_t>(w), 77);
    for (int y = 0; y < h; ++y) png_write_row(png, row.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(f);
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorCode::invalid_argument;
}

Tensor ramp(std::int64_t h, std::int64_t w) {
    Tensor t(Shape{1, 3, h, w});
    for (std::int64_t c = 0; c < 3; ++c)
        for (std::int64_t y = 0; y < h; ++y)
            for (std::int64_t x = 0; x < w; ++x) t.at(0, c, y, x) = float(10 + 5 * c + 1.5 * x + 0.75 * y);
    return t;
}

}  // namespace

TEST(Png, RoundTripIsExactOnIntegerPixels) {
    const fs::path dir = scratch_dir();
    const Tensor img = quantize_8bit(synthetic_image(23, 31, 5));
    save_png(img, (dir / "a.png").string());
    const Tensor back = load_png((dir / "a.png").string());
    EXPECT_EQ(back.shape(), (Shape{1, 3, 23, 31}));
    EXPECT_TRUE(bitwise_equal(img, back));
}

TEST(Png, SavingRoundsAndClamps) {
    const fs::path dir = scratch_dir();
    Tensor t(Shape{1, 3, 1, 4});
    const float in[4] = {255.7f, -3.0f, 12.4f, 12.5f};
    for (int c = 0; c < 3; ++c)
        for (int x = 0; x < 4; ++x) t.at(0, c, 0, x) = in[x];
    save_png(t, (dir / "q.png").string());
    const Tensor back = load_png((dir / "q.png").string());
    const float want[4] = {255, 0, 12, 13};
    for (int x = 0; x < 4; ++x) EXPECT_EQ(back.at(0, 1, 0, x), want[x]);
}

TEST(Png, RejectsUnsupportedAndBrokenFiles) {
    const fs::path dir = scratch_dir();
    write_gray_png((dir / "gray.png").string(), 8, 8);
    EXPECT_EQ(code_of([&] { load_png((dir / "gray.png").string()); }), ErrorCode::unsupported_format);

    std::ofstream((dir / "text.png").string()) << "definitely not a png";
    EXPECT_EQ(code_of([&] { load_png((dir / "text.png").string()); }), ErrorCode::parse);

    // valid signature followed by garbage
    {
        std::ofstream bad((dir / "trunc.png").string(), std::ios::binary);
        const unsigned char sig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
        bad.write(reinterpret_cast<const char*>(sig), 8);
        bad << "garbage garbage garbage";
    }
    EXPECT_EQ(code_of([&] { load_png((dir / "trunc.png").string()); }), ErrorCode::parse);
    EXPECT_EQ(code_of([&] { load_png((dir / "missing.png").string()); }), ErrorCode::io);
    EXPECT_EQ(code_of([&] { save_png(Tensor(Shape{1, 1, 4, 4}), (dir / "x.png").string()); }), ErrorCode::shape_mismatch);
}

TEST(Png, ListsOnlyPngFilesSorted) {
    const fs::path dir = scratch_dir();
    for (const char* n : {"b.png", "a.png", "c.txt"}) std::ofstream((dir / n).string()) << "x";
    const auto files = list_pngs(dir);
    ASSERT_EQ(files.size(), 2u);
    EXPECT_EQ(files[0].filename(), "a.png");
    EXPECT_EQ(files[1].filename(), "b.png");
    EXPECT_EQ(code_of([&] { list_pngs(dir / "nope"); }), ErrorCode::io);
}

TEST(Degrade, ConstantImageStaysConstant) {
    const Tensor lr = degrade_bicubic_x4(Tensor(Shape{1, 3, 64, 48}, 128.0f));
    EXPECT_EQ(lr.shape(), (Shape{1, 3, 16, 12}));
    for (float v : lr.data()) EXPECT_NEAR(v, 128.0f, 1e-3f);
}

TEST(Degrade, FourPeriodicPatternAveragesToItsMean) {
    const float tile[4][4] = {{0, 255, 40, 200}, {90, 10, 250, 30}, {120, 60, 0, 255}, {35, 180, 75, 140}};
    double mean = 0;
    for (auto& r : tile)
        for (float v : r) mean += v / 16.0;
    Tensor hr(Shape{1, 3, 64, 64});
    for (std::int64_t c = 0; c < 3; ++c)
        for (std::int64_t y = 0; y < 64; ++y)
            for (std::int64_t x = 0; x < 64; ++x) hr.at(0, c, y, x) = tile[y % 4][x % 4];
    const Tensor lr = degrade_bicubic_x4(hr);
    for (std::int64_t y = 2; y < 14; ++y)
        for (std::int64_t x = 2; x < 14; ++x) EXPECT_NEAR(lr.at(0, 1, y, x), mean, 1e-3) << y << "," << x;
}

TEST(Degrade, MatchesOracleAndReproducesRampsInside) {
    const Tensor hr = synthetic_image(256, 256, 11);
    const Tensor lr = degrade_bicubic_x4(hr);
    EXPECT_EQ(lr.shape(), (Shape{1, 3, 64, 64}));
    EXPECT_LE(max_abs_diff(lr, oracle::bicubic_down(hr, 4)), 1e-3f);

    const Tensor r = degrade_bicubic_x4(ramp(64, 64));
    for (std::int64_t y = 2; y < 14; ++y)
        for (std::int64_t x = 2; x < 14; ++x) {
            const double cy = (y + 0.5) * 4 - 0.5, cx = (x + 0.5) * 4 - 0.5;
            EXPECT_NEAR(r.at(0, 2, y, x), 10 + 10 + 1.5 * cx + 0.75 * cy, 1e-3);
        }
}

TEST(Degrade, RejectsSizesNotDivisibleByFour) {
    EXPECT_EQ(code_of([] { degrade_bicubic_x4(Tensor(Shape{1, 3, 30, 32})); }), ErrorCode::shape_mismatch);
    EXPECT_EQ(code_of([] { degrade_bicubic_x4(Tensor(Shape{1, 3, 32, 33})); }), ErrorCode::shape_mismatch);
}

TEST(Patches, CountSizeAndDeterminism) {
    const ImagePair pair = make_image_pair(synthetic_image(256, 320, 3), "img");
    const auto a = crop_patches(pair, 160, 5, 99);
    ASSERT_EQ(a.size(), 5u);
    for (const ImagePair& p : a) {
        EXPECT_EQ(p.hr.shape(), (Shape{1, 3, 160, 160}));
        EXPECT_EQ(p.lr.shape(), (Shape{1, 3, 40, 40}));
    }
    const auto b = crop_patches(pair, 160, 5, 99);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_TRUE(bitwise_equal(a[i].hr, b[i].hr));
        EXPECT_TRUE(bitwise_equal(a[i].lr, b[i].lr));
    }
}

TEST(Patches, WholeImagePatchIsTheImage) {
    const ImagePair pair = make_image_pair(synthetic_image(64, 64, 8), "img");
    const auto p = crop_patches(pair, 64, 1, 1);
    EXPECT_TRUE(bitwise_equal(p[0].hr, pair.hr));
    EXPECT_TRUE(bitwise_equal(p[0].lr, pair.lr));
}

TEST(Patches, LrPatchIsAlignedWithHrPatch) {
    const ImagePair pair = make_image_pair(synthetic_image(256, 256, 21), "img");
    for (const ImagePair& p : crop_patches(pair, 160, 4, 7)) {
        // away from the patch edge the kernel never sees outside the patch
        const Tensor redo = degrade_bicubic_x4(p.hr);
        for (std::int64_t y = 3; y < 37; ++y)
            for (std::int64_t x = 3; x < 37; ++x) ASSERT_NEAR(redo.at(0, 0, y, x), p.lr.at(0, 0, y, x), 1e-3);
    }
}

TEST(Patches, RejectsBadSizes) {
    const ImagePair pair = make_image_pair(synthetic_image(64, 64, 8), "img");
    EXPECT_EQ(code_of([&] { crop_patches(pair, 66, 1, 1); }), ErrorCode::invalid_argument);
    EXPECT_EQ(code_of([&] { crop_patches(pair, 68, 1, 1); }), ErrorCode::invalid_argument);
    EXPECT_EQ(code_of([&] { crop_patches(pair, 0, 1, 1); }), ErrorCode::invalid_argument);
}

TEST(Augment, DihedralGroupProperties) {
    Tensor t(Shape{1, 1, 2, 3});
    for (int i = 0; i < 6; ++i) t.data()[i] = float(i);
    EXPECT_TRUE(bitwise_equal(augment8(t, 0), t));
    std::set<std::vector<float>> seen;
    for (int k = 0; k < 8; ++k) {
        const Tensor a = augment8(t, k);
        seen.insert(std::vector<float>(a.data().begin(), a.data().end()));
        if (k < 4) EXPECT_TRUE(bitwise_equal(augment8(a, k), t)) << k;  // flips are involutions
    }
    EXPECT_EQ(seen.size(), 8u);
    EXPECT_EQ(augment8(t, 4).shape(), (Shape{1, 1, 3, 2}));
    EXPECT_EQ(augment8(t, 4).at(0, 0, 2, 1), t.at(0, 0, 1, 2));
    EXPECT_EQ(augment8(t, 1).at(0, 0, 0, 0), t.at(0, 0, 1, 0));
    EXPECT_EQ(augment8(t, 2).at(0, 0, 0, 0), t.at(0, 0, 0, 2));
    EXPECT_EQ(code_of([&] { augment8(t, 8); }), ErrorCode::invalid_argument);
    EXPECT_EQ(code_of([&] { augment8(t, -1); }), ErrorCode::invalid_argument);
}

TEST(Augment, PermutesPixelsWithoutLoss) {
    const Tensor img = synthetic_image(9, 13, 4);
    std::multiset<float> ref(img.data().begin(), img.data().end());
    for (int k = 0; k < 8; ++k) {
        const Tensor a = augment8(img, k);
        EXPECT_EQ(std::multiset<float>(a.data().begin(), a.data().end()), ref) << k;
    }
}
