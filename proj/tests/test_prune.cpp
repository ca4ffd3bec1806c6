#include <gtest/gtest.h>

#include "oracles.hpp"
#include "srzoo/executor.hpp"
#include "srzoo/prune.hpp"
#include "srzoo/zoo.hpp"

using namespace srzoo;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::invalid_argument;
}

std::vector<bool> mask(std::int64_t n, std::initializer_list<std::int64_t> drop) {
    std::vector<bool> m(static_cast<std::size_t>(n), true);
    for (std::int64_t d : drop) m[static_cast<std::size_t>(d)] = false;
    return m;
}

}  // namespace

// Zeroing the channels first makes the unpruned network compute exactly what
// the pruned one does, which gives an oracle for the whole transform.
TEST(Prune, ResidualInnerConvMatchesZeroedChannels) {
    const Graph g = build_model(ArchConfig{"msrresnet", {{"blocks", "2"}, {"width", "16"}}});
    WeightStore w = init_weights(g, 5, InitScheme{});
    const std::vector<bool> keep = mask(16, {0, 3, 7, 15});
    const auto [pg, pw] = prune_channels(g, w, "body0.conv1", keep);
    EXPECT_EQ(count_params(g).total - count_params(pg).total, 4 * (16 * 9 + 1) + 4 * 16 * 9);

    for (std::int64_t c : {0, 3, 7, 15}) {
        Tensor& k = w.at("body0.conv1.weight");
        for (std::int64_t i = 0; i < 16; ++i)
            for (std::int64_t y = 0; y < 3; ++y)
                for (std::int64_t x = 0; x < 3; ++x) k.at(c, i, y, x) = 0.0f;
        w.at("body0.conv1.bias").data()[c] = 0.0f;
    }
    const Tensor lr = oracle::random_tensor(Shape{1, 3, 8, 8}, 1, 0.0f, 1.0f);
    EXPECT_LE(max_abs_diff(forward(pg, pw, lr), forward(g, w, lr)), 1e-5f);
}

TEST(Prune, PropagatesThroughDepthwiseConvs) {
    const Graph g = build_model(ArchConfig{"invres", {{"blocks", "1"}, {"width", "8"}, {"t", "2"}}});
    WeightStore w = init_weights(g, 6, InitScheme{});
    const std::vector<bool> keep = mask(16, {1, 2, 9});
    const auto [pg, pw] = prune_channels(g, w, "body0.expand", keep);
    const auto& dw = std::get<ConvLayer>(pg.node("body0.dw").kind).params;
    EXPECT_EQ(dw.in_channels, 13);
    EXPECT_EQ(dw.groups, 13);
    EXPECT_EQ(std::get<ConvLayer>(pg.node("body0.project").kind).params.in_channels, 13);
    EXPECT_NO_THROW(check_store(pg, pw));

    for (std::int64_t c : {1, 2, 9})
        for (std::int64_t i = 0; i < 8; ++i) w.at("body0.expand.weight").at(c, i, 0, 0) = 0.0f;
    const Tensor lr = oracle::random_tensor(Shape{1, 3, 6, 6}, 2, 0.0f, 1.0f);
    EXPECT_LE(max_abs_diff(forward(pg, pw, lr), forward(g, w, lr)), 1e-5f);
}

TEST(Prune, RefusesStructurallyUnprunableChannels) {
    const Graph g = build_model(ArchConfig{"msrresnet", {{"blocks", "2"}, {"width", "16"}}});
    const WeightStore w = init_weights(g, 5, InitScheme{});
    // feeds the residual additions
    EXPECT_EQ(code_of([&] { prune_channels(g, w, "body0.conv2", mask(16, {0})); }), ErrorCode::graph);
    // feeds a pixel shuffle
    EXPECT_EQ(code_of([&] { prune_channels(g, w, "upconv1", mask(64, {0})); }), ErrorCode::graph);
    // reaches the output
    EXPECT_EQ(code_of([&] { prune_channels(g, w, "conv_last", mask(3, {0})); }), ErrorCode::graph);
    // shared weights
    const Graph s = build_model(ArchConfig{"dilaresnet-t1", {{"width", "16"}}});
    const WeightStore sw = init_weights(s, 1, InitScheme{});
    std::string shared_id = s.shared_groups().front().front();
    EXPECT_EQ(code_of([&] { prune_channels(s, sw, shared_id, mask(16, {0})); }), ErrorCode::graph);
}

TEST(Prune, ValidatesMaskAndTarget) {
    const Graph g = build_model(ArchConfig{"msrresnet", {{"blocks", "1"}, {"width", "8"}}});
    const WeightStore w = init_weights(g, 5, InitScheme{});
    EXPECT_EQ(code_of([&] { prune_channels(g, w, "body0.conv1", mask(7, {})); }), ErrorCode::invalid_argument);
    EXPECT_EQ(code_of([&] { prune_channels(g, w, "body0.conv1", std::vector<bool>(8, false)); }),
              ErrorCode::invalid_argument);
    EXPECT_EQ(code_of([&] { prune_channels(g, w, "body0.act", mask(8, {})); }), ErrorCode::invalid_argument);
}

TEST(Prune, KeepingEverythingIsIdentity) {
    const Graph g = build_model(ArchConfig{"msrresnet", {{"blocks", "1"}, {"width", "8"}}});
    const WeightStore w = init_weights(g, 5, InitScheme{});
    const auto [pg, pw] = prune_channels(g, w, "body0.conv1", mask(8, {}));
    EXPECT_TRUE(pg == g);
    EXPECT_TRUE(pw == w);
}
