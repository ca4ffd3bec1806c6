#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <thread>

#include "golden_tables.hpp"
#include "oracles.hpp"
#include "srzoo/loss.hpp"
#include "srzoo/metrics.hpp"
#include "srzoo/report.hpp"
#include "srzoo/timing.hpp"
#include "srzoo/tracks.hpp"

using namespace srzoo;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorCode::invalid_argument;
}

std::string fixture(const std::string& name) { return std::string(SRZOO_TEST_DATA) + "/" + name; }

Tensor noisy(const Tensor& t, double sigma, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, sigma);
    Tensor out = t;
    for (float& v : out.data()) v = static_cast<float>(std::clamp(v + d(rng), 0.0, 255.0));
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// PSNR

TEST(Psnr, GrayAgainstBlackMatchesClosedForm) {
    const PsnrResult r = psnr(Tensor(Shape{1, 3, 32, 32}, 128.0f), Tensor(Shape{1, 3, 32, 32}, 0.0f));
    ASSERT_FALSE(r.infinite);
    EXPECT_NEAR(r.db, oracle::psnr_closed_form(128.0 * 128.0), 1e-9);
    EXPECT_NEAR(r.db, 5.98660, 1e-3);
}

TEST(Psnr, IdenticalImagesAreInfinite) {
    const Tensor a = synthetic_image(24, 24, 1);
    EXPECT_TRUE(psnr(a, a).infinite);
    EXPECT_EQ(psnr(a, a).str(), "inf");
    // differences that vanish after 8-bit rounding also count as identical
    Tensor b = a;
    for (float& v : b.data()) v = std::round(v);
    Tensor c = b;
    for (float& v : c.data()) v += 0.2f;
    EXPECT_TRUE(psnr(b, c).infinite);
}

TEST(Psnr, BorderPixelsAreIgnored) {
    const Tensor gt = quantize_8bit(synthetic_image(16, 16, 2));
    Tensor sr = gt;
    sr.at(0, 0, 8, 8) += sr.at(0, 0, 8, 8) > 128.0f ? -10.0f : 10.0f;
    const PsnrResult base = psnr(sr, gt);
    Tensor corrupted = sr;
    for (std::int64_t c = 0; c < 3; ++c)
        for (std::int64_t y = 0; y < 16; ++y)
            for (std::int64_t x = 0; x < 16; ++x)
                if (y < 4 || y >= 12 || x < 4 || x >= 12) corrupted.at(0, c, y, x) = 255.0f - corrupted.at(0, c, y, x);
    EXPECT_DOUBLE_EQ(psnr(corrupted, gt).db, base.db);
    // one wrong pixel out of 8*8*3 by 10 levels
    EXPECT_NEAR(base.db, oracle::psnr_closed_form(100.0 / 192.0), 1e-9);
    // with no border the corruption counts
    EXPECT_LT(psnr(corrupted, gt, 0).db, base.db);
}

TEST(Psnr, SymmetricAndAugmentationInvariant) {
    const Tensor gt = synthetic_image(20, 28, 3);
    const Tensor sr = noisy(gt, 6.0, 4);
    EXPECT_DOUBLE_EQ(psnr(sr, gt).db, psnr(gt, sr).db);
    const double ref = psnr(sr, gt, 0).db;
    for (int k = 0; k < 8; ++k) EXPECT_NEAR(psnr(augment8(sr, k), augment8(gt, k), 0).db, ref, 1e-9) << k;
}

TEST(Psnr, MoreNoiseLowersTheScore) {
    const Tensor gt = synthetic_image(48, 48, 5);
    double previous = 1e9;
    for (double sigma : {1.0, 3.0, 9.0, 27.0}) {
        const double db = psnr(noisy(gt, sigma, 6), gt).db;
        EXPECT_LT(db, previous) << sigma;
        previous = db;
    }
}

TEST(Psnr, LumaModeUsesBt601Weights) {
    Tensor a(Shape{1, 3, 10, 10}, 0.0f), b(Shape{1, 3, 10, 10}, 0.0f);
    for (std::int64_t y = 0; y < 10; ++y)
        for (std::int64_t x = 0; x < 10; ++x) a.at(0, 1, y, x) = 255.0f;
    // luma difference of a pure green image is 128.553
    EXPECT_NEAR(psnr(a, b, 0, true).db, oracle::psnr_closed_form(128.553 * 128.553), 1e-9);
}

TEST(Psnr, RejectsBadInputs) {
    EXPECT_EQ(code_of([] { psnr(Tensor(Shape{1, 3, 16, 16}), Tensor(Shape{1, 3, 16, 12})); }), ErrorCode::shape_mismatch);
    EXPECT_EQ(code_of([] { psnr(Tensor(Shape{1, 3, 8, 8}), Tensor(Shape{1, 3, 8, 8})); }), ErrorCode::shape_mismatch);
    EXPECT_EQ(code_of([] { psnr(Tensor(Shape{1, 3, 8, 8}), Tensor(Shape{1, 3, 8, 8}), -1); }), ErrorCode::invalid_argument);
}

// ---------------------------------------------------------------------------
// Loss

TEST(Loss, ClosedFormValues) {
    const Tensor gt(Shape{1, 3, 4, 4}, 0.25f);
    EXPECT_DOUBLE_EQ(loss(Tensor(Shape{1, 3, 4, 4}, 0.75f), gt, {LossKind::l1}), 0.5);
    for (LossKind k : {LossKind::l1, LossKind::focal_l1, LossKind::l1_tv}) {
        LossSpec s{k, 0.0};
        EXPECT_EQ(loss(gt, gt, s), 0.0);
    }

    Tensor sr(Shape{2, 1, 2, 2}), target(Shape{2, 1, 2, 2}, 0.0f);
    for (int i = 0; i < 4; ++i) {
        sr.data()[i] = 0.1f;
        sr.data()[4 + i] = 0.3f;
    }
    EXPECT_NEAR(loss(sr, target, {LossKind::focal_l1}), (0.1 * 0.1 + 0.3 * 0.3) / (0.1 + 0.3), 1e-7);
}

TEST(Loss, GradientTermGrowsWithLambda) {
    const Tensor gt(Shape{1, 3, 8, 8}, 0.5f);
    Tensor sr = oracle::random_tensor(Shape{1, 3, 8, 8}, 3, 0.0f, 1.0f);
    const double l1 = loss(sr, gt, {LossKind::l1});
    // sqrt of the summed squared forward differences, written out directly
    double sum = 0;
    for (std::int64_t c = 0; c < 3; ++c)
        for (std::int64_t y = 0; y < 8; ++y)
            for (std::int64_t x = 0; x < 8; ++x) {
                if (x < 7) sum += std::pow(double(sr.at(0, c, y, x + 1)) - sr.at(0, c, y, x), 2);
                if (y < 7) sum += std::pow(double(sr.at(0, c, y + 1, x)) - sr.at(0, c, y, x), 2);
            }
    EXPECT_NEAR(loss(sr, gt, {LossKind::l1_tv, 0.5}), l1 + 0.5 * std::sqrt(sum) / 192.0, 1e-9);
    EXPECT_LT(loss(sr, gt, {LossKind::l1_tv, 0.1}), loss(sr, gt, {LossKind::l1_tv, 1.0}));
    EXPECT_EQ(code_of([&] { loss(sr, gt, {LossKind::l1_tv, -1.0}); }), ErrorCode::invalid_argument);
    EXPECT_EQ(code_of([&] { loss(sr, Tensor(Shape{1, 3, 8, 4}), {}); }), ErrorCode::shape_mismatch);
    EXPECT_EQ(parse_loss_kind("focal_l1"), LossKind::focal_l1);
    EXPECT_EQ(code_of([] { parse_loss_kind("l2"); }), ErrorCode::invalid_argument);
}

// ---------------------------------------------------------------------------
// Timing

TEST(Timing, SleepingMockIsMeasuredBestOfThree) {
    int calls = 0;
    const TimingResult r = time_trials(5, [&](std::size_t) {
        ++calls;
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    });
    ASSERT_EQ(r.trials.size(), 3u);
    EXPECT_EQ(calls, 3 * (5 + 1));
    EXPECT_EQ(r.images, 5u);
    EXPECT_EQ(r.best, *std::min_element(r.trials.begin(), r.trials.end()));
    for (double t : r.trials) {
        EXPECT_GE(t, 0.009);
        EXPECT_LE(t, 0.030);
    }
}

TEST(Timing, RejectsEmptySetsAndConcurrentMeasurements) {
    EXPECT_EQ(code_of([] { time_trials(0, [](std::size_t) {}); }), ErrorCode::invalid_argument);
    EXPECT_EQ(code_of([] { time_trials(1, [](std::size_t) {}, 0); }), ErrorCode::invalid_argument);

    std::atomic<bool> inside{false}, release{false};
    std::thread holder([&] {
        time_trials(1, [&](std::size_t) {
            inside = true;
            while (!release) std::this_thread::sleep_for(std::chrono::milliseconds(1));
        }, 1);
    });
    while (!inside) std::this_thread::sleep_for(std::chrono::milliseconds(1));
    EXPECT_EQ(code_of([] { time_trials(1, [](std::size_t) {}); }), ErrorCode::busy);
    release = true;
    holder.join();
    EXPECT_NO_THROW(time_trials(1, [](std::size_t) {}, 1));
}

// ---------------------------------------------------------------------------
// Tracks

TEST(Tracks, SingleEntryVerdicts) {
    const EntryRecord base = challenge_baseline();
    const Verdict nep = validate_track({"neptuneai", 28.88, 1204227, 0.452}, base, Track::runtime);
    EXPECT_FALSE(nep.ranked);
    ASSERT_EQ(nep.reasons.size(), 1u);
    EXPECT_EQ(nep.reasons[0], "runtime 0.452 > 0.130");
    EXPECT_TRUE(validate_track({"rainbow", 28.78, 893936, 0.055}, base, Track::params).ranked);
    for (Track t : {Track::params, Track::runtime, Track::fidelity}) {
        const Verdict v = validate_track(base, base, t);
        EXPECT_TRUE(v.ranked);
        EXPECT_TRUE(v.reasons.empty());
    }
}

TEST(Tracks, EveryViolationIsListed) {
    const EntryRecord base = challenge_baseline();
    const Verdict v = validate_track({"bad", 28.50, 2000000, 0.5}, base, Track::params);
    EXPECT_FALSE(v.ranked);
    ASSERT_EQ(v.reasons.size(), 3u);
    EXPECT_EQ(v.reasons[0], "psnr 28.50 < 28.69");
    EXPECT_EQ(v.reasons[1], "params 2000000 > 1517571");
    EXPECT_EQ(v.reasons[2], "runtime 0.500 > 0.143");
}

TEST(Tracks, ObjectiveHasNoSlackButConstraintsDo) {
    const EntryRecord base = challenge_baseline();
    // PSNR 0.01 dB below the baseline: tolerated off track 3, not on it
    const EntryRecord close_psnr{"a", 28.69, 1000000, 0.1};
    EXPECT_TRUE(validate_track(close_psnr, base, Track::params).ranked);
    EXPECT_FALSE(validate_track(close_psnr, base, Track::fidelity).ranked);
    EXPECT_FALSE(validate_track(close_psnr, base, Track::params, TrackRule::strict()).ranked);
    // runtime 10% over: tolerated off track 2
    const EntryRecord slow{"b", 28.80, 1000000, 0.143};
    EXPECT_TRUE(validate_track(slow, base, Track::fidelity).ranked);
    EXPECT_FALSE(validate_track(slow, base, Track::runtime).ranked);
    EXPECT_FALSE(validate_track({"c", 28.80, 1000000, 0.144}, base, Track::fidelity).ranked);
    // params never get slack
    EXPECT_FALSE(validate_track({"d", 28.80, 1517572, 0.1}, base, Track::runtime).ranked);
    EXPECT_EQ(code_of([] { track_from_int(4); }), ErrorCode::invalid_argument);
    EXPECT_EQ(code_of([] { track_from_int(0); }), ErrorCode::invalid_argument);
}

TEST(Tracks, ShippedResultsRankAsPublished) {
    for (const golden::TableOutcome& t : golden::tables()) {
        const auto ranking = rank_entries(load_entries(fixture(t.file)), track_from_int(t.track));
        ASSERT_EQ(ranking.size(), t.ranked.size() + t.unranked.size()) << t.file;
        for (std::size_t i = 0; i < t.ranked.size(); ++i) {
            EXPECT_EQ(ranking[i].entry.team, t.ranked[i]) << t.file << " position " << i;
            EXPECT_TRUE(ranking[i].verdict.ranked);
            EXPECT_EQ(ranking[i].rank, static_cast<int>(i + 1));
        }
        for (std::size_t i = 0; i < t.unranked.size(); ++i) {
            const RankedEntry& r = ranking[t.ranked.size() + i];
            EXPECT_EQ(r.entry.team, t.unranked[i]) << t.file;
            EXPECT_FALSE(r.verdict.ranked);
            EXPECT_EQ(r.rank, 0);
            EXPECT_FALSE(r.verdict.reasons.empty());
        }
    }
}

TEST(Tracks, NeptuneIsUnrankedForRuntimeInTrackTwo) {
    const auto ranking = rank_entries(load_entries(fixture("track2_results.json")), Track::runtime);
    const auto it = std::find_if(ranking.begin(), ranking.end(), [](const RankedEntry& r) { return r.entry.team == "neptuneai"; });
    ASSERT_NE(it, ranking.end());
    EXPECT_EQ(it->verdict.reasons, std::vector<std::string>{"runtime 0.452 > 0.130"});
}

TEST(Tracks, TiesFallBackToParamsThenRuntimeThenTeam) {
    const EntryRecord a{"zeta", 28.78, 900000, 0.1}, b{"alpha", 28.78, 1000000, 0.1};
    EXPECT_TRUE(rank_before(a, b, Track::fidelity));
    const EntryRecord c{"beta", 28.78, 900000, 0.1};
    EXPECT_TRUE(rank_before(c, a, Track::fidelity));
    const EntryRecord d{"gamma", 28.78, 900000, 0.09};
    EXPECT_TRUE(rank_before(d, c, Track::fidelity));
}

TEST(Tracks, BaselineRowIsRequiredAndUnique) {
    const EntryRecord e{"x", 28.9, 10, 0.1};
    EXPECT_EQ(code_of([&] { rank_entries({e}, Track::params); }), ErrorCode::invalid_argument);
    EntryRecord b1 = challenge_baseline(), b2 = challenge_baseline();
    EXPECT_EQ(code_of([&] { rank_entries({b1, b2}, Track::params); }), ErrorCode::invalid_argument);
    const auto alone = rank_entries({b1}, Track::runtime);
    ASSERT_EQ(alone.size(), 1u);
    EXPECT_EQ(alone[0].rank, 1);
    EXPECT_EQ(code_of([&] { rank_entries({b1, EntryRecord{"z", 29, 0, 0.1}}, Track::params); }), ErrorCode::invalid_argument);
}

// ---------------------------------------------------------------------------
// Reports

TEST(Report, BenchReportCarriesTimingPsnrAndVerdicts) {
    BenchReport r;
    r.model = "m";
    r.inspect = json::object();
    r.timing.trials = {0.20, 0.15, 0.18};
    r.timing.best = 0.15;
    r.timing.images = 4;
    r.psnr = PsnrResult{false, 28.9};
    r.verdicts = bench_verdicts("m", 1000, 0.14, *r.psnr, challenge_baseline());
    const json j = r.to_json();
    EXPECT_EQ(j.at("trials").size(), 3u);
    EXPECT_DOUBLE_EQ(j.at("best_avg_runtime_s").get<double>(), 0.15);
    EXPECT_DOUBLE_EQ(j.at("psnr").get<double>(), 28.9);
    ASSERT_EQ(j.at("track_verdicts").size(), 3u);
    EXPECT_FALSE(j["track_verdicts"][1]["ranked"].get<bool>());  // 0.14 s is slower than the baseline
    EXPECT_TRUE(j["track_verdicts"][0]["ranked"].get<bool>());   // within the 10% runtime slack
    EXPECT_TRUE(j.contains("environment"));
}

TEST(Report, EntriesRoundTripAndBadFilesFail) {
    const EntryRecord e{"t", 28.5, 123, 0.25, true};
    const EntryRecord back = entry_from_json(entry_to_json(e));
    EXPECT_EQ(back.team, e.team);
    EXPECT_EQ(back.params, e.params);
    EXPECT_TRUE(back.baseline);
    EXPECT_EQ(code_of([] { entry_from_json(json{{"team", "x"}}); }), ErrorCode::parse);
    EXPECT_EQ(code_of([] { load_entries("/nonexistent/entries.json"); }), ErrorCode::io);
    const auto p = std::filesystem::temp_directory_path() / "srzoo_bad_entries.json";
    std::ofstream(p) << "{\"not\": \"a list\"}";
    EXPECT_EQ(code_of([&] { load_entries(p.string()); }), ErrorCode::parse);
}
