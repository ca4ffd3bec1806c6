// Acceptance runner: one [PASS]/[FAIL] line per criterion, exit status 1 if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "cli_runner.hpp"
#include "conv_cases.hpp"
#include "golden_tables.hpp"
#include "oracles.hpp"
#include "srzoo/srzoo.hpp"

using namespace srzoo;
namespace fs = std::filesystem;

namespace tol {
constexpr std::int64_t baseline_params = 1517571;
constexpr double param_share_pp = 0.01;
constexpr double mac_share_pp = 0.02;
constexpr double conv_abs = 1e-5;
constexpr double psnr_db = 1e-3;
constexpr double sleep_ms = 10.0;
constexpr double sleep_lo = 1.0;  // multiples of the injected sleep
constexpr double sleep_hi = 3.0;
constexpr std::int64_t space_size = 4 * 2 * 2 * 21 * 17 * 17;
constexpr float quant_levels = 1.0f;
constexpr double seconds_param = 1.0;
constexpr double seconds_mac = 1.0;
constexpr double seconds_conv = 30.0;
constexpr double seconds_pipeline = 60.0;
}  // namespace tol

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

Outcome ac1_param_anchor() {
    Outcome o;
    const auto t0 = Clock::now();
    const Breakdown p = count_params(build_model("msrresnet"));
    const double secs = seconds_since(t0);
    o.require(p.total == tol::baseline_params, "total " + std::to_string(p.total));
    o.require(std::abs(p.percent("ResBlk") - 77.87) <= tol::param_share_pp, "ResBlk " + num(p.percent("ResBlk"), 4));
    o.require(std::abs(p.percent("UpsBlk") - 19.47) <= tol::param_share_pp, "UpsBlk " + num(p.percent("UpsBlk"), 4));
    o.require(secs < tol::seconds_param, "took " + num(secs, 3) + " s");
    if (o.pass) {
        o.detail = std::to_string(p.total) + " params, ResBlk " + num(p.percent("ResBlk")) + "%, UpsBlk " +
                   num(p.percent("UpsBlk")) + "%";
    }
    return o;
}

Outcome ac2_mac_anchor() {
    Outcome o;
    const auto t0 = Clock::now();
    const Graph g = build_model("msrresnet");
    const char* tags[4] = {"SfeBlk", "ResBlk", "UpsBlk", "RecBlk"};
    const double want[4] = {0.07, 46.51, 29.07, 24.35};
    double worst = 0;
    for (const Shape& in : {Shape{1, 3, 32, 32}, Shape{1, 3, 100, 100}, Shape{1, 3, 17, 45}, Shape{2, 3, 256, 192}}) {
        const Breakdown m = count_macs(g, in);
        for (int i = 0; i < 4; ++i) {
            const double d = std::abs(m.percent(tags[i]) - want[i]);
            worst = std::max(worst, d);
            o.require(d <= tol::mac_share_pp, in.str() + " " + tags[i] + " " + num(m.percent(tags[i]), 4));
        }
    }
    const double secs = seconds_since(t0);
    o.require(secs < tol::seconds_mac, "took " + num(secs, 3) + " s");
    if (o.pass) o.detail = "4 input sizes, worst share deviation " + num(worst, 4) + " pp";
    return o;
}

Outcome ac3_zoo_coverage() {
    Outcome o;
    const Tensor lr = oracle::random_tensor(Shape{1, 3, 16, 16}, 3, 0.0f, 1.0f);
    std::string deltas;
    for (const ModelInfo& m : model_registry()) {
        try {
            const Graph g = build_model(m.id);
            (void)infer_shapes(g, lr.shape());
            const Tensor sr = forward(g, init_weights(g, 1, InitScheme{}), lr);
            o.require(sr.shape() == Shape{1, 3, 64, 64}, m.id + " output " + sr.shape().str());
            o.require(all_finite(sr), m.id + " non-finite output");
            const double delta = reported_delta_pct(m, count_params(g).total);
            o.require(std::abs(delta) <= m.tolerance_pct, m.id + " delta " + num(delta) + "%");
            deltas += (deltas.empty() ? "" : " ") + m.id + ":" + (delta >= 0 ? "+" : "") + num(delta) + "%";
        } catch (const std::exception& e) {
            o.require(false, m.id + ": " + e.what());
        }
    }
    if (o.pass) o.detail = std::to_string(model_registry().size()) + " ids; " + deltas;
    return o;
}

Outcome ac4_oracle_equivalence() {
    Outcome o;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2019);
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
        const conv_cases::Case c = conv_cases::random_case(rng);
        const ConvParams p = conv_cases::params_of(c);
        const Tensor in = oracle::random_tensor(Shape{c.n, c.cin, c.h, c.w}, rng());
        const Tensor w = oracle::random_tensor(p.weight_shape(), rng());
        const Tensor b = oracle::random_tensor(p.bias_shape(), rng());
        const Tensor* bp = c.bias ? &b : nullptr;
        const Tensor got = conv2d(in, p, w, bp);
        const Tensor want =
            oracle::conv2d(in, w, bp, c.stride, c.pad, c.dilation, c.groups, c.mode == PadMode::reflect);
        if (got.shape() != want.shape()) {
            o.require(false, "case " + std::to_string(i) + " shape");
            continue;
        }
        const double d = max_abs_diff(got, want);
        worst = std::max(worst, d);
        o.require(d <= tol::conv_abs, "case " + std::to_string(i) + " diff " + std::to_string(d));
    }
    for (std::int64_t r : {2, 3, 4}) {
        const Tensor x = oracle::random_tensor(Shape{2, 3 * r * r, 5, 7}, static_cast<std::uint64_t>(r));
        o.require(bitwise_equal(pixel_unshuffle(pixel_shuffle(x, r), r), x), "pixel shuffle round trip r=" + std::to_string(r));
    }
    const double secs = seconds_since(t0);
    o.require(secs < tol::seconds_conv, "took " + num(secs, 1) + " s");
    if (o.pass) o.detail = "200 cases, worst diff " + sci(worst) + ", shuffle round trip exact";
    return o;
}

Outcome ac5_protocol_golden() {
    Outcome o;
    for (const golden::TableOutcome& t : golden::tables()) {
        const auto ranking = rank_entries(load_entries(std::string(SRZOO_TEST_DATA) + "/" + t.file), track_from_int(t.track));
        std::vector<std::string> got_ranked, got_unranked;
        for (const RankedEntry& r : ranking) (r.verdict.ranked ? got_ranked : got_unranked).push_back(r.entry.team);
        o.require(got_ranked == t.ranked, std::string(t.file) + " ranked order");
        o.require(got_unranked == t.unranked, std::string(t.file) + " unranked rows");
        if (t.track == 2) {
            bool nep = false;
            for (const RankedEntry& r : ranking)
                if (r.entry.team == "neptuneai")
                    nep = !r.verdict.ranked && r.verdict.reasons == std::vector<std::string>{"runtime 0.452 > 0.130"};
            o.require(nep, "neptuneai reason");
        }
    }
    if (o.pass) o.detail = "3 tables, neptuneai unranked: runtime 0.452 > 0.130";
    return o;
}

Outcome ac6_psnr() {
    Outcome o;
    const double closed = oracle::psnr_closed_form(128.0 * 128.0);
    const PsnrResult r = psnr(Tensor(Shape{1, 3, 32, 32}, 128.0f), Tensor(Shape{1, 3, 32, 32}, 0.0f));
    o.require(!r.infinite && std::abs(r.db - closed) <= tol::psnr_db, "gray vs black " + num(r.db, 5));
    const Tensor img = synthetic_image(16, 16, 1);
    o.require(psnr(img, img).infinite, "identical images not infinite");
    Tensor sr = quantize_8bit(img), gt = quantize_8bit(img);
    sr.at(0, 1, 6, 9) = sr.at(0, 1, 6, 9) > 100 ? 0.0f : 255.0f;
    const double inner = psnr(sr, gt).db;
    for (std::int64_t y = 0; y < 16; ++y)
        for (std::int64_t x = 0; x < 16; ++x)
            if (y < 4 || y >= 12 || x < 4 || x >= 12) sr.at(0, 0, y, x) = 255.0f - sr.at(0, 0, y, x);
    o.require(psnr(sr, gt).db == inner, "border corruption changed the score");
    if (o.pass) {
        o.detail = "gray-128 vs black " + num(r.db, 5) + " dB (closed form " + num(closed, 5) +
                   "), identical -> inf, border ignored";
    }
    return o;
}

Outcome ac7_timing() {
    Outcome o;
    const TimingResult r = time_trials(5, [](std::size_t) {
        std::this_thread::sleep_for(std::chrono::microseconds(static_cast<long>(tol::sleep_ms * 1000)));
    });
    o.require(r.trials.size() == 3, std::to_string(r.trials.size()) + " trials");
    o.require(!r.trials.empty() && r.best == *std::min_element(r.trials.begin(), r.trials.end()), "best != min");
    const double ms = r.best * 1000.0;
    o.require(ms >= tol::sleep_lo * tol::sleep_ms && ms <= tol::sleep_hi * tol::sleep_ms, "best " + num(ms) + " ms");
    if (o.pass) o.detail = "3 trials, best " + num(ms) + " ms for a " + num(tol::sleep_ms, 0) + " ms sleep";
    return o;
}

Outcome ac8_search_space() {
    Outcome o;
    const auto all = all_krahaon_configs();
    // independent count through the membership predicate only
    std::int64_t triples = 0, nx = 0, ny = 0, nz = 0;
    for (std::int64_t x = 1; x <= 128; ++x)
        for (std::int64_t y = 1; y <= x; ++y)
            for (std::int64_t z = 1; z <= y; ++z) triples += in_search_space(SearchConfig{x, y, z, 10, 0, 0});
    for (std::int64_t n = -5; n <= 40; ++n) {
        nx += in_search_space(SearchConfig{64, 16, 4, n, 0, 0});
        ny += in_search_space(SearchConfig{64, 16, 4, 10, n, 0});
        nz += in_search_space(SearchConfig{64, 16, 4, 10, 0, n});
    }
    o.require(static_cast<std::int64_t>(all.size()) == tol::space_size, "enumerated " + std::to_string(all.size()));
    o.require(triples * nx * ny * nz == tol::space_size, "predicate count " + std::to_string(triples * nx * ny * nz));
    o.require(std::find(all.begin(), all.end(), SearchConfig{64, 16, 4, 19, 12, 3}) != all.end(), "winner missing");
    if (o.pass) o.detail = std::to_string(all.size()) + " configs, contains (64,16,4,19,12,3)";
    return o;
}

Outcome ac9_behavioral_identity() {
    Outcome o;
    const Graph g = build_model("msrresnet");
    const WeightStore w = init_weights(g, 0, InitScheme::parse("constant(0)"));
    const Tensor lr = quantize_8bit(synthetic_image(20, 28, 9));
    const Tensor sr = quantize_8bit(mul(forward(g, w, mul(lr, 1.0f / 255.0f)), 255.0f));
    const Tensor want = quantize_8bit(oracle::bilinear_up(lr, 4));
    const float d = max_abs_diff(sr, want);
    o.require(d <= tol::quant_levels, "max diff " + num(d) + " levels");
    if (o.pass) o.detail = "max diff " + num(d, 0) + " level(s) against bilinear x4";
    return o;
}

bool has_keys(const nlohmann::json& j, std::initializer_list<const char*> keys, std::string* missing) {
    for (const char* k : keys)
        if (!j.contains(k)) {
            *missing = k;
            return false;
        }
    return true;
}

Outcome ac10_pipeline() {
    using nlohmann::json;
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / "srzoo_acceptance_pipeline";
    fs::remove_all(dir);
    fs::create_directories(dir / "hr");
    for (int i = 0; i < 3; ++i) save_png(synthetic_image(64, 64, 40 + i), (dir / "hr" / ("s" + std::to_string(i) + ".png")).string());
    auto q = [&](const char* sub) { return cli::quote((dir / sub).string()); };
    const auto t0 = Clock::now();
    std::string missing;
    auto step = [&](const std::string& name, const std::string& args) -> json {
        const cli::Result r = cli::run("--json " + args);
        if (r.exit != 0) {
            o.require(false, name + " exit " + std::to_string(r.exit) + ": " + r.err);
            return json();
        }
        try {
            return json::parse(r.out);
        } catch (const json::exception&) {
            o.require(false, name + " printed invalid JSON");
            return json();
        }
    };

    const json manifest = step("degrade", "degrade " + q("hr") + " " + q("lr"));
    o.require(has_keys(manifest, {"hr_dir", "lr_dir", "degradation", "pairs", "skipped"}, &missing), "manifest lacks " + missing);
    o.require(manifest.value("pairs", json::array()).size() == 3, "manifest pair count");
    fs::remove(dir / "lr" / "manifest.json");

    const json init = step("init-weights", "--seed 1 init-weights msrresnet -o " + q("w.srbw"));
    o.require(has_keys(init, {"model", "weights", "seed", "scheme", "fingerprint", "values"}, &missing), "init lacks " + missing);

    const json inf = step("infer", "infer msrresnet -w " + q("w.srbw") + " --lr-dir " + q("lr") + " --out-dir " + q("sr"));
    o.require(has_keys(inf, {"model", "weights", "outputs"}, &missing), "infer lacks " + missing);
    for (const json& out : inf.value("outputs", json::array()))
        o.require(out.value("sr_size", json()) == json::array({64, 64}), "SR size");

    const json bench = step("bench", "bench msrresnet -w " + q("w.srbw") + " --lr-dir " + q("lr") + " --hr-dir " + q("hr"));
    o.require(has_keys(bench, {"model", "params", "macs", "receptive_field", "trials", "best_avg_runtime_s", "images", "psnr",
                               "track_verdicts", "environment"},
                       &missing),
              "bench lacks " + missing);
    o.require(bench.value("trials", json::array()).size() == 3, "bench trials");

    if (bench.is_object() && bench.contains("psnr") && bench["psnr"].is_number()) {
        const json entries = json::array(
            {entry_to_json(challenge_baseline()),
             entry_to_json(EntryRecord{"pipeline", bench["psnr"].get<double>(), bench["params"]["total"].get<std::int64_t>(),
                                       bench["best_avg_runtime_s"].get<double>(), false})});
        std::ofstream(dir / "entries.json") << entries.dump(2);
        const json val = step("validate", "validate " + q("entries.json"));
        o.require(has_keys(val, {"entries_file", "rule", "rankings"}, &missing), "validate lacks " + missing);
        o.require(val.value("rankings", json::array()).size() == 3, "validate track count");
    } else {
        o.require(false, "bench psnr is not a number");
    }
    const double secs = seconds_since(t0);
    o.require(secs < tol::seconds_pipeline, "took " + num(secs, 1) + " s");
    if (o.pass) o.detail = "degrade, init-weights, infer, bench, validate on 3 images in " + num(secs, 1) + " s";
    fs::remove_all(dir);
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"AC1 parameter anchor", ac1_param_anchor},
        {"AC2 MAC anchor", ac2_mac_anchor},
        {"AC3 zoo coverage", ac3_zoo_coverage},
        {"AC4 conv oracle equivalence", ac4_oracle_equivalence},
        {"AC5 track golden tables", ac5_protocol_golden},
        {"AC6 PSNR correctness", ac6_psnr},
        {"AC7 timing harness", ac7_timing},
        {"AC8 search space", ac8_search_space},
        {"AC9 zero-weight identity", ac9_behavioral_identity},
        {"AC10 end-to-end pipeline", ac10_pipeline},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += !o.pass;
        std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
