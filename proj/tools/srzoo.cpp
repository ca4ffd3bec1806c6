// srzoo: command-line front end for the model zoo, data pipeline and
// evaluation protocol.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error or unknown model.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "srzoo/srzoo.hpp"

namespace fs = std::filesystem;
using srzoo::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    bool json_out = false;
    std::string config_file;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string report;  // optional copy of the JSON output
};

struct ModelArgs {
    std::string model;
    std::vector<std::string> set;
    std::vector<std::string> set_from_file;
    std::string graph_file;
};

std::string with_commas(std::int64_t v) {
    std::string s = std::to_string(v < 0 ? -v : v);
    for (int i = static_cast<int>(s.size()) - 3; i > 0; i -= 3) s.insert(static_cast<std::size_t>(i), ",");
    return (v < 0 ? "-" : "") + s;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string known_models() {
    std::string out;
    for (const srzoo::ModelInfo& m : srzoo::model_registry()) out += (out.empty() ? "" : ", ") + m.id;
    return out;
}

// Flat "key = value" file; keys are long flag names. Values only fill options
// that were not given on the command line. "set" lines accumulate and are
// applied before any --set flags.
void apply_config_file(CLI::App& app, CLI::App& sub, const std::string& path, ModelArgs* model) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        while (!key.empty() && key.front() == '-') key.erase(0, 1);
        if (key == "set" && model) {
            model->set_from_file.push_back(value);
            continue;
        }
        CLI::Option* opt = sub.get_option_no_throw("--" + key);
        if (!opt) opt = sub.get_option_no_throw(key);
        if (!opt) opt = app.get_option_no_throw("--" + key);
        if (!opt) throw UsageError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (opt->count() > 0) continue;
        opt->add_result(value);
        opt->run_callback();
    }
}

std::map<std::string, std::string> parse_knobs(const ModelArgs& m) {
    std::map<std::string, std::string> knobs;
    for (const auto* list : {&m.set_from_file, &m.set}) {
        for (const std::string& kv : *list) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + kv + "'");
            knobs[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
    }
    return knobs;
}

srzoo::Graph resolve_graph(const ModelArgs& m, std::string* name) {
    if (!m.graph_file.empty()) {
        if (!m.set.empty() || !m.set_from_file.empty()) throw UsageError("--set cannot be combined with --graph");
        srzoo::Graph g = srzoo::load_graph(m.graph_file);
        const auto it = g.config().find("arch");
        *name = it != g.config().end() ? it->second : fs::path(m.graph_file).stem().string();
        return g;
    }
    if (m.model.empty()) throw UsageError("a model id or --graph FILE is required (models: " + known_models() + ")");
    if (!srzoo::find_model(m.model)) {
        throw UsageError("unknown model '" + m.model + "' (known: " + known_models() + ")");
    }
    *name = m.model;
    try {
        return srzoo::build_model(srzoo::ArchConfig{m.model, parse_knobs(m)});
    } catch (const srzoo::Error& e) {
        if (e.code() == srzoo::ErrorCode::invalid_argument) throw UsageError(e.what());
        throw;
    }
}

void add_model_args(CLI::App* sub, ModelArgs& m) {
    sub->add_option("model", m.model, "Model id (" + known_models() + ")");
    sub->add_option("--set", m.set, "Architecture knob override key=value (repeatable)");
    sub->add_option("--graph", m.graph_file, "Load the graph from a text file instead of the zoo");
}

void emit(const Common& c, const json& j, const std::string& text) {
    if (c.json_out) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << text;
    }
    if (!c.report.empty()) {
        std::ofstream out(c.report);
        if (!out) srzoo::fail(srzoo::ErrorCode::io, "cannot write report '" + c.report + "'");
        out << j.dump(2) << "\n";
    }
}

std::vector<fs::path> require_pngs(const std::string& dir) {
    std::vector<fs::path> files = srzoo::list_pngs(dir);
    if (files.empty()) srzoo::fail(srzoo::ErrorCode::io, "no PNG files in '" + dir + "'");
    return files;
}

srzoo::Tensor normalized(const srzoo::Tensor& t) { return srzoo::mul(t, 1.0f / 255.0f); }

// ---------------------------------------------------------------------------

std::string breakdown_table(const srzoo::Breakdown& params, const srzoo::Breakdown& macs) {
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof line, "  %-10s %14s %9s %18s %9s\n", "block", "params", "share", "MACs", "share");
    os << line;
    for (const std::string& tag : params.tags) {
        std::snprintf(line, sizeof line, "  %-10s %14s %8.2f%% %18s %8.2f%%\n", tag.c_str(),
                      with_commas(params.of(tag)).c_str(), params.percent(tag), with_commas(macs.of(tag)).c_str(),
                      macs.percent(tag));
        os << line;
    }
    std::snprintf(line, sizeof line, "  %-10s %14s %9s %18s\n", "total", with_commas(params.total).c_str(), "",
                  with_commas(macs.total).c_str());
    os << line;
    return os.str();
}

int cmd_inspect(const Common& c, const ModelArgs& m, const std::string& input, const std::string& save_graph) {
    std::string name;
    const srzoo::Graph g = resolve_graph(m, &name);
    const srzoo::Shape in = srzoo::parse_shape(input);
    const json j = srzoo::inspect_json(name, g, in);
    if (!save_graph.empty()) srzoo::save_graph(g, save_graph);

    const srzoo::Breakdown params = srzoo::count_params(g);
    std::ostringstream os;
    os << "model " << name << "  (" << g.size() << " nodes)\n";
    os << "params " << with_commas(params.total);
    if (j.contains("reported_params")) {
        os << "  reported " << with_commas(j["reported_params"].get<std::int64_t>()) << "  delta "
           << fmt("%+.2f%%", j["reported_delta_pct"].get<double>());
    }
    os << "\nMACs for input " << in.str() << "\n";
    os << breakdown_table(params, srzoo::count_macs(g, in));
    const srzoo::ReceptiveField rf = srzoo::receptive_field(g);
    os << "receptive field " << rf.size << (rf.global ? " (global pooling: every input pixel)" : "") << "\n";
    emit(c, j, os.str());
    return 0;
}

int cmd_degrade(const Common& c, const std::string& hr_dir, const std::string& out_dir) {
    const std::vector<fs::path> files = srzoo::list_pngs(hr_dir);
    fs::create_directories(out_dir);
    struct Outcome {
        json pair;
        std::string skip_reason;
    };
    std::vector<Outcome> outcomes(files.size());
    srzoo::parallel_for(static_cast<std::int64_t>(files.size()), [&](std::int64_t i) {
        const fs::path& f = files[static_cast<std::size_t>(i)];
        Outcome& o = outcomes[static_cast<std::size_t>(i)];
        try {
            const srzoo::Tensor hr = srzoo::load_png(f.string());
            const srzoo::Tensor lr = srzoo::degrade_bicubic_x4(hr);
            const fs::path dst = fs::path(out_dir) / f.filename();
            srzoo::save_png(lr, dst.string());
            o.pair = {{"id", f.stem().string()},
                      {"hr", f.filename().string()},
                      {"lr", dst.filename().string()},
                      {"hr_size", {hr.shape().h, hr.shape().w}},
                      {"lr_size", {lr.shape().h, lr.shape().w}}};
        } catch (const srzoo::Error& e) {
            o.skip_reason = e.what();
        }
    });
    json pairs = json::array(), skipped = json::array();
    std::ostringstream os;
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (outcomes[i].skip_reason.empty()) {
            pairs.push_back(outcomes[i].pair);
        } else {
            skipped.push_back({{"file", files[i].filename().string()}, {"reason", outcomes[i].skip_reason}});
            std::cerr << "warning: skipping " << files[i].filename().string() << ": " << outcomes[i].skip_reason
                      << "\n";
        }
    }
    const json manifest = {{"hr_dir", fs::path(hr_dir).lexically_normal().string()},
                           {"lr_dir", fs::path(out_dir).lexically_normal().string()},
                           {"degradation", "bicubic x1/4, antialiased"},
                           {"pairs", pairs},
                           {"skipped", skipped}};
    {
        std::ofstream out(fs::path(out_dir) / "manifest.json");
        if (!out) srzoo::fail(srzoo::ErrorCode::io, "cannot write manifest in '" + out_dir + "'");
        out << manifest.dump(2) << "\n";
    }
    os << "degraded " << pairs.size() << " image(s) into " << out_dir << ", skipped " << skipped.size() << "\n";
    emit(c, manifest, os.str());
    return 0;
}

int cmd_init_weights(const Common& c, const ModelArgs& m, const std::string& scheme, const std::string& out) {
    std::string name;
    const srzoo::Graph g = resolve_graph(m, &name);
    srzoo::InitScheme s;
    try {
        s = srzoo::InitScheme::parse(scheme);
    } catch (const srzoo::Error& e) {
        throw UsageError(e.what());
    }
    const srzoo::WeightStore store = srzoo::init_weights(g, c.seed, s);
    srzoo::save_weights(store, out);
    const json j = {{"model", name},
                    {"weights", out},
                    {"seed", c.seed},
                    {"scheme", s.str()},
                    {"fingerprint", srzoo::detail::hex64(store.graph_fingerprint)},
                    {"values", store.total_values()}};
    emit(c, j,
         "wrote " + with_commas(store.total_values()) + " values (" + s.str() + ", seed " + std::to_string(c.seed) +
             ") to " + out + "\n");
    return 0;
}

int cmd_infer(const Common& c, const ModelArgs& m, const std::string& weights, const std::string& lr_dir,
              const std::string& out_dir) {
    std::string name;
    const srzoo::Graph g = resolve_graph(m, &name);
    const srzoo::WeightStore store = srzoo::load_weights(weights, g);
    const std::vector<fs::path> files = require_pngs(lr_dir);
    fs::create_directories(out_dir);
    json outputs = json::array();
    for (const fs::path& f : files) {
        const srzoo::Tensor lr = srzoo::load_png(f.string());
        const srzoo::Tensor sr = srzoo::mul(srzoo::forward(g, store, normalized(lr)), 255.0f);
        const fs::path dst = fs::path(out_dir) / f.filename();
        srzoo::save_png(sr, dst.string());
        outputs.push_back({{"lr", f.filename().string()},
                           {"sr", dst.filename().string()},
                           {"lr_size", {lr.shape().h, lr.shape().w}},
                           {"sr_size", {sr.shape().h, sr.shape().w}}});
    }
    const json j = {{"model", name}, {"weights", weights}, {"outputs", outputs}};
    emit(c, j, "wrote " + std::to_string(outputs.size()) + " SR image(s) to " + out_dir + "\n");
    return 0;
}

int cmd_bench(const Common& c, const ModelArgs& m, const std::string& weights, const std::string& lr_dir,
              const std::string& hr_dir, int trials) {
    std::string name;
    const srzoo::Graph g = resolve_graph(m, &name);
    const srzoo::WeightStore store = srzoo::load_weights(weights, g);
    const std::vector<fs::path> files = require_pngs(lr_dir);
    std::vector<srzoo::Tensor> images;
    for (const fs::path& f : files) images.push_back(normalized(srzoo::load_png(f.string())));

    srzoo::BenchReport report;
    report.model = name;
    report.inspect = srzoo::inspect_json(name, g, images.front().shape());
    report.timing = srzoo::time_model(g, store, images, trials);

    if (!hr_dir.empty()) {
        // mean PSNR over images with a finite score; infinite only when every image matches exactly
        double sum = 0.0;
        int finite = 0;
        for (std::size_t i = 0; i < files.size(); ++i) {
            const fs::path hr_path = fs::path(hr_dir) / files[i].filename();
            const srzoo::Tensor hr = srzoo::load_png(hr_path.string());
            const srzoo::Tensor sr = srzoo::mul(srzoo::forward(g, store, images[i]), 255.0f);
            const srzoo::PsnrResult p = srzoo::psnr(sr, hr);
            if (!p.infinite) {
                sum += p.db;
                ++finite;
            }
        }
        report.psnr = finite == 0 ? srzoo::PsnrResult{true, 0.0} : srzoo::PsnrResult{false, sum / finite};
        report.verdicts = srzoo::bench_verdicts(name, srzoo::count_params(g).total, report.timing.best, *report.psnr,
                                                srzoo::challenge_baseline());
    }
    const json j = report.to_json();

    std::ostringstream os;
    os << "model " << name << "  params " << with_commas(srzoo::count_params(g).total) << "  images "
       << report.timing.images << "\n";
    for (std::size_t t = 0; t < report.timing.trials.size(); ++t) {
        os << "  trial " << t + 1 << "  " << fmt("%.6f", report.timing.trials[t]) << " s/image\n";
    }
    os << "  best   " << fmt("%.6f", report.timing.best) << " s/image\n";
    if (report.psnr) os << "psnr " << (report.psnr->infinite ? "inf" : fmt("%.4f", report.psnr->db)) << " dB\n";
    for (const auto& [track, v] : report.verdicts) {
        os << "track " << static_cast<int>(track) << " (" << srzoo::to_string(track) << "): "
           << (v.ranked ? "ranked" : "unranked");
        for (const std::string& r : v.reasons) os << "; " << r;
        os << "\n";
    }
    emit(c, j, os.str());
    return 0;
}

std::string ranking_text(const std::vector<srzoo::RankedEntry>& ranking, srzoo::Track track) {
    std::ostringstream os;
    char line[200];
    os << "track " << static_cast<int>(track) << " (" << srzoo::to_string(track) << ")\n";
    std::snprintf(line, sizeof line, "  %-4s %-16s %7s %12s %9s  %s\n", "rank", "team", "psnr", "params", "runtime",
                  "notes");
    os << line;
    for (const srzoo::RankedEntry& r : ranking) {
        std::string notes = r.entry.baseline ? "baseline" : "";
        for (const std::string& why : r.verdict.reasons) notes += (notes.empty() ? "" : "; ") + why;
        const std::string rank = r.rank ? std::to_string(r.rank) : "-";
        std::snprintf(line, sizeof line, "  %-4s %-16s %7.2f %12s %9.3f  %s\n", rank.c_str(), r.entry.team.c_str(),
                      r.entry.psnr, with_commas(r.entry.params).c_str(), r.entry.runtime_s, notes.c_str());
        os << line;
    }
    return os.str();
}

int cmd_validate(const Common& c, const std::string& entries_file, int track, bool strict) {
    const std::vector<srzoo::EntryRecord> entries = srzoo::load_entries(entries_file);
    const srzoo::TrackRule rule = strict ? srzoo::TrackRule::strict() : srzoo::TrackRule{};
    std::vector<srzoo::Track> tracks;
    if (track == 0) {
        tracks = {srzoo::Track::params, srzoo::Track::runtime, srzoo::Track::fidelity};
    } else {
        tracks = {srzoo::track_from_int(track)};
    }
    json rankings = json::array();
    std::string text;
    for (srzoo::Track t : tracks) {
        const auto ranking = srzoo::rank_entries(entries, t, rule);
        rankings.push_back(srzoo::ranking_json(ranking, t));
        text += ranking_text(ranking, t);
    }
    const json j = {{"entries_file", entries_file},
                    {"rule", {{"psnr_slack_db", rule.psnr_slack_db}, {"runtime_slack", rule.runtime_slack}}},
                    {"rankings", rankings}};
    emit(c, j, text);
    return 0;
}

struct SearchArgs {
    std::int64_t max_params = -1;
    std::int64_t max_macs = -1;
    std::int64_t max_rf = -1;
    std::string input = "1x3x32x32";
    std::int64_t k = 0;
    bool full = false;
    std::int64_t top = 20;
    std::int64_t menu_depth = -1;
};

int cmd_search_menu(const Common& c, const SearchArgs& a, const srzoo::SearchConstraints& limits) {
    const auto choices = srzoo::enumerate_block_choices(a.menu_depth);
    json rows = json::array();
    std::ostringstream os;
    std::int64_t matched = 0;
    for (const auto& choice : choices) {
        const srzoo::Graph g = srzoo::build_block_menu_network(choice);
        const std::int64_t params = srzoo::count_params(g).total;
        const std::int64_t macs = srzoo::count_macs(g, limits.input).total;
        const std::int64_t rf = srzoo::receptive_field(g).size;
        if (params > limits.max_params || macs > limits.max_macs || rf > limits.max_rf) continue;
        ++matched;
        if (a.top == 0 || static_cast<std::int64_t>(rows.size()) < a.top) {
            rows.push_back({{"blocks", g.config().at("blocks")}, {"params", params}, {"macs", macs}, {"rf", rf}});
            os << "  " << with_commas(params) << "  " << with_commas(macs) << "  rf " << rf << "  "
               << g.config().at("blocks") << "\n";
        }
    }
    const json j = {{"space", "block-menu"},
                    {"depth", a.menu_depth},
                    {"scanned", choices.size()},
                    {"matched", matched},
                    {"results", rows}};
    emit(c, j,
         "scanned " + std::to_string(choices.size()) + " block choices, " + std::to_string(matched) + " within bounds\n" +
             os.str());
    return 0;
}

int cmd_search(const Common& c, const SearchArgs& a) {
    srzoo::SearchConstraints limits;
    if (a.max_params >= 0) limits.max_params = a.max_params;
    if (a.max_macs >= 0) limits.max_macs = a.max_macs;
    if (a.max_rf >= 0) limits.max_rf = a.max_rf;
    limits.input = srzoo::parse_shape(a.input);
    if (a.menu_depth >= 0) return cmd_search_menu(c, a, limits);
    if (a.full && a.k > 0) throw UsageError("--full and -k are mutually exclusive");

    std::vector<srzoo::SearchConfig> configs;
    if (a.full) {
        configs = srzoo::all_krahaon_configs();
    } else {
        configs = srzoo::sample_krahaon_space(c.seed, a.k > 0 ? std::min(a.k, srzoo::krahaon_space_size()) : 256);
    }
    const std::vector<srzoo::SearchResult> results = srzoo::filter_constraints(configs, limits);

    json rows = json::array();
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof line, "  %-4s %-28s %12s %16s %5s\n", "#", "config (x,y,z,n_x,n_y,n_z)", "params",
                  "MACs", "rf");
    os << "scanned " << configs.size() << " configs, " << results.size() << " within bounds\n" << line;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (a.top > 0 && static_cast<std::int64_t>(i) >= a.top) break;
        const srzoo::SearchResult& r = results[i];
        const srzoo::SearchConfig& s = r.config;
        rows.push_back({{"x", s.x},
                        {"y", s.y},
                        {"z", s.z},
                        {"n_x", s.n_x},
                        {"n_y", s.n_y},
                        {"n_z", s.n_z},
                        {"params", r.params},
                        {"macs", r.macs},
                        {"rf", r.rf}});
        std::snprintf(line, sizeof line, "  %-4zu %-28s %12s %16s %5lld\n", i + 1, s.str().c_str(),
                      with_commas(r.params).c_str(), with_commas(r.macs).c_str(), static_cast<long long>(r.rf));
        os << line;
    }
    auto bound = [](std::int64_t v) { return v >= 0 ? json(v) : json(nullptr); };
    const json j = {{"space", "krahaon"},
                    {"space_size", srzoo::krahaon_space_size()},
                    {"mode", a.full ? "full" : "sample"},
                    {"seed", c.seed},
                    {"input", limits.input.str()},
                    {"bounds", {{"max_params", bound(a.max_params)}, {"max_macs", bound(a.max_macs)}, {"max_rf", bound(a.max_rf)}}},
                    {"scanned", configs.size()},
                    {"matched", results.size()},
                    {"results", rows}};
    emit(c, j, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"srzoo: constrained x4 super-resolution model zoo and evaluation tools"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_flag("--json", common.json_out, "Print machine-readable JSON instead of text");
    app.add_option("--config", common.config_file, "Flat key = value file mirroring flag names; flags win");
    app.add_option("--seed", common.seed, "Seed for every random choice");
    app.add_option("--threads", common.threads, "Worker threads (0 = hardware; SRZOO_THREADS also works)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--report", common.report, "Also write the JSON output to this file");

    ModelArgs model;

    CLI::App* inspect = app.add_subcommand("inspect", "Parameter, MAC and receptive-field report of a model");
    add_model_args(inspect, model);
    std::string input = "1x3x64x64", save_graph;
    inspect->add_option("--input", input, "Input shape NxCxHxW for MAC counting")->capture_default_str();
    inspect->add_option("--save-graph", save_graph, "Write the graph in text form");

    CLI::App* degrade = app.add_subcommand("degrade", "Bicubic x1/4 LR images from a directory of HR PNGs");
    std::string hr_dir, out_dir;
    degrade->add_option("hr_dir", hr_dir, "Directory of HR PNGs");
    degrade->add_option("out_dir", out_dir, "Destination for LR PNGs and manifest.json");

    CLI::App* initw = app.add_subcommand("init-weights", "Write a deterministic initial weight file");
    add_model_args(initw, model);
    std::string scheme = "kaiming_uniform", weights_out;
    initw->add_option("--init", scheme, "kaiming_uniform | kaiming_normal | constant(v)")->capture_default_str();
    initw->add_option("--out,-o", weights_out, "Weight file to write");

    CLI::App* infer = app.add_subcommand("infer", "Super-resolve every PNG in a directory");
    add_model_args(infer, model);
    std::string weights, lr_dir;
    infer->add_option("--weights,-w", weights, "Weight file");
    infer->add_option("--lr-dir", lr_dir, "Directory of LR PNGs");
    infer->add_option("--out-dir", out_dir, "Destination for SR PNGs");

    CLI::App* bench = app.add_subcommand("bench", "Best-of-three timing, optional PSNR and track verdicts");
    add_model_args(bench, model);
    int trials = 3;
    bench->add_option("--weights,-w", weights, "Weight file");
    bench->add_option("--lr-dir", lr_dir, "Directory of LR PNGs");
    bench->add_option("--hr-dir", hr_dir, "Directory of matching HR PNGs for PSNR");
    bench->add_option("--trials", trials, "Number of timed trials")->capture_default_str()->check(CLI::PositiveNumber);

    CLI::App* validate = app.add_subcommand("validate", "Rank challenge entries per track");
    std::string entries_file;
    int track = 0;
    bool strict = false;
    validate->add_option("entries", entries_file, "JSON list of {team, psnr, params, runtime_s, baseline}");
    validate->add_option("--track", track, "Track 1, 2 or 3 (default: all)")->check(CLI::Range(0, 3));
    validate->add_flag("--strict", strict, "No tolerance on the constrained metrics");

    CLI::App* search = app.add_subcommand("search", "Filter the krahaon search space by budgets");
    SearchArgs sargs;
    search->add_option("--max-params", sargs.max_params, "Parameter budget")->check(CLI::NonNegativeNumber);
    search->add_option("--max-macs", sargs.max_macs, "MAC budget at --input")->check(CLI::NonNegativeNumber);
    search->add_option("--max-rf", sargs.max_rf, "Receptive-field bound")->check(CLI::NonNegativeNumber);
    search->add_option("--input", sargs.input, "Input shape for MAC counting")->capture_default_str();
    search->add_option("-k", sargs.k, "Random sample size (default 256)")->check(CLI::PositiveNumber);
    search->add_flag("--full", sargs.full, "Scan the whole space");
    search->add_option("--top", sargs.top, "Rows to list (0 = all)")->capture_default_str()->check(CLI::NonNegativeNumber);
    search->add_option("--menu-depth", sargs.menu_depth, "Enumerate per-position block choices of this depth instead")
        ->check(CLI::Range(0, 8));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    auto need = [](const std::string& v, const std::string& what) {
        if (v.empty()) throw UsageError(what + " is required");
    };
    try {
        const bool uses_model = sub == inspect || sub == initw || sub == infer || sub == bench;
        if (!common.config_file.empty()) apply_config_file(app, *sub, common.config_file, uses_model ? &model : nullptr);
        if (common.threads > 0) srzoo::set_num_threads(common.threads);

        if (sub == inspect) return cmd_inspect(common, model, input, save_graph);
        if (sub == degrade) {
            need(hr_dir, "hr_dir");
            need(out_dir, "out_dir");
            return cmd_degrade(common, hr_dir, out_dir);
        }
        if (sub == initw) {
            need(weights_out, "--out");
            return cmd_init_weights(common, model, scheme, weights_out);
        }
        if (sub == infer) {
            need(weights, "--weights");
            need(lr_dir, "--lr-dir");
            need(out_dir, "--out-dir");
            return cmd_infer(common, model, weights, lr_dir, out_dir);
        }
        if (sub == bench) {
            need(weights, "--weights");
            need(lr_dir, "--lr-dir");
            return cmd_bench(common, model, weights, lr_dir, hr_dir, trials);
        }
        if (sub == validate) {
            need(entries_file, "entries");
            return cmd_validate(common, entries_file, track, strict);
        }
        if (sub == search) return cmd_search(common, sargs);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const srzoo::Error& e) {
        std::cerr << "error [" << srzoo::to_string(e.code()) << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
