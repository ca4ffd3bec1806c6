#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "srzoo/graph.hpp"

namespace srzoo {

/// Architecture id plus string-valued knob overrides. Builders fill in every
/// knob they read (with its effective value) into the graph's config map, so
/// a graph can be rebuilt from its own text serialization.
struct ArchConfig {
    std::string arch;
    std::map<std::string, std::string> knobs;

    friend bool operator==(const ArchConfig&, const ArchConfig&) = default;
};

inline ArchConfig config_of(const Graph& g) {
    ArchConfig cfg;
    for (const auto& [k, v] : g.config()) {
        if (k == "arch") {
            cfg.arch = v;
        } else {
            cfg.knobs[k] = v;
        }
    }
    return cfg;
}

/// Typed, recorded access to the knobs of one builder invocation.
class Knobs {
public:
    explicit Knobs(const ArchConfig& cfg) : cfg_(cfg) { effective_["arch"] = cfg.arch; }

    std::int64_t integer(const std::string& key, std::int64_t def) {
        const std::string v = raw(key, std::to_string(def));
        try {
            std::size_t used = 0;
            const long long out = std::stoll(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return out;
        } catch (const std::exception&) {
            fail(ErrorCode::invalid_argument, cfg_.arch + ": knob '" + key + "' expects an integer, got '" + v + "'");
        }
    }

    std::int64_t positive(const std::string& key, std::int64_t def) {
        const std::int64_t v = integer(key, def);
        if (v < 1) fail(ErrorCode::invalid_argument, cfg_.arch + ": knob '" + key + "' must be positive");
        return v;
    }

    std::int64_t non_negative(const std::string& key, std::int64_t def) {
        const std::int64_t v = integer(key, def);
        if (v < 0) fail(ErrorCode::invalid_argument, cfg_.arch + ": knob '" + key + "' must be non-negative");
        return v;
    }

    float real(const std::string& key, float def) {
        std::ostringstream os;
        os.precision(9);
        os << def;
        const std::string v = raw(key, os.str());
        try {
            return std::stof(v);
        } catch (const std::exception&) {
            fail(ErrorCode::invalid_argument, cfg_.arch + ": knob '" + key + "' expects a number, got '" + v + "'");
        }
    }

    bool flag(const std::string& key, bool def) {
        const std::string v = raw(key, def ? "true" : "false");
        if (v == "true" || v == "1" || v == "yes" || v == "on") return store(key, "true"), true;
        if (v == "false" || v == "0" || v == "no" || v == "off") return store(key, "false"), false;
        fail(ErrorCode::invalid_argument, cfg_.arch + ": knob '" + key + "' expects true/false, got '" + v + "'");
    }

    std::string text(const std::string& key, const std::string& def) { return raw(key, def); }

    std::vector<std::int64_t> integers(const std::string& key, const std::vector<std::int64_t>& def) {
        std::string joined;
        for (std::size_t i = 0; i < def.size(); ++i) joined += (i ? "," : "") + std::to_string(def[i]);
        const std::string v = raw(key, joined);
        std::vector<std::int64_t> out;
        std::stringstream ss(v);
        for (std::string part; std::getline(ss, part, ',');) {
            try {
                out.push_back(std::stoll(part));
            } catch (const std::exception&) {
                fail(ErrorCode::invalid_argument, cfg_.arch + ": knob '" + key + "' expects a list of integers");
            }
        }
        return out;
    }

    /// Rejects knobs the builder never read; returns the effective config.
    std::map<std::string, std::string> finish() const {
        for (const auto& [k, _] : cfg_.knobs) {
            if (!effective_.count(k)) {
                std::string known;
                for (const auto& [ek, __] : effective_)
                    if (ek != "arch") known += (known.empty() ? "" : ", ") + ek;
                fail(ErrorCode::invalid_argument, cfg_.arch + ": unknown knob '" + k + "' (known: " + known + ")");
            }
        }
        return effective_;
    }

private:
    std::string raw(const std::string& key, const std::string& def) {
        auto it = cfg_.knobs.find(key);
        const std::string v = it == cfg_.knobs.end() ? def : it->second;
        store(key, v);
        return v;
    }
    void store(const std::string& key, const std::string& v) { effective_[key] = v; }

    const ArchConfig& cfg_;
    std::map<std::string, std::string> effective_;
};

// ---------------------------------------------------------------------------
// Shared building blocks

namespace zoo {

inline Activation lrelu(float alpha = 0.2f) { return Activation{ActKind::leaky_relu, alpha}; }
inline Activation relu() { return Activation{ActKind::relu, 0.2f}; }

/// conv3 -> act -> conv3 (+ optional fixed scaling) + identity.
struct ResidualOptions {
    Activation act = lrelu();
    std::int64_t dilation1 = 1;
    std::int64_t dilation2 = 1;
    float res_scale = 1.0f;
    bool bias = true;
    PadMode pad_mode = PadMode::zero;
};

inline std::string residual_block(GraphBuilder& b, const std::string& in, const std::string& prefix,
                                  const std::string& tag, const ResidualOptions& opt = {}) {
    const std::int64_t w = b.channels(in);
    b.conv(prefix + ".conv1", in, w, 3, tag, opt.bias, opt.dilation1, opt.pad_mode);
    b.act(prefix + ".act", prefix + ".conv1", opt.act, tag);
    std::string body = b.conv(prefix + ".conv2", prefix + ".act", w, 3, tag, opt.bias, opt.dilation2, opt.pad_mode);
    if (opt.res_scale != 1.0f) body = b.scale(prefix + ".scale", body, false, opt.res_scale, tag);
    return b.add_nodes(prefix + ".add", {in, body}, tag);
}

/// conv(w, 4w) -> PS2 -> act, twice; then act(HRconv) -> conv_last(w, out).
inline std::string msr_upsampler(GraphBuilder& b, const std::string& in, Activation act,
                                 std::int64_t out_channels = 3, bool bias = true) {
    const std::int64_t w = b.channels(in);
    std::string x = in;
    for (int i = 1; i <= 2; ++i) {
        const std::string s = std::to_string(i);
        b.conv("upconv" + s, x, 4 * w, 3, "UpsBlk", bias);
        b.pixel_shuffle("ps" + s, "upconv" + s, 2, "UpsBlk");
        x = b.act("ups_act" + s, "ps" + s, act, "UpsBlk");
    }
    b.conv("hrconv", x, w, 3, "RecBlk", bias);
    b.act("hr_act", "hrconv", act, "RecBlk");
    return b.conv("conv_last", "hr_act", out_channels, 3, "RecBlk", bias);
}

/// Adds the x4 interpolated input to `out`.
inline std::string global_skip(GraphBuilder& b, const std::string& out, ResizeMode mode = ResizeMode::bilinear,
                               bool align_corners = false) {
    ResizeOptions opt;
    opt.mode = mode;
    opt.align_corners = align_corners;
    b.resize("skip_up", b.input(), Scale{4, 1}, opt, "Skip");
    return b.add_nodes("output", {out, "skip_up"}, "Skip");
}

/// gap -> dense(reduce) -> act -> dense(expand) -> gate -> channel rescale.
inline std::string se_block(GraphBuilder& b, const std::string& in, const std::string& prefix, const std::string& tag,
                            std::int64_t reduction, bool bias, Activation mid, Activation gate) {
    const std::int64_t c = b.channels(in);
    const std::int64_t r = std::max<std::int64_t>(1, c / reduction);
    b.gap(prefix + ".gap", in, tag);
    b.dense(prefix + ".fc1", prefix + ".gap", r, bias, tag);
    b.act(prefix + ".fc1_act", prefix + ".fc1", mid, tag);
    b.dense(prefix + ".fc2", prefix + ".fc1_act", c, bias, tag);
    b.act(prefix + ".gate", prefix + ".fc2", gate, tag);
    return b.mul(prefix + ".mul", in, prefix + ".gate", tag);
}

inline std::string block_name(const std::string& stem, std::int64_t i) { return stem + std::to_string(i); }

}  // namespace zoo
}  // namespace srzoo
