#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "srzoo/graph.hpp"

namespace srzoo {

// Line-oriented graph text format:
//
//   srzoo-graph 1
//   config <key>=<value>
//   <kind> <id> tag=<block> in=<a,b,...> <key>=<value>...
//   share <id>,<id>,...
//   output <id>
//
// Blank lines and lines starting with '#' are ignored.

namespace detail {

inline std::string join(const std::vector<std::string>& parts, char sep = ',') {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

inline std::vector<std::string> split(const std::string& text, char sep = ',') {
    std::vector<std::string> out;
    if (text.empty()) return out;
    std::string cur;
    for (char ch : text) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string format_float(float v) {
    std::ostringstream os;
    os.precision(9);
    os << v;
    return os.str();
}

inline std::string layer_fields(const LayerKind& kind) {
    std::ostringstream os;
    std::visit(
        [&](const auto& l) {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, InputLayer>) {
                os << " channels=" << l.channels;
            } else if constexpr (std::is_same_v<T, ConvLayer>) {
                const ConvParams& p = l.params;
                os << " cin=" << p.in_channels << " cout=" << p.out_channels << " kh=" << p.kernel_h
                   << " kw=" << p.kernel_w << " stride=" << p.stride << " pad=" << p.padding
                   << " dilation=" << p.dilation << " groups=" << p.groups << " pad_mode=" << to_string(p.pad_mode)
                   << " bias=" << (p.has_bias ? 1 : 0);
            } else if constexpr (std::is_same_v<T, ActivationLayer>) {
                os << " fn=" << to_string(l.act.kind);
                if (l.act.kind == ActKind::leaky_relu) os << " alpha=" << format_float(l.act.alpha);
            } else if constexpr (std::is_same_v<T, PixelShuffleLayer>) {
                os << " r=" << l.factor;
            } else if constexpr (std::is_same_v<T, ResizeLayer>) {
                os << " scale=" << l.scale.str() << " mode=" << to_string(l.options.mode)
                   << " antialias=" << (l.options.antialias ? 1 : 0)
                   << " align_corners=" << (l.options.align_corners ? 1 : 0);
            } else if constexpr (std::is_same_v<T, SplitLayer>) {
                std::vector<std::string> s;
                for (auto v : l.sizes) s.push_back(std::to_string(v));
                os << " sizes=" << join(s) << " take=" << l.take;
            } else if constexpr (std::is_same_v<T, ScaleLayer>) {
                os << " learnable=" << (l.learnable ? 1 : 0) << " init=" << format_float(l.init);
            } else if constexpr (std::is_same_v<T, DenseLayer>) {
                os << " fin=" << l.in_features << " fout=" << l.out_features << " bias=" << (l.has_bias ? 1 : 0);
            }
        },
        kind);
    return os.str();
}

class Fields {
public:
    Fields(std::map<std::string, std::string> kv, int line) : kv_(std::move(kv)), line_(line) {}

    const std::string& str(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) fail(ErrorCode::parse, where() + "missing field '" + key + "'");
        return it->second;
    }

    std::int64_t integer(const std::string& key) const {
        const std::string& v = str(key);
        try {
            std::size_t used = 0;
            const long long out = std::stoll(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return out;
        } catch (const std::exception&) {
            fail(ErrorCode::parse, where() + "field '" + key + "' is not an integer: '" + v + "'");
        }
    }

    float real(const std::string& key) const {
        const std::string& v = str(key);
        try {
            return std::stof(v);
        } catch (const std::exception&) {
            fail(ErrorCode::parse, where() + "field '" + key + "' is not a number: '" + v + "'");
        }
    }

    bool flag(const std::string& key) const { return integer(key) != 0; }

    std::string where() const { return "graph text line " + std::to_string(line_) + ": "; }

private:
    std::map<std::string, std::string> kv_;
    int line_;
};

inline LayerKind parse_layer(const std::string& kind, const Fields& f) {
    if (kind == "input") return InputLayer{f.integer("channels")};
    if (kind == "conv") {
        ConvParams p;
        p.in_channels = f.integer("cin");
        p.out_channels = f.integer("cout");
        p.kernel_h = f.integer("kh");
        p.kernel_w = f.integer("kw");
        p.stride = f.integer("stride");
        p.padding = f.integer("pad");
        p.dilation = f.integer("dilation");
        p.groups = f.integer("groups");
        p.pad_mode = parse_pad_mode(f.str("pad_mode"));
        p.has_bias = f.flag("bias");
        p.validate();
        return ConvLayer{p};
    }
    if (kind == "act") {
        Activation a;
        a.kind = parse_act_kind(f.str("fn"));
        if (a.kind == ActKind::leaky_relu) a.alpha = f.real("alpha");
        return ActivationLayer{a};
    }
    if (kind == "pixel_shuffle") return PixelShuffleLayer{f.integer("r")};
    if (kind == "resize") {
        ResizeOptions o;
        o.mode = parse_resize_mode(f.str("mode"));
        o.antialias = f.flag("antialias");
        o.align_corners = f.flag("align_corners");
        return ResizeLayer{Scale::parse(f.str("scale")), o};
    }
    if (kind == "gap") return GlobalAvgPoolLayer{};
    if (kind == "concat") return ConcatLayer{};
    if (kind == "split") {
        SplitLayer s;
        for (const auto& part : split(f.str("sizes"))) s.sizes.push_back(std::stoll(part));
        s.take = f.integer("take");
        return s;
    }
    if (kind == "add") return AddLayer{};
    if (kind == "mul") return MulLayer{};
    if (kind == "scale") return ScaleLayer{f.flag("learnable"), f.real("init")};
    if (kind == "dense") return DenseLayer{f.integer("fin"), f.integer("fout"), f.flag("bias")};
    fail(ErrorCode::parse, f.where() + "unknown layer kind '" + kind + "'");
}

}  // namespace detail

inline std::string to_text(const Graph& g) {
    std::ostringstream os;
    os << "srzoo-graph 1\n";
    for (const auto& [k, v] : g.config()) os << "config " << k << "=" << v << "\n";
    for (const LayerSpec& n : g.nodes()) {
        os << kind_name(n.kind) << " " << n.id << " tag=" << n.block_tag;
        if (!n.inputs.empty()) os << " in=" << detail::join(n.inputs);
        os << detail::layer_fields(n.kind) << "\n";
    }
    for (const auto& group : g.shared_groups()) os << "share " << detail::join(group) << "\n";
    os << "output " << g.output() << "\n";
    return os.str();
}

inline Graph from_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    bool header = false;
    std::vector<LayerSpec> nodes;
    std::vector<std::vector<std::string>> shared;
    std::map<std::string, std::string> config;
    std::string output;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<std::string> tokens;
        for (std::string t; ls >> t;) tokens.push_back(t);
        if (tokens.empty()) continue;
        const std::string where = "graph text line " + std::to_string(lineno) + ": ";
        if (!header) {
            if (tokens.size() != 2 || tokens[0] != "srzoo-graph" || tokens[1] != "1") {
                fail(ErrorCode::parse, where + "expected header 'srzoo-graph 1'");
            }
            header = true;
            continue;
        }
        const std::string& kind = tokens[0];
        if (kind == "config") {
            if (tokens.size() != 2) fail(ErrorCode::parse, where + "config takes one key=value");
            const auto eq = tokens[1].find('=');
            if (eq == std::string::npos) fail(ErrorCode::parse, where + "config entry needs '='");
            config[tokens[1].substr(0, eq)] = tokens[1].substr(eq + 1);
            continue;
        }
        if (kind == "share") {
            if (tokens.size() != 2) fail(ErrorCode::parse, where + "share takes a comma-separated id list");
            shared.push_back(detail::split(tokens[1]));
            continue;
        }
        if (kind == "output") {
            if (tokens.size() != 2) fail(ErrorCode::parse, where + "output takes one id");
            output = tokens[1];
            continue;
        }
        if (tokens.size() < 2) fail(ErrorCode::parse, where + "layer line needs a kind and an id");
        std::map<std::string, std::string> kv;
        for (std::size_t i = 2; i < tokens.size(); ++i) {
            const auto eq = tokens[i].find('=');
            if (eq == std::string::npos) fail(ErrorCode::parse, where + "expected key=value, got '" + tokens[i] + "'");
            kv[tokens[i].substr(0, eq)] = tokens[i].substr(eq + 1);
        }
        LayerSpec spec;
        spec.id = tokens[1];
        spec.block_tag = kv.count("tag") ? kv["tag"] : "";
        if (kv.count("in")) spec.inputs = detail::split(kv["in"]);
        kv.erase("tag");
        kv.erase("in");
        spec.kind = detail::parse_layer(kind, detail::Fields(kv, lineno));
        nodes.push_back(std::move(spec));
    }
    if (!header) fail(ErrorCode::parse, "graph text: missing header");
    if (output.empty()) fail(ErrorCode::parse, "graph text: missing output line");
    return Graph(std::move(nodes), output, std::move(shared), std::move(config));
}

inline void save_graph(const Graph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::io, "cannot write graph file '" + path + "'");
    out << to_text(g);
    if (!out) fail(ErrorCode::io, "failed writing graph file '" + path + "'");
}

inline Graph load_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot read graph file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

}  // namespace srzoo
