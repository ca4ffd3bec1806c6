#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "srzoo/graph.hpp"

namespace srzoo {

enum class InitKind { kaiming_uniform, kaiming_normal, constant };

struct InitScheme {
    InitKind kind = InitKind::kaiming_uniform;
    float value = 0.0f;  // constant only

    std::string str() const {
        switch (kind) {
            case InitKind::kaiming_uniform: return "kaiming_uniform";
            case InitKind::kaiming_normal: return "kaiming_normal";
            case InitKind::constant: {
                std::ostringstream os;
                os.precision(9);
                os << "constant(" << value << ")";
                return os.str();
            }
        }
        return "unknown";
    }

    /// Accepts "kaiming_uniform", "kaiming_normal", "constant(v)" or "constant:v".
    static InitScheme parse(const std::string& text) {
        if (text == "kaiming_uniform") return {InitKind::kaiming_uniform, 0.0f};
        if (text == "kaiming_normal") return {InitKind::kaiming_normal, 0.0f};
        std::string arg;
        if (text.rfind("constant(", 0) == 0 && text.back() == ')') {
            arg = text.substr(9, text.size() - 10);
        } else if (text.rfind("constant:", 0) == 0) {
            arg = text.substr(9);
        } else if (text == "constant") {
            arg = "0";
        } else {
            fail(ErrorCode::parse, "unknown init scheme '" + text + "'");
        }
        try {
            return {InitKind::constant, std::stof(arg)};
        } catch (const std::exception&) {
            fail(ErrorCode::parse, "bad constant in init scheme '" + text + "'");
        }
    }

    friend bool operator==(const InitScheme&, const InitScheme&) = default;
};

namespace detail {

inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 1469598103934665603ull) {
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform
/// (unlike std::uniform_real_distribution, whose algorithm is unspecified).
inline double unit_uniform(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

inline std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << v;
    return os.str();
}

}  // namespace detail

/// Stable hash of the ordered (slot name, shape) list.
inline std::uint64_t fingerprint(const Graph& g) {
    std::uint64_t h = detail::fnv1a("srzoo-slots");
    for (const SlotSpec& s : g.parameter_slots()) {
        h = detail::fnv1a(s.name + ":" + s.shape.str() + ";", h);
    }
    return h;
}

struct WeightStore {
    std::map<std::string, Tensor> slots;
    std::uint64_t seed = 0;
    InitScheme scheme;
    std::uint64_t graph_fingerprint = 0;

    const Tensor& at(const std::string& name) const {
        auto it = slots.find(name);
        if (it == slots.end()) fail(ErrorCode::graph, "weight store has no slot '" + name + "'");
        return it->second;
    }
    Tensor& at(const std::string& name) {
        auto it = slots.find(name);
        if (it == slots.end()) fail(ErrorCode::graph, "weight store has no slot '" + name + "'");
        return it->second;
    }
    const Tensor* find(const std::string& name) const {
        auto it = slots.find(name);
        return it == slots.end() ? nullptr : &it->second;
    }

    std::int64_t total_values() const {
        std::int64_t n = 0;
        for (const auto& [_, t] : slots) n += static_cast<std::int64_t>(t.numel());
        return n;
    }

    friend bool operator==(const WeightStore&, const WeightStore&) = default;
};

/// Throws unless `store` holds exactly the graph's slots with matching shapes.
inline void check_store(const Graph& g, const WeightStore& store) {
    const std::uint64_t fp = fingerprint(g);
    if (store.graph_fingerprint != fp) {
        fail(ErrorCode::fingerprint, "weight fingerprint " + detail::hex64(store.graph_fingerprint) +
                                         " does not match graph fingerprint " + detail::hex64(fp));
    }
    const auto slots = g.parameter_slots();
    if (slots.size() != store.slots.size()) {
        fail(ErrorCode::fingerprint, "weight store has " + std::to_string(store.slots.size()) + " slots, graph needs " +
                                         std::to_string(slots.size()));
    }
    for (const SlotSpec& s : slots) {
        const Tensor* t = store.find(s.name);
        if (!t) fail(ErrorCode::fingerprint, "weight store is missing slot '" + s.name + "'");
        if (t->shape() != s.shape) {
            fail(ErrorCode::fingerprint, "slot '" + s.name + "' has shape " + t->shape().str() + ", graph expects " +
                                             s.shape.str());
        }
    }
}

inline WeightStore init_weights(const Graph& g, std::uint64_t seed, const InitScheme& scheme) {
    WeightStore store;
    store.seed = seed;
    store.scheme = scheme;
    store.graph_fingerprint = fingerprint(g);
    for (const SlotSpec& s : g.parameter_slots()) {
        Tensor t(s.shape);
        const LayerSpec& owner = g.node(s.owner);
        const bool is_bias = s.name.size() > 5 && s.name.compare(s.name.size() - 5, 5, ".bias") == 0;
        if (const auto* sc = std::get_if<ScaleLayer>(&owner.kind)) {
            t.data()[0] = sc->init;
        } else if (scheme.kind == InitKind::constant) {
            for (float& v : t.data()) v = scheme.value;
        } else if (!is_bias) {
            const double fan_in = double(s.shape.c * s.shape.h * s.shape.w);
            std::mt19937_64 rng(detail::splitmix64(seed ^ detail::fnv1a(s.name)));
            if (scheme.kind == InitKind::kaiming_uniform) {
                const double bound = std::sqrt(6.0 / fan_in);
                for (float& v : t.data()) v = static_cast<float>((2.0 * detail::unit_uniform(rng) - 1.0) * bound);
            } else {
                const double stddev = std::sqrt(2.0 / fan_in);
                for (float& v : t.data()) {
                    // Box-Muller; 1 - u keeps the log argument in (0, 1]
                    const double u1 = 1.0 - detail::unit_uniform(rng);
                    const double u2 = detail::unit_uniform(rng);
                    v = static_cast<float>(stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2));
                }
            }
        }
        store.slots.emplace(s.name, std::move(t));
    }
    return store;
}

// ---------------------------------------------------------------------------
// Binary weight file:
//   "SRBW1" | u64 LE manifest byte length | manifest text | f32 LE payload
// The manifest lists fingerprint, seed, scheme and one
// "slot <name> <n> <c> <h> <w> <float offset>" line per tensor.

namespace detail {

inline void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline std::uint64_t get_u64(const char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
}

inline void put_f32(std::string& out, float f) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

inline float get_f32(const char* p) {
    std::uint32_t bits = 0;
    for (int i = 0; i < 4; ++i) bits |= std::uint32_t(static_cast<unsigned char>(p[i])) << (8 * i);
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
}

constexpr std::string_view weight_magic = "SRBW1";

}  // namespace detail

inline std::string serialize_weights(const WeightStore& store) {
    std::ostringstream manifest;
    manifest << "fingerprint " << detail::hex64(store.graph_fingerprint) << "\n";
    manifest << "seed " << store.seed << "\n";
    manifest << "scheme " << store.scheme.str() << "\n";
    manifest << "slots " << store.slots.size() << "\n";
    std::uint64_t offset = 0;
    for (const auto& [name, t] : store.slots) {
        const Shape& s = t.shape();
        manifest << "slot " << name << " " << s.n << " " << s.c << " " << s.h << " " << s.w << " " << offset << "\n";
        offset += t.numel();
    }
    const std::string text = manifest.str();
    std::string out(detail::weight_magic);
    detail::put_u64(out, text.size());
    out += text;
    out.reserve(out.size() + offset * 4);
    for (const auto& [_, t] : store.slots)
        for (float v : t.data()) detail::put_f32(out, v);
    return out;
}

inline WeightStore deserialize_weights(const std::string& bytes) {
    const std::size_t head = detail::weight_magic.size() + 8;
    if (bytes.size() < head || bytes.compare(0, detail::weight_magic.size(), detail::weight_magic) != 0) {
        fail(ErrorCode::parse, "weight file: bad magic (expected SRBW1)");
    }
    const std::uint64_t mlen = detail::get_u64(bytes.data() + detail::weight_magic.size());
    if (mlen > bytes.size() - head) {
        fail(ErrorCode::parse, "weight file: manifest length " + std::to_string(mlen) + " exceeds file size " +
                                   std::to_string(bytes.size()));
    }
    std::istringstream is(bytes.substr(head, mlen));
    WeightStore store;
    std::string key, line;
    std::size_t expected_slots = 0;
    struct Entry {
        std::string name;
        Shape shape;
        std::uint64_t offset;
    };
    std::vector<Entry> entries;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        ls >> key;
        if (key == "fingerprint") {
            std::string hex;
            ls >> hex;
            try {
                store.graph_fingerprint = std::stoull(hex, nullptr, 16);
            } catch (const std::exception&) {
                fail(ErrorCode::parse, "weight file: bad fingerprint '" + hex + "'");
            }
        } else if (key == "seed") {
            ls >> store.seed;
        } else if (key == "scheme") {
            std::string s;
            ls >> s;
            store.scheme = InitScheme::parse(s);
        } else if (key == "slots") {
            ls >> expected_slots;
        } else if (key == "slot") {
            Entry e;
            ls >> e.name >> e.shape.n >> e.shape.c >> e.shape.h >> e.shape.w >> e.offset;
            if (!ls || !e.shape.valid()) fail(ErrorCode::parse, "weight file: malformed slot line '" + line + "'");
            entries.push_back(e);
        } else {
            fail(ErrorCode::parse, "weight file: unknown manifest key '" + key + "'");
        }
        if (!ls && key != "slot") fail(ErrorCode::parse, "weight file: malformed manifest line '" + line + "'");
    }
    if (entries.size() != expected_slots) {
        fail(ErrorCode::parse, "weight file: manifest declares " + std::to_string(expected_slots) + " slots, lists " +
                                   std::to_string(entries.size()));
    }
    const std::size_t payload_start = head + mlen;
    const std::size_t payload_floats = (bytes.size() - payload_start) / 4;
    std::uint64_t expected_offset = 0;
    for (const Entry& e : entries) {
        if (e.offset != expected_offset) fail(ErrorCode::parse, "weight file: slot '" + e.name + "' has a bad offset");
        const std::uint64_t count = e.shape.numel();
        if (e.offset + count > payload_floats) fail(ErrorCode::parse, "weight file: payload truncated at slot '" + e.name + "'");
        Tensor t(e.shape);
        const char* p = bytes.data() + payload_start + e.offset * 4;
        for (float& v : t.data()) {
            v = detail::get_f32(p);
            p += 4;
        }
        if (!store.slots.emplace(e.name, std::move(t)).second) {
            fail(ErrorCode::parse, "weight file: duplicate slot '" + e.name + "'");
        }
        expected_offset += count;
    }
    if (payload_start + expected_offset * 4 != bytes.size()) {
        fail(ErrorCode::parse, "weight file: payload has " + std::to_string(bytes.size() - payload_start) +
                                   " bytes, manifest describes " + std::to_string(expected_offset * 4));
    }
    return store;
}

inline void save_weights(const WeightStore& store, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::io, "cannot write weight file '" + path + "'");
    const std::string bytes = serialize_weights(store);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorCode::io, "failed writing weight file '" + path + "'");
}

inline WeightStore load_weights(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot read weight file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize_weights(ss.str());
}

/// Loads and checks the store against `g` (fingerprint and slot shapes).
inline WeightStore load_weights(const std::string& path, const Graph& g) {
    WeightStore store = load_weights(path);
    check_store(g, store);
    return store;
}

}  // namespace srzoo
