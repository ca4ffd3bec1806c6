#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "srzoo/conv.hpp"
#include "srzoo/ops.hpp"
#include "srzoo/resize.hpp"

namespace srzoo {

// Layer kinds. Each node of a graph carries exactly one of these.

struct InputLayer {
    std::int64_t channels = 3;
    friend bool operator==(const InputLayer&, const InputLayer&) = default;
};

struct ConvLayer {
    ConvParams params;
    friend bool operator==(const ConvLayer&, const ConvLayer&) = default;
};

struct ActivationLayer {
    Activation act;
    friend bool operator==(const ActivationLayer&, const ActivationLayer&) = default;
};

struct PixelShuffleLayer {
    std::int64_t factor = 2;
    friend bool operator==(const PixelShuffleLayer&, const PixelShuffleLayer&) = default;
};

struct ResizeLayer {
    Scale scale;
    ResizeOptions options;
    friend bool operator==(const ResizeLayer&, const ResizeLayer&) = default;
};

struct GlobalAvgPoolLayer {
    friend bool operator==(const GlobalAvgPoolLayer&, const GlobalAvgPoolLayer&) = default;
};

struct ConcatLayer {
    friend bool operator==(const ConcatLayer&, const ConcatLayer&) = default;
};

/// Selects part `take` of a channel split with the given sizes.
struct SplitLayer {
    std::vector<std::int64_t> sizes;
    std::int64_t take = 0;
    friend bool operator==(const SplitLayer&, const SplitLayer&) = default;
};

/// Sum of two or more equally shaped inputs.
struct AddLayer {
    friend bool operator==(const AddLayer&, const AddLayer&) = default;
};

/// Product of a feature map and an (n, c, 1, 1) gate.
struct MulLayer {
    friend bool operator==(const MulLayer&, const MulLayer&) = default;
};

/// Multiplication by a scalar; a parameter slot when learnable.
struct ScaleLayer {
    bool learnable = false;
    float init = 1.0f;
    friend bool operator==(const ScaleLayer&, const ScaleLayer&) = default;
};

struct DenseLayer {
    std::int64_t in_features = 1;
    std::int64_t out_features = 1;
    bool has_bias = true;
    friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

using LayerKind = std::variant<InputLayer, ConvLayer, ActivationLayer, PixelShuffleLayer, ResizeLayer,
                               GlobalAvgPoolLayer, ConcatLayer, SplitLayer, AddLayer, MulLayer, ScaleLayer,
                               DenseLayer>;

inline const char* kind_name(const LayerKind& kind) {
    static constexpr const char* names[] = {"input", "conv", "act",  "pixel_shuffle", "resize", "gap",
                                            "concat", "split", "add", "mul",           "scale",  "dense"};
    return names[kind.index()];
}

struct LayerSpec {
    std::string id;
    LayerKind kind;
    std::vector<std::string> inputs;
    std::string block_tag;

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// A named parameter tensor owned by one node (the canonical member when the
/// node is part of a shared group).
struct SlotSpec {
    std::string name;
    Shape shape;
    std::string owner;      // canonical node id
    std::string block_tag;  // tag of the canonical node
};

/// Immutable layer DAG. Nodes are stored in a topological order; the first
/// node is the single input.
class Graph {
public:
    Graph() = default;

    Graph(std::vector<LayerSpec> nodes, std::string output, std::vector<std::vector<std::string>> shared_groups = {},
          std::map<std::string, std::string> config = {})
        : nodes_(std::move(nodes)), output_(std::move(output)), shared_(std::move(shared_groups)),
          config_(std::move(config)) {
        index_nodes();
        validate_structure();
    }

    const std::vector<LayerSpec>& nodes() const { return nodes_; }
    const std::string& output() const { return output_; }
    const std::string& input() const { return nodes_.front().id; }
    const std::vector<std::vector<std::string>>& shared_groups() const { return shared_; }
    /// Architecture knobs the graph was built from.
    const std::map<std::string, std::string>& config() const { return config_; }

    std::size_t size() const { return nodes_.size(); }
    bool contains(const std::string& id) const { return index_.count(id) != 0; }

    std::size_t index_of(const std::string& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) fail(ErrorCode::graph, "no node named '" + id + "'");
        return it->second;
    }

    const LayerSpec& node(const std::string& id) const { return nodes_[index_of(id)]; }
    std::size_t output_index() const { return index_of(output_); }

    /// Node that owns the parameters of `id` (itself unless shared).
    const std::string& canonical(const std::string& id) const {
        auto it = canonical_.find(id);
        return it == canonical_.end() ? id : it->second;
    }

    std::vector<std::size_t> consumers(std::size_t index) const {
        std::vector<std::size_t> out;
        const std::string& id = nodes_[index].id;
        for (std::size_t i = index + 1; i < nodes_.size(); ++i) {
            const auto& in = nodes_[i].inputs;
            if (std::find(in.begin(), in.end(), id) != in.end()) out.push_back(i);
        }
        return out;
    }

    /// Parameter slots in node order, one entry per canonical owner.
    std::vector<SlotSpec> parameter_slots() const {
        std::vector<SlotSpec> slots;
        for (const LayerSpec& n : nodes_) {
            if (canonical(n.id) != n.id) continue;
            if (const auto* c = std::get_if<ConvLayer>(&n.kind)) {
                slots.push_back({n.id + ".weight", c->params.weight_shape(), n.id, n.block_tag});
                if (c->params.has_bias) slots.push_back({n.id + ".bias", c->params.bias_shape(), n.id, n.block_tag});
            } else if (const auto* d = std::get_if<DenseLayer>(&n.kind)) {
                slots.push_back({n.id + ".weight", Shape{d->out_features, d->in_features, 1, 1}, n.id, n.block_tag});
                if (d->has_bias) slots.push_back({n.id + ".bias", Shape{1, d->out_features, 1, 1}, n.id, n.block_tag});
            } else if (const auto* s = std::get_if<ScaleLayer>(&n.kind); s && s->learnable) {
                slots.push_back({n.id + ".value", Shape{1, 1, 1, 1}, n.id, n.block_tag});
            }
        }
        return slots;
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.nodes_ == b.nodes_ && a.output_ == b.output_ && a.shared_ == b.shared_ && a.config_ == b.config_;
    }

private:
    void index_nodes() {
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            if (nodes_[i].id.empty()) fail(ErrorCode::graph, "node " + std::to_string(i) + " has an empty id");
            if (!index_.emplace(nodes_[i].id, i).second) fail(ErrorCode::graph, "duplicate node id '" + nodes_[i].id + "'");
        }
    }

    void validate_structure() {
        if (nodes_.empty() || !std::holds_alternative<InputLayer>(nodes_.front().kind)) {
            fail(ErrorCode::graph, "graph must start with an input node");
        }
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const LayerSpec& n = nodes_[i];
            if (i > 0 && std::holds_alternative<InputLayer>(n.kind)) {
                fail(ErrorCode::graph, "node '" + n.id + "': only one input node is allowed");
            }
            for (const std::string& in : n.inputs) {
                auto it = index_.find(in);
                if (it == index_.end()) fail(ErrorCode::graph, "node '" + n.id + "': dangling input '" + in + "'");
                if (it->second >= i) {
                    fail(ErrorCode::graph, "node '" + n.id + "': input '" + in + "' is not an earlier node (cycle or order violation)");
                }
            }
        }
        if (!contains(output_)) fail(ErrorCode::graph, "output '" + output_ + "' is not a node");

        for (const auto& group : shared_) {
            if (group.size() < 2) fail(ErrorCode::graph, "shared group needs at least two members");
            std::string canon;
            std::size_t best = nodes_.size();
            const ConvParams* ref = nullptr;
            for (const std::string& id : group) {
                const std::size_t idx = index_of(id);
                const auto* c = std::get_if<ConvLayer>(&nodes_[idx].kind);
                if (!c) fail(ErrorCode::graph, "shared group member '" + id + "' is not a conv");
                if (ref && !(c->params == *ref)) {
                    fail(ErrorCode::graph, "shared group member '" + id + "' has different conv params");
                }
                ref = &c->params;
                if (canonical_.count(id)) fail(ErrorCode::graph, "node '" + id + "' is in two shared groups");
                if (idx < best) {
                    best = idx;
                    canon = id;
                }
            }
            for (const std::string& id : group) canonical_[id] = canon;
        }
    }

    std::vector<LayerSpec> nodes_;
    std::string output_;
    std::vector<std::vector<std::string>> shared_;
    std::map<std::string, std::string> config_;
    std::unordered_map<std::string, std::size_t> index_;
    std::unordered_map<std::string, std::string> canonical_;
};

/// Incremental construction with channel bookkeeping, used by every builder.
class GraphBuilder {
public:
    explicit GraphBuilder(std::int64_t in_channels, std::string input_id = "input") {
        add(input_id, InputLayer{in_channels}, {}, "Input", in_channels);
    }

    std::int64_t channels(const std::string& id) const {
        auto it = channels_.find(id);
        if (it == channels_.end()) fail(ErrorCode::graph, "builder: unknown node '" + id + "'");
        return it->second;
    }

    std::string input() const { return nodes_.front().id; }

    std::string conv(const std::string& id, const std::string& in, ConvParams p, const std::string& tag) {
        if (channels(in) != p.in_channels) {
            fail(ErrorCode::graph, "builder: conv '" + id + "' expects " + std::to_string(p.in_channels) +
                                       " channels, '" + in + "' has " + std::to_string(channels(in)));
        }
        p.validate();
        const std::int64_t out = p.out_channels;
        return add(id, ConvLayer{p}, {in}, tag, out);
    }

    /// Same-size k x k conv from `in` to `out` channels.
    std::string conv(const std::string& id, const std::string& in, std::int64_t out, std::int64_t k,
                     const std::string& tag, bool bias = true, std::int64_t dilation = 1,
                     PadMode mode = PadMode::zero) {
        return conv(id, in, same_conv(channels(in), out, k, dilation, bias, mode), tag);
    }

    std::string act(const std::string& id, const std::string& in, Activation a, const std::string& tag) {
        return add(id, ActivationLayer{a}, {in}, tag, channels(in));
    }

    std::string pixel_shuffle(const std::string& id, const std::string& in, std::int64_t r, const std::string& tag) {
        if (channels(in) % (r * r) != 0) {
            fail(ErrorCode::graph, "builder: pixel_shuffle '" + id + "' input channels " +
                                       std::to_string(channels(in)) + " not divisible by " + std::to_string(r * r));
        }
        return add(id, PixelShuffleLayer{r}, {in}, tag, channels(in) / (r * r));
    }

    std::string resize(const std::string& id, const std::string& in, Scale s, ResizeOptions opt,
                       const std::string& tag) {
        return add(id, ResizeLayer{s, opt}, {in}, tag, channels(in));
    }

    std::string gap(const std::string& id, const std::string& in, const std::string& tag) {
        return add(id, GlobalAvgPoolLayer{}, {in}, tag, channels(in));
    }

    std::string concat(const std::string& id, const std::vector<std::string>& ins, const std::string& tag) {
        std::int64_t total = 0;
        for (const auto& in : ins) total += channels(in);
        return add(id, ConcatLayer{}, ins, tag, total);
    }

    std::string split(const std::string& id, const std::string& in, std::vector<std::int64_t> sizes,
                      std::int64_t take, const std::string& tag) {
        const std::int64_t out = sizes.at(static_cast<std::size_t>(take));
        return add(id, SplitLayer{std::move(sizes), take}, {in}, tag, out);
    }

    std::string add_nodes(const std::string& id, const std::vector<std::string>& ins, const std::string& tag) {
        return add(id, AddLayer{}, ins, tag, channels(ins.front()));
    }

    std::string mul(const std::string& id, const std::string& x, const std::string& gate, const std::string& tag) {
        return add(id, MulLayer{}, {x, gate}, tag, channels(x));
    }

    std::string scale(const std::string& id, const std::string& in, bool learnable, float init,
                      const std::string& tag) {
        return add(id, ScaleLayer{learnable, init}, {in}, tag, channels(in));
    }

    std::string dense(const std::string& id, const std::string& in, std::int64_t out, bool bias,
                      const std::string& tag) {
        return add(id, DenseLayer{channels(in), out, bias}, {in}, tag, out);
    }

    void share(std::vector<std::string> group) { shared_.push_back(std::move(group)); }

    void set_config(std::map<std::string, std::string> config) { config_ = std::move(config); }

    Graph finish(const std::string& output) && {
        return Graph(std::move(nodes_), output, std::move(shared_), std::move(config_));
    }

private:
    std::string add(const std::string& id, LayerKind kind, std::vector<std::string> inputs, const std::string& tag,
                    std::int64_t out_channels) {
        if (!channels_.emplace(id, out_channels).second) fail(ErrorCode::graph, "builder: duplicate id '" + id + "'");
        nodes_.push_back(LayerSpec{id, std::move(kind), std::move(inputs), tag});
        return id;
    }

    std::vector<LayerSpec> nodes_;
    std::vector<std::vector<std::string>> shared_;
    std::map<std::string, std::string> config_;
    std::unordered_map<std::string, std::int64_t> channels_;
};

}  // namespace srzoo
