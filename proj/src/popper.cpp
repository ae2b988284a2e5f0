#include "sinkpop/popper.hpp"

#include <deque>
#include <random>
#include <set>
#include <sstream>

namespace sinkpop {

const char* to_string(ChoiceRule rule) {
    switch (rule) {
        case ChoiceRule::QueueFifo: return "queue-fifo";
        case ChoiceRule::MinVertexId: return "min-vertex-id";
        case ChoiceRule::LifoStack: return "lifo-stack";
        case ChoiceRule::UniformRandomSink: return "uniform-random-sink";
    }
    return "?";
}

std::optional<ChoiceRule> rule_from_string(const std::string& name) {
    if (name == "queue-fifo" || name == "fifo") return ChoiceRule::QueueFifo;
    if (name == "min-vertex-id" || name == "min") return ChoiceRule::MinVertexId;
    if (name == "lifo-stack" || name == "lifo") return ChoiceRule::LifoStack;
    if (name == "uniform-random-sink" || name == "random")
        return ChoiceRule::UniformRandomSink;
    return std::nullopt;
}

namespace {

constexpr std::uint64_t kAuxStreamSalt = 0x5153c347ab65f0d1ULL;

/// Holds the current sinks; each sink is present at most once, because no two
/// sinks ever share an edge and a vertex only becomes a sink at the moment
/// its out-degree drops to zero.
class SinkScheduler {
public:
    SinkScheduler(ChoiceRule rule, std::uint64_t aux_seed)
        : rule_(rule), aux_(aux_seed) {}

    void push(VertexId v) {
        switch (rule_) {
            case ChoiceRule::QueueFifo: fifo_.push_back(v); break;
            case ChoiceRule::MinVertexId: ordered_.insert(v); break;
            case ChoiceRule::LifoStack: stack_.push_back(v); break;
            case ChoiceRule::UniformRandomSink: bag_.push_back(v); break;
        }
    }

    bool empty() const {
        switch (rule_) {
            case ChoiceRule::QueueFifo: return fifo_.empty();
            case ChoiceRule::MinVertexId: return ordered_.empty();
            case ChoiceRule::LifoStack: return stack_.empty();
            case ChoiceRule::UniformRandomSink: return bag_.empty();
        }
        return true;
    }

    VertexId pop() {
        switch (rule_) {
            case ChoiceRule::QueueFifo: {
                VertexId v = fifo_.front();
                fifo_.pop_front();
                return v;
            }
            case ChoiceRule::MinVertexId: {
                VertexId v = *ordered_.begin();
                ordered_.erase(ordered_.begin());
                return v;
            }
            case ChoiceRule::LifoStack: {
                VertexId v = stack_.back();
                stack_.pop_back();
                return v;
            }
            case ChoiceRule::UniformRandomSink: {
                std::uniform_int_distribution<std::size_t> pick(0, bag_.size() - 1);
                std::size_t i = pick(aux_);
                VertexId v = bag_[i];
                bag_[i] = bag_.back();
                bag_.pop_back();
                return v;
            }
        }
        return -1;
    }

private:
    ChoiceRule rule_;
    std::deque<VertexId> fifo_;
    std::set<VertexId> ordered_;
    std::vector<VertexId> stack_;
    std::vector<VertexId> bag_;
    std::mt19937_64 aux_;
};

struct RngDriver {
    std::mt19937_64 rng;

    explicit RngDriver(std::uint64_t seed) : rng(seed) {}
    std::uint8_t initial_bit(EdgeId) { return static_cast<std::uint8_t>(rng() & 1); }
    std::uint8_t reorient(EdgeId) { return static_cast<std::uint8_t>(rng() & 1); }
};

struct StackDriver {
    const StackSource& src;
    StackPointer ptr;
    const std::vector<EdgeId>* id_map; // run edge id -> stack edge id; null = identity

    StackDriver(const Multigraph& g, const StackSource& s,
                const std::vector<EdgeId>* map = nullptr)
        : src(s), ptr(g), id_map(map) {}

    EdgeId mapped(EdgeId e) const { return id_map ? (*id_map)[e] : e; }

    std::uint8_t initial_bit(EdgeId e) {
        return static_cast<std::uint8_t>(src.raw_bit(mapped(e), 0));
    }
    std::uint8_t reorient(EdgeId e) {
        return static_cast<std::uint8_t>(src.raw_bit(mapped(e), ptr.advance(e)));
    }
};

template <class Driver>
PopResult run_popping(const Multigraph& g, Driver& driver, ChoiceRule rule,
                      const PopperConfig& cfg, std::uint64_t aux_seed) {
    require_class_s(g, "sink popping");

    const int n = g.vertex_count();
    Orientation o(g.edge_count());
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        o.set_bit(e, g.edge(e).is_self_loop() ? 0 : driver.initial_bit(e));

    std::vector<int> out_deg = out_degrees(g, o);
    SinkScheduler sched(rule, aux_seed);
    for (VertexId v = 0; v < n; ++v)
        if (g.degree(v) > 0 && out_deg[v] == 0) sched.push(v);

    PopResult result;
    result.q.assign(n, 0);
    if (cfg.record_sequence) result.popped_sequence.emplace();

    const std::uint64_t cap =
        cfg.max_pops.value_or(64ULL * static_cast<std::uint64_t>(n) * n);

    while (!sched.empty()) {
        if (result.tau >= cap) {
            std::ostringstream msg;
            msg << "pop cap " << cap << " exceeded; no sample produced";
            throw Error(ErrorCode::PopCapExceeded, msg.str());
        }
        VertexId v = sched.pop();
        // every incident edge points into the sink v; none is a self-loop
        for (EdgeId e : g.incident(v)) {
            VertexId u = g.edge(e).other(v);
            o.set_bit(e, driver.reorient(e));
            if (o.tail(g, e) == v) {
                ++out_deg[v];
                if (--out_deg[u] == 0) sched.push(u);
            }
        }
        if (out_deg[v] == 0) sched.push(v); // popped vertex may be a sink again
        ++result.q[v];
        ++result.tau;
        result.pop_work += static_cast<std::uint64_t>(g.degree(v));
        if (result.popped_sequence) result.popped_sequence->push_back(v);
    }

    result.sfo = std::move(o);
    return result;
}

} // namespace

PopResult sample_fast(const Multigraph& g, std::uint64_t seed, ChoiceRule rule,
                      const PopperConfig& cfg) {
    RngDriver driver(seed);
    return run_popping(g, driver, rule, cfg,
                       detail::mix64(seed ^ kAuxStreamSalt));
}

PopResult sample_stacked(const Multigraph& g, const StackSource& src,
                         ChoiceRule rule, const PopperConfig& cfg) {
    StackDriver driver(g, src);
    return run_popping(g, driver, rule, cfg,
                       detail::mix64(src.seed() ^ kAuxStreamSalt));
}

std::vector<EdgeId> subgraph_edge_map(const Multigraph& g, const Multigraph& h) {
    if (h.vertex_count() > g.vertex_count())
        throw Error(ErrorCode::NotASubgraph, "subgraph has more vertices");
    std::vector<EdgeId> map;
    map.reserve(h.edge_count());
    EdgeId gi = 0;
    for (EdgeId j = 0; j < h.edge_count(); ++j) {
        const Edge& want = h.edge(j);
        while (gi < g.edge_count() &&
               !(g.edge(gi).a == want.a && g.edge(gi).b == want.b))
            ++gi;
        if (gi == g.edge_count()) {
            std::ostringstream msg;
            msg << "edge " << j << " = (" << want.a << "," << want.b
                << ") of h is not an order-preserving match in g";
            throw Error(ErrorCode::NotASubgraph, msg.str());
        }
        map.push_back(gi++);
    }
    return map;
}

std::pair<PopResult, PopResult> coupled_run(const Multigraph& g,
                                            const Multigraph& h,
                                            const StackSource& src,
                                            ChoiceRule rule,
                                            const PopperConfig& cfg) {
    std::vector<EdgeId> map = subgraph_edge_map(g, h);
    require_class_s(g, "coupled run (g)");
    require_class_s(h, "coupled run (h)");

    StackDriver driver_g(g, src);
    PopResult rg = run_popping(g, driver_g, rule, cfg,
                               detail::mix64(src.seed() ^ kAuxStreamSalt));
    StackDriver driver_h(h, src, &map);
    PopResult rh = run_popping(h, driver_h, rule, cfg,
                               detail::mix64(src.seed() ^ kAuxStreamSalt));
    return {std::move(rg), std::move(rh)};
}

} // namespace sinkpop
