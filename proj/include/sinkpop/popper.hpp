#ifndef SINKPOP_POPPER_HPP
#define SINKPOP_POPPER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sinkpop/multigraph.hpp"
#include "sinkpop/stacks.hpp"

namespace sinkpop {

/// Policy for picking which current sink to pop. The outcome (tau, pop
/// multiset, final orientation) does not depend on the choice for fixed
/// stacks; the variants exist so that invariance is testable.
enum class ChoiceRule {
    QueueFifo,
    MinVertexId,
    LifoStack,
    UniformRandomSink,
};

const char* to_string(ChoiceRule rule);
std::optional<ChoiceRule> rule_from_string(const std::string& name);

struct PopperConfig {
    /// Hitting the cap aborts with PopCapExceeded, never a truncated sample.
    /// Default: 64 * n^2.
    std::optional<std::uint64_t> max_pops;
    bool record_sequence = false;
};

struct PopResult {
    Orientation sfo;
    std::uint64_t tau = 0;
    /// Per-vertex pop counts Q(G, v).
    std::vector<std::uint64_t> q;
    std::optional<std::vector<VertexId>> popped_sequence;
    /// Sum of deg(v) over pops: the graph-operation count.
    std::uint64_t pop_work = 0;
};

/// Production sampler: orient edges by fair coins, then repeatedly pop a sink
/// (re-randomizing all of its edges) until none remain. Keeps a sink list and
/// an out-degree table so each pop costs O(deg(v)). The output is exactly
/// uniform over the sink-free orientations of g.
PopResult sample_fast(const Multigraph& g, std::uint64_t seed, ChoiceRule rule,
                      const PopperConfig& cfg = {});

/// Same process driven by addressed stacks: fully deterministic given
/// (g, src, rule), identical to sample_fast in distribution.
PopResult sample_stacked(const Multigraph& g, const StackSource& src,
                         ChoiceRule rule, const PopperConfig& cfg = {});

/// Runs sink popping on g and on a subgraph h simultaneously, sharing stacks
/// on common edges. h's edge list must be an order-preserving subsequence of
/// g's (endpoints in the same order), so each h edge inherits the g edge id.
std::pair<PopResult, PopResult> coupled_run(const Multigraph& g,
                                            const Multigraph& h,
                                            const StackSource& src,
                                            ChoiceRule rule,
                                            const PopperConfig& cfg = {});

/// The canonical injection from h's edges into g's, or NotASubgraph.
std::vector<EdgeId> subgraph_edge_map(const Multigraph& g, const Multigraph& h);

} // namespace sinkpop

#endif
