#include <doctest.h>

#include <algorithm>
#include <random>

#include "sinkpop/exact.hpp"
#include "sinkpop/popper.hpp"
#include "sinkpop/stats.hpp"

using namespace sinkpop;

namespace {

Orientation lollipop_sfo(const Multigraph& lol) {
    // the unique SFO orients every path edge toward the self-loop end
    Orientation o(lol.edge_count());
    for (EdgeId e = 0; e < lol.edge_count(); ++e)
        o.set_bit(e, lol.edge(e).is_self_loop() ? 0 : 1);
    return o;
}

} // namespace

TEST_CASE("lollipop(4) always lands on its unique SFO") {
    Multigraph g = make_lollipop(4);
    Orientation expect = lollipop_sfo(g);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        PopResult r = sample_fast(g, seed, ChoiceRule::QueueFifo);
        CHECK(r.sfo == expect);
        CHECK(is_sfo(g, r.sfo));
    }
}

TEST_CASE("cycle(1) needs no pops") {
    Multigraph g = make_cycle(1);
    PopResult r = sample_fast(g, 9, ChoiceRule::MinVertexId);
    CHECK(r.tau == 0);
    CHECK(r.pop_work == 0);
    CHECK(is_sfo(g, r.sfo));
}

TEST_CASE("a tree component is refused with its members named") {
    std::vector<std::pair<int, int>> edges{{0, 1}};
    Multigraph g = Multigraph::build(2, edges);
    try {
        sample_fast(g, 1, ChoiceRule::QueueFifo);
        CHECK(false);
    } catch (const NotInClassSError& e) {
        REQUIRE(e.tree_components().size() == 1);
        CHECK(e.tree_components()[0] == std::vector<VertexId>{0, 1});
    }
}

TEST_CASE("scripted stacks on theta(2): one pop at v1") {
    // depth 0 points both edges into v1; depth 1 gives e0 -> v0 and e1 -> v1
    Multigraph g = make_theta(2);
    StackSource src(0);
    src.set_override(0, 0, 1);
    src.set_override(1, 0, 1);
    src.set_override(0, 1, 0);
    src.set_override(1, 1, 1);
    PopperConfig cfg;
    cfg.record_sequence = true;
    PopResult r = sample_stacked(g, src, ChoiceRule::QueueFifo, cfg);
    CHECK(r.tau == 1);
    REQUIRE(r.popped_sequence.has_value());
    CHECK(*r.popped_sequence == std::vector<VertexId>{1});
    CHECK(r.sfo.bit(0) == 0);
    CHECK(r.sfo.bit(1) == 1);
    CHECK(is_sfo(g, r.sfo));
}

TEST_CASE("a sink-free depth-0 orientation stops immediately") {
    Multigraph g = make_cycle(4);
    Orientation rotation(4);
    for (EdgeId e = 0; e < 4; ++e) rotation.set_bit(e, 1);
    StackSource src(31);
    src.override_depth0(g, rotation);
    PopResult r = sample_stacked(g, src, ChoiceRule::LifoStack);
    CHECK(r.tau == 0);
    CHECK(r.sfo == rotation);
}

TEST_CASE("diamond: all four rules agree pathwise on shared stacks") {
    const ChoiceRule rules[] = {ChoiceRule::QueueFifo, ChoiceRule::MinVertexId,
                                ChoiceRule::LifoStack,
                                ChoiceRule::UniformRandomSink};
    std::mt19937_64 rng(555);
    for (int trial = 0; trial < 60; ++trial) {
        Multigraph g = trial % 3 == 0 ? make_random(4 + trial % 4, 7, rng())
                       : trial % 3 == 1 ? make_cycle(3 + trial % 5)
                                        : make_theta(2 + trial % 4);
        StackSource src(rng());
        PopResult base = sample_stacked(g, src, rules[0]);
        for (int k = 1; k < 4; ++k) {
            PopResult other = sample_stacked(g, src, rules[k]);
            CHECK(other.tau == base.tau);
            CHECK(other.q == base.q);
            CHECK(other.sfo == base.sfo);
        }
    }
}

TEST_CASE("replaying the pop sequence shows every pop is legal") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        Multigraph g = make_random(5, 8, rng());
        StackSource src(rng());
        PopperConfig cfg;
        cfg.record_sequence = true;
        PopResult r = sample_stacked(g, src, ChoiceRule::UniformRandomSink, cfg);

        StackPointer ptr(g);
        for (VertexId v : *r.popped_sequence) {
            Orientation now = current_orientation(src, ptr, g);
            CHECK(is_sink(g, now, v));
            ptr.pop_at(g, v);
        }
        Orientation final = current_orientation(src, ptr, g);
        CHECK(is_sfo(g, final));
        CHECK(final == r.sfo);
        CHECK(r.tau == r.popped_sequence->size());

        // q is the multiset of the sequence and pop_work sums degrees
        std::vector<std::uint64_t> q(g.vertex_count(), 0);
        std::uint64_t work = 0;
        for (VertexId v : *r.popped_sequence) {
            ++q[v];
            work += static_cast<std::uint64_t>(g.degree(v));
        }
        CHECK(q == r.q);
        CHECK(work == r.pop_work);
    }
}

TEST_CASE("a run is a pure function of (graph, source, rule)") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        Multigraph g = make_random(5, 8, rng());
        StackSource src(rng());
        for (ChoiceRule rule : {ChoiceRule::QueueFifo,
                                ChoiceRule::UniformRandomSink}) {
            PopResult a = sample_stacked(g, src, rule);
            PopResult b = sample_stacked(g, src, rule);
            CHECK(a.tau == b.tau);
            CHECK(a.q == b.q);
            CHECK(a.sfo == b.sfo);
        }
    }
}

TEST_CASE("vertices with self-loops are never popped") {
    Multigraph g = make_lollipop(5);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        PopResult r = sample_fast(g, seed, ChoiceRule::QueueFifo);
        CHECK(r.q[4] == 0);
    }
}

TEST_CASE("pop cap aborts instead of returning a biased sample") {
    Multigraph g = make_theta(2);
    StackSource src(0);
    src.set_override(0, 0, 1); // force a sink at v1
    src.set_override(1, 0, 1);
    PopperConfig cfg;
    cfg.max_pops = 0;
    try {
        sample_stacked(g, src, ChoiceRule::QueueFifo, cfg);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::PopCapExceeded);
    }
}

TEST_CASE("coupled run of a graph with itself is the same process") {
    Multigraph g = make_cycle(4);
    StackSource src(17);
    auto [rg, rh] = coupled_run(g, g, src, ChoiceRule::QueueFifo);
    CHECK(rg.tau == rh.tau);
    CHECK(rg.q == rh.q);
    CHECK(rg.sfo == rh.sfo);
}

TEST_CASE("monotonicity: subgraph pops at least as often, pathwise") {
    // g = cycle(3) plus a parallel edge, h = cycle(3)
    std::vector<std::pair<int, int>> ge{{0, 1}, {1, 2}, {2, 0}, {0, 1}};
    Multigraph g = Multigraph::build(3, ge);
    Multigraph h = make_cycle(3);
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        StackSource src(seed);
        auto [rg, rh] = coupled_run(g, h, src, ChoiceRule::QueueFifo);
        for (VertexId v = 0; v < 3; ++v) CHECK(rh.q[v] >= rg.q[v]);
    }
}

TEST_CASE("subgraph map wants an order-preserving edge subsequence") {
    Multigraph g = make_cycle(3);
    std::vector<std::pair<int, int>> he{{1, 2}, {0, 1}}; // out of order
    Multigraph h = Multigraph::build(3, he);
    CHECK_THROWS_AS(subgraph_edge_map(g, h), Error);

    std::vector<std::pair<int, int>> ok{{0, 1}, {2, 0}};
    std::vector<EdgeId> map = subgraph_edge_map(g, Multigraph::build(3, ok));
    CHECK(map == std::vector<EdgeId>{0, 2});
}

TEST_CASE("sampled SFO frequencies are uniform (chi-square oracle check)") {
    Multigraph g = make_cycle(3);
    SfoCensus census = enumerate_sfos(g);
    REQUIRE(census.count == 2);
    std::vector<std::uint64_t> counts(2, 0);
    const std::uint64_t samples = 20000;
    for (std::uint64_t i = 0; i < samples; ++i) {
        PopResult r = sample_fast(g, i, ChoiceRule::QueueFifo);
        ++counts[r.sfo == census.members[0] ? 0 : 1];
    }
    ChiSquareResult chi = chi_square_uniform(counts, 1e-3);
    CHECK(chi.pass);
}

TEST_CASE("fast and stacked samplers agree in distribution (mean tau)") {
    Multigraph g = make_theta(3);
    RunningStat fast, stacked;
    for (std::uint64_t i = 0; i < 20000; ++i) {
        fast.add(static_cast<double>(
            sample_fast(g, i, ChoiceRule::QueueFifo).tau));
        stacked.add(static_cast<double>(
            sample_stacked(g, StackSource(i ^ 0xabcdef), ChoiceRule::QueueFifo)
                .tau));
    }
    const double gap = std::abs(fast.mean() - stacked.mean());
    const double se = std::sqrt(fast.standard_error() * fast.standard_error() +
                                stacked.standard_error() *
                                    stacked.standard_error());
    CHECK(gap <= 4.0 * se);
}
