#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "sinkpop/cycle_popper.hpp"
#include "sinkpop/exact.hpp"
#include "sinkpop/stats.hpp"

using namespace sinkpop;

TEST_CASE("a functional tree needs zero pops") {
    // arcs 1->0, 2->0, 3->1: already a directed spanning tree to root 0
    std::vector<std::pair<int, int>> arcs{{1, 0}, {2, 0}, {3, 1}};
    Digraph h = Digraph::build(4, arcs);
    DstResult r = sample_dst(h, 0, 42);
    CHECK(r.cycles_popped == 0);
    CHECK(r.tree.parent_arc == std::vector<ArcId>{-1, 0, 1, 2});
    CHECK(is_directed_spanning_tree(h, r.tree));
}

TEST_CASE("equal seeds give identical trees") {
    Digraph h = Digraph::bidirect(make_complete(5));
    DstResult a = sample_dst(h, 2, 1234);
    DstResult b = sample_dst(h, 2, 1234);
    CHECK(a.tree.parent_arc == b.tree.parent_arc);
}

TEST_CASE("bidirected triangle: uniform over its 3 trees") {
    Digraph h = Digraph::bidirect(make_cycle(3));
    auto trees = enumerate_dsts(h, 0);
    REQUIRE(trees.size() == 3);

    std::map<std::vector<ArcId>, std::size_t> index;
    for (std::size_t i = 0; i < trees.size(); ++i)
        index[trees[i].parent_arc] = i;
    std::vector<std::uint64_t> counts(trees.size(), 0);
    const std::uint64_t samples = 30000;
    for (std::uint64_t i = 0; i < samples; ++i) {
        DstResult r = sample_dst(h, 0, i);
        ++counts.at(index.at(r.tree.parent_arc));
    }
    CHECK(chi_square_uniform(counts, 1e-3).pass);
}

TEST_CASE("sampled trees are valid on random digraphs") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 3 + trial % 5;
        std::vector<std::pair<int, int>> arcs;
        // a ring keeps the root reachable, plus random chords
        for (int v = 0; v < n; ++v) arcs.emplace_back(v, (v + 1) % n);
        for (int extra = 0; extra < n; ++extra)
            arcs.emplace_back(static_cast<int>(rng() % n),
                              static_cast<int>(rng() % n));
        Digraph h = Digraph::build(n, arcs);
        DstResult r = sample_dst(h, static_cast<VertexId>(trial % n), rng());
        CHECK(is_directed_spanning_tree(h, r.tree));
    }
}

TEST_CASE("diamond: sweep order changes nothing with fixed stacks") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        Digraph h = Digraph::bidirect(make_complete(4 + trial % 3));
        const std::uint64_t seed = rng();
        CyclePopConfig asc;
        asc.record_cycles = true;
        asc.sweep = CycleSweep::AscendingVertex;
        CyclePopConfig desc = asc;
        desc.sweep = CycleSweep::DescendingVertex;

        DstResult a = sample_dst(h, 0, seed, asc);
        DstResult b = sample_dst(h, 0, seed, desc);
        CHECK(a.tree.parent_arc == b.tree.parent_arc);
        CHECK(a.cycles_popped == b.cycles_popped);
        auto ca = *a.cycles;
        auto cb = *b.cycles;
        std::sort(ca.begin(), ca.end());
        std::sort(cb.begin(), cb.end());
        CHECK(ca == cb);
    }
}

TEST_CASE("parallel arcs are distinct tree choices, sampled uniformly") {
    std::vector<std::pair<int, int>> arcs{{1, 0}, {1, 0}};
    Digraph h = Digraph::build(2, arcs);
    auto trees = enumerate_dsts(h, 0);
    REQUIRE(trees.size() == 2);
    std::vector<std::uint64_t> counts(2, 0);
    for (std::uint64_t i = 0; i < 20000; ++i)
        ++counts[sample_dst(h, 0, i).tree.parent_arc[1]];
    CHECK(chi_square_uniform(counts, 1e-3).pass);
}

TEST_CASE("unreachable root is refused") {
    std::vector<std::pair<int, int>> arcs{{1, 2}, {2, 1}}; // 1 and 2 never reach 0
    Digraph h = Digraph::build(3, arcs);
    try {
        sample_dst(h, 0, 7);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoSpanningTree);
    }
}

TEST_CASE("self-arcs pop as 1-cycles and terminate") {
    std::vector<std::pair<int, int>> arcs{{1, 1}, {1, 0}};
    Digraph h = Digraph::build(2, arcs);
    CyclePopConfig cfg;
    cfg.record_cycles = true;
    DstResult r = sample_dst(h, 0, 3, cfg);
    CHECK(is_directed_spanning_tree(h, r.tree));
    CHECK(r.tree.parent_arc[1] == 1);
}

TEST_CASE("arc list round trip and tree output format") {
    Digraph h = Digraph::bidirect(make_cycle(3));
    std::stringstream buf;
    write_arc_list(buf, h);
    Digraph h2 = read_arc_list(buf);
    REQUIRE(h2.arc_count() == h.arc_count());
    for (ArcId a = 0; a < h.arc_count(); ++a) {
        CHECK(h2.arc(a).from == h.arc(a).from);
        CHECK(h2.arc(a).to == h.arc(a).to);
    }

    DstResult r = sample_dst(h, 0, 11);
    std::stringstream out;
    write_tree(out, r.tree);
    int lines = 0;
    std::string line;
    while (std::getline(out, line))
        if (!line.empty()) ++lines;
    CHECK(lines == h.vertex_count() - 1);
}
