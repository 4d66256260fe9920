#include <doctest.h>

#include "mmtnc/butterfly.hpp"
#include "mmtnc/error.hpp"
#include "mmtnc/maxflow.hpp"
#include "oracles.hpp"

using namespace mmtnc;

TEST_CASE("unit-capacity max-flow equals brute-force min cut on random DAGs") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t nodes = 3 + rng() % 6;
        std::vector<std::pair<std::size_t, std::size_t>> arcs;
        FlowNetwork net(nodes);
        for (std::size_t a = 0; a < nodes; ++a)
            for (std::size_t b = a + 1; b < nodes; ++b)
                if (rng() % 2) {
                    arcs.emplace_back(a, b);
                    net.add_arc(a, b);
                }
        const std::size_t src[] = {0};
        CAPTURE(trial);
        CHECK(net.max_flow(src, nodes - 1) == oracle::min_cut(nodes, arcs, 0, nodes - 1));
    }
}

TEST_CASE("small networks") {
    FlowNetwork path(3);
    path.add_arc(0, 1);
    path.add_arc(1, 2);
    const std::size_t a[] = {0};
    CHECK(path.max_flow(a, 2) == 1);

    FlowNetwork isolated(3);
    isolated.add_arc(0, 1);
    CHECK(isolated.max_flow(a, 2) == 0);
    CHECK_THROWS_AS(isolated.max_flow(a, 0), InvalidParameter);

    FlowNetwork parallel(2);
    parallel.add_arc(0, 1, 2);
    parallel.add_arc(0, 1, 3);
    CHECK(parallel.max_flow(a, 1) == 5);
    CHECK(parallel.max_flow(a, 1) == 5);  // queries leave the network untouched
}

TEST_CASE("butterfly max-flow") {
    std::vector<std::pair<std::size_t, std::size_t>> arcs;
    for (const auto& e : butterfly::edges()) arcs.emplace_back(e.from, e.to);
    CHECK(butterfly::max_flow_from_source(4) == 2);
    CHECK(oracle::min_cut(butterfly::kNodes, arcs, 0, 4) == 2);
    CHECK(butterfly::max_flow_from_source(butterfly::kSinkA) == 2);
    CHECK(butterfly::max_flow_from_source(butterfly::kSinkB) == 1);
}

TEST_CASE("max-flow on MMT graphs is bounded by degree") {
    const auto g = build_mmt(2);
    const ProcessorId s{1, 1, 1, 1}, t{2, 2, 2, 2};
    const ProcessorId src[] = {s};
    const long flow = max_flow(g, src, t);
    CHECK(flow >= 1);
    CHECK(flow <= static_cast<long>(g.neighbors(t).size()));
    CHECK(flow <= static_cast<long>(g.neighbors(s).size()));
}
