#include <doctest.h>

#include <set>
#include <sstream>

#include "mmtnc/error.hpp"
#include "mmtnc/topology.hpp"
#include "oracles.hpp"

using namespace mmtnc;

namespace {

ProcessorId P(int a, int b, int i, int j) {
    return {static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b), static_cast<std::uint16_t>(i),
            static_cast<std::uint16_t>(j)};
}

bool adjacent(const MmtGraph& g, ProcessorId a, ProcessorId b, LinkKind k) {
    for (const auto& nb : g.neighbors(a))
        if (nb.peer == b && nb.kind == k) return true;
    return false;
}

}  // namespace

TEST_CASE("node and link counts match the enumeration oracle") {
    for (unsigned n : {2u, 3u, 4u, 8u}) {
        CAPTURE(n);
        const auto g = build_mmt(n);
        CHECK(g.node_count() == std::size_t(n) * n * n * n);
        const auto m = graph_metrics(g, 3);
        std::size_t total = 0;
        for (int kind = 0; kind < 4; ++kind) {
            const auto fam = oracle::family(n, kind);
            CHECK(m.edge_count_by_kind[kind] == fam.size());
            total += fam.size();
            std::set<std::tuple<int, int, int, int, int, int, int, int>> expected(fam.begin(), fam.end());
            std::set<std::tuple<int, int, int, int, int, int, int, int>> actual;
            for (const auto& l : g.links()) {
                if (static_cast<int>(l.kind) != kind) continue;
                auto x = std::make_tuple(int(l.origin.alpha), int(l.origin.beta), int(l.origin.i), int(l.origin.j),
                                         int(l.destination.alpha), int(l.destination.beta),
                                         int(l.destination.i), int(l.destination.j));
                auto y = std::make_tuple(std::get<4>(x), std::get<5>(x), std::get<6>(x), std::get<7>(x),
                                         std::get<0>(x), std::get<1>(x), std::get<2>(x), std::get<3>(x));
                actual.insert(std::min(x, y));
            }
            CHECK(actual == expected);
        }
        CHECK(m.edge_count == total);
        CHECK(m.edge_count_by_kind[0] == std::size_t(n) * n * n * (n - 1));
        CHECK(m.edge_count_by_kind[2] == std::size_t(n) * n * n);
    }
}

TEST_CASE("appendix adjacencies are present in MMT(4)") {
    const auto g = build_mmt(4);
    CHECK(g.node_count() == 256);
    CHECK(adjacent(g, P(1, 1, 1, 1), P(1, 1, 1, 2), LinkKind::HorizontalIntrablock));
    CHECK(adjacent(g, P(1, 1, 1, 1), P(1, 1, 1, 3), LinkKind::HorizontalIntrablock));
    CHECK(adjacent(g, P(1, 1, 2, 1), P(1, 2, 1, 4), LinkKind::HorizontalInterblock));
    CHECK(adjacent(g, P(1, 1, 1, 2), P(2, 1, 4, 1), LinkKind::VerticalInterblock));
    CHECK(adjacent(g, P(1, 1, 1, 1), P(1, 1, 1, 4), LinkKind::HorizontalInterblock));
    CHECK(adjacent(g, P(1, 1, 1, 1), P(1, 1, 4, 1), LinkKind::VerticalInterblock));
    CHECK_FALSE(adjacent(g, P(1, 1, 1, 1), P(1, 1, 1, 4), LinkKind::HorizontalIntrablock));
}

TEST_CASE("adjacency is symmetric in MMT(2) and MMT(3)") {
    for (unsigned n : {2u, 3u}) {
        const auto g = build_mmt(n);
        for (std::size_t v = 0; v < g.node_count(); ++v) {
            const auto p = g.indexer().id(v);
            for (const auto& nb : g.neighbors(p)) CHECK(adjacent(g, nb.peer, p, nb.kind));
        }
    }
}

TEST_CASE("n = 2 keeps interblock links parallel to tree links") {
    const auto g = build_mmt(2);
    // P(1,1,1,1)-P(1,1,1,2) is both a row tree edge and a Def-3 boundary link
    CHECK(adjacent(g, P(1, 1, 1, 1), P(1, 1, 1, 2), LinkKind::HorizontalIntrablock));
    CHECK(adjacent(g, P(1, 1, 1, 1), P(1, 1, 1, 2), LinkKind::HorizontalInterblock));
}

TEST_CASE("MMT graphs are connected and metrics are sane") {
    for (unsigned n : {2u, 3u, 4u}) {
        const auto g = build_mmt(n);
        const auto d = bfs_distances(g, 0);
        for (auto x : d) CHECK(x != ~0u);
        const auto m = graph_metrics(g);
        CHECK_FALSE(m.diameter_is_lower_bound);
        unsigned ecc = 0;
        for (auto x : d) ecc = std::max(ecc, x);
        CHECK(m.bfs_diameter >= ecc);
        CHECK(m.max_degree <= 6);
        CHECK(m.bisection_upper_bound > 0);
    }
    const auto big = graph_metrics(build_mmt(8));
    CHECK(big.node_count == 4096);
    CHECK(big.diameter_is_lower_bound);
}

TEST_CASE("invalid constructions are rejected") {
    CHECK_THROWS_AS(build_mmt(1), InvalidParameter);
    const Link loop{P(1, 1, 1, 1), P(1, 1, 1, 1), LinkKind::HorizontalIntrablock};
    CHECK_THROWS_AS(MmtGraph(2, {loop}), InvalidParameter);
    const Link ok{P(1, 1, 1, 1), P(1, 1, 1, 2), LinkKind::HorizontalIntrablock};
    CHECK_THROWS_AS(MmtGraph(2, {ok, ok}), InvalidParameter);
    const Link wrong_kind{P(1, 1, 1, 1), P(1, 1, 2, 1), LinkKind::HorizontalIntrablock};
    CHECK_THROWS_AS(MmtGraph(2, {wrong_kind}), InvalidParameter);
    const Link outside{P(1, 1, 1, 1), P(1, 1, 1, 3), LinkKind::HorizontalIntrablock};
    CHECK_THROWS_AS(MmtGraph(2, {outside}), InvalidParameter);
    CHECK_THROWS_AS(build_mmt(2).neighbors(P(3, 1, 1, 1)), InvalidParameter);
    CHECK(parse_link_kind("VerticalInterblock") == LinkKind::VerticalInterblock);
    CHECK_THROWS_AS(parse_link_kind("Diagonal"), InvalidParameter);
}

TEST_CASE("indexer is a bijection in lexicographic order") {
    const Indexer ix(3);
    for (std::size_t k = 0; k < ix.count(); ++k) CHECK(ix.index(ix.id(k)) == k);
    CHECK(ix.index(P(1, 1, 1, 2)) == 1);
    CHECK(ix.index(P(2, 1, 1, 1)) == 27);
}

TEST_CASE("topology export round-trips and is deterministic") {
    for (unsigned n : {2u, 3u, 4u}) {
        const auto g = build_mmt(n);
        const auto text = export_topology(g);
        CHECK(text == export_topology(build_mmt(n)));
        std::istringstream in(text);
        const auto back = read_topology(in);
        CHECK(back == g);
        std::size_t node_lines = 0, link_lines = 0;
        std::istringstream lines(text);
        for (std::string line; std::getline(lines, line);) {
            node_lines += line.rfind("node ", 0) == 0;
            link_lines += line.rfind("link ", 0) == 0;
        }
        CHECK(node_lines == g.node_count());
        CHECK(link_lines == graph_metrics(g).edge_count);
    }
}

TEST_CASE("topology reader reports the offending line") {
    auto text = export_topology(build_mmt(2));
    const auto pos = text.find("link ");
    text.insert(pos, "link 1 1 1 1 9 9 9 9 Bogus\n");
    std::istringstream in(text);
    try {
        read_topology(in);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        std::size_t expected = 1;
        for (std::size_t k = 0; k < pos; ++k) expected += text[k] == '\n';
        CHECK(e.line() == expected);
    }
    std::istringstream empty("");
    CHECK_THROWS_AS(read_topology(empty), ParseError);
}
