#include "mmtnc/butterfly.hpp"

#include "mmtnc/error.hpp"
#include "mmtnc/maxflow.hpp"

namespace mmtnc::butterfly {

namespace {
constexpr std::size_t kSource = 0;
}

std::vector<NetEdge> edges() {
    return {{0, 1}, {0, 3}, {1, 4}, {3, 4}, {1, 2}, {4, 5}, {5, 2}, {5, 6}};
}

CodedNetwork network(const Field& field, const Zeta& zeta) {
    auto net = CodedNetwork::with_shape(field, kNodes, edges(), {kSource, kSource});
    net.a(0, 0) = zeta[0];
    net.a(1, 0) = zeta[1];
    net.a(0, 1) = zeta[2];
    net.a(1, 1) = zeta[3];
    net.f(0, 2) = 1;  // P2 forwards to P5
    net.f(0, 4) = 1;  // P2 forwards to P3
    net.f(1, 3) = 1;  // P4 forwards to P5
    net.f(2, 5) = zeta[4];
    net.f(3, 5) = zeta[5];
    net.f(5, 6) = 1;  // P6 forwards to P3
    net.f(5, 7) = 1;  // P6 forwards to P7
    return net;
}

long max_flow_from_source(std::size_t sink) {
    FlowNetwork net(kNodes);
    for (const auto& e : edges()) net.add_arc(e.from, e.to, 1);
    const std::size_t src[] = {kSource};
    return net.max_flow(src, sink);
}

RankBoundCase bound_case(const Trial& t, std::size_t rounds_done) {
    if (rounds_done == 0 || rounds_done > t.rounds.size())
        throw InvalidParameter("rounds_done out of range");
    RankBoundCase c;
    c.nodes = kNodes;
    c.atom_holders = {{kSource}, {kSource}};
    for (const auto& e : edges()) c.arcs.push_back({e.from, e.to, static_cast<long>(rounds_done)});
    const auto& ranks = t.rounds[rounds_done - 1].rank_after;
    c.ranks.assign(ranks.begin(), ranks.end());
    return c;
}

Trial run_trial(const Field& field, Rng& rng, const Options& opts) {
    if (opts.rounds == 0) throw InvalidParameter("butterfly trial needs at least one round");
    Trial t;
    const Generation gen(2, opts.payload_len, field);
    for (int k = 0; k < 2; ++k) {
        std::vector<Symbol> m(opts.payload_len);
        for (auto& s : m) s = field.sample(rng);
        t.messages.push_back(std::move(m));
    }

    std::vector<DecoderState> node(kNodes, DecoderState(gen));
    node[kSource].insert(source_packet(gen, 0, t.messages[0]));
    node[kSource].insert(source_packet(gen, 1, t.messages[1]));
    const auto edge_list = edges();

    for (std::size_t round = 0; round < opts.rounds; ++round) {
        RoundRecord rec;
        for (auto& z : rec.zeta) z = opts.force_ones ? Symbol{1} : field.sample(rng, opts.nonzero);
        const auto net = network(field, rec.zeta);
        rec.edge_packets = simulate_packets(net, gen, t.messages);
        for (std::size_t e = 0; e < edge_list.size(); ++e) node[edge_list[e].to].insert(rec.edge_packets[e]);
        for (std::size_t v = 0; v < kNodes; ++v) rec.rank_after[v] = node[v].rank();
        t.rounds.push_back(std::move(rec));
        if (!check_rank_bound(bound_case(t, round + 1)).empty()) ++t.rank_violations;
    }

    auto collect = [&](std::size_t sink) {
        std::vector<std::size_t> in;
        for (std::size_t e = 0; e < edge_list.size(); ++e)
            if (edge_list[e].to == sink) in.push_back(e);
        Matrix m(in.size() * t.rounds.size(), 2);
        std::size_t row = 0;
        for (const auto& rec : t.rounds)
            for (auto e : in) {
                m(row, 0) = rec.edge_packets[e].coeffs[0];
                m(row, 1) = rec.edge_packets[e].coeffs[1];
                ++row;
            }
        return m;
    };
    t.sink_a_matrix = collect(kSinkA);
    t.sink_b_matrix = collect(kSinkB);

    auto check = [&](std::size_t sink, bool& decoded, bool& correct) {
        auto solved = node[sink].solve();
        decoded = std::holds_alternative<std::vector<std::vector<Symbol>>>(solved);
        correct = decoded && std::get<0>(solved) == t.messages;
    };
    check(kSinkA, t.sink_a_decoded, t.sink_a_correct);
    check(kSinkB, t.sink_b_decoded, t.sink_b_correct);
    return t;
}

}  // namespace mmtnc::butterfly
