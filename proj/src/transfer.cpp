#include "mmtnc/transfer.hpp"

#include <deque>

#include "mmtnc/error.hpp"

namespace mmtnc {

CodedNetwork CodedNetwork::with_shape(Field field, std::size_t nodes, std::vector<NetEdge> edges,
                                      std::vector<std::size_t> source_node) {
    CodedNetwork net;
    net.field = std::move(field);
    net.node_count = nodes;
    net.edges = std::move(edges);
    net.source_node = std::move(source_node);
    net.a = Matrix(net.source_node.size(), net.edges.size());
    net.f = Matrix(net.edges.size(), net.edges.size());
    return net;
}

void CodedNetwork::randomize(Rng& rng, bool nonzero) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
        for (std::size_t i = 0; i < source_node.size(); ++i)
            if (source_node[i] == edges[e].from) a(i, e) = field.sample(rng, nonzero);
        for (std::size_t l = 0; l < edges.size(); ++l)
            if (edges[l].to == edges[e].from) f(l, e) = field.sample(rng, nonzero);
    }
}

std::vector<std::size_t> topological_edge_order(const CodedNetwork& net) {
    const std::size_t nodes = net.node_count;
    std::vector<std::size_t> indegree(nodes, 0);
    std::vector<std::vector<std::size_t>> out(nodes);
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
        const auto& ed = net.edges[e];
        if (ed.from >= nodes || ed.to >= nodes) throw InvalidParameter("edge endpoint out of range");
        if (ed.from == ed.to) throw NotAcyclic("self-loop on node " + std::to_string(ed.from));
        ++indegree[ed.to];
        out[ed.from].push_back(e);
    }
    std::deque<std::size_t> ready;
    for (std::size_t v = 0; v < nodes; ++v)
        if (indegree[v] == 0) ready.push_back(v);
    std::vector<std::size_t> order;
    std::size_t visited = 0;
    while (!ready.empty()) {
        auto v = ready.front();
        ready.pop_front();
        ++visited;
        for (auto e : out[v]) {
            order.push_back(e);
            if (--indegree[net.edges[e].to] == 0) ready.push_back(net.edges[e].to);
        }
    }
    if (visited != nodes) throw NotAcyclic("coded network contains a directed cycle");
    return order;
}

TransferMatrices build_transfer_matrices(const CodedNetwork& net) {
    const std::size_t E = net.edges.size();
    const std::size_t r = net.sources();
    if (net.a.rows() != r || net.a.cols() != E || net.f.rows() != E || net.f.cols() != E)
        throw InvalidParameter("coefficient matrices have the wrong shape");
    for (auto s : net.source_node)
        if (s >= net.node_count) throw InvalidParameter("source node out of range");

    TransferMatrices tm;
    tm.edge_order = topological_edge_order(net);
    tm.a = Matrix(r, E);
    tm.f = Matrix(E, E);
    for (std::size_t e = 0; e < E; ++e) {
        for (std::size_t i = 0; i < r; ++i) {
            if (net.a(i, e) == 0) continue;
            if (net.source_node[i] != net.edges[e].from)
                throw InvalidParameter("a coefficient where a(i) != o(e)");
            tm.a(i, e) = net.a(i, e);
        }
        for (std::size_t l = 0; l < E; ++l) {
            if (net.f(l, e) == 0) continue;
            if (net.edges[l].to != net.edges[e].from)
                throw InvalidParameter("f coefficient where d(l) != o(e)");
            tm.f(l, e) = net.f(l, e);
        }
    }
    std::map<std::size_t, std::vector<std::size_t>> incoming;
    for (std::size_t e = 0; e < E; ++e) incoming[net.edges[e].to].push_back(e);
    for (const auto& [beta, links] : incoming) {
        Matrix b(E, links.size());
        for (std::size_t k = 0; k < links.size(); ++k) b(links[k], k) = 1;
        tm.b.emplace(beta, std::move(b));
    }
    return tm;
}

Matrix receiver_observation(const Field& field, const TransferMatrices& tm, std::size_t beta) {
    const std::size_t E = tm.f.rows();
    auto it = tm.b.find(beta);
    if (it == tm.b.end()) return Matrix(tm.a.rows(), 0);

    // (I + F + F^2 + ...) terminates because F is nilpotent on an acyclic network
    Matrix sum = Matrix::identity(E);
    Matrix power = Matrix::identity(E);
    for (std::size_t k = 1; k <= E; ++k) {
        power = multiply(field, power, tm.f);
        if (power.is_zero()) break;
        if (k == E) throw NotAcyclic("link-to-link matrix is not nilpotent");
        sum = add(sum, power);
    }
    return multiply(field, multiply(field, tm.a, sum), it->second);
}

std::vector<CodedPacket> simulate_packets(const CodedNetwork& net, const Generation& gen,
                                          std::span<const std::vector<Symbol>> messages) {
    if (gen.r != net.sources() || messages.size() != gen.r)
        throw InvalidParameter("simulate_packets: one message per source process required");
    const auto order = topological_edge_order(net);
    std::vector<CodedPacket> sources;
    for (std::size_t i = 0; i < gen.r; ++i) sources.push_back(source_packet(gen, i, messages[i]));

    std::vector<CodedPacket> on_edge(net.edges.size());
    for (auto e : order) {
        std::vector<CodedPacket> inputs;
        std::vector<Symbol> local;
        for (std::size_t i = 0; i < gen.r; ++i)
            if (net.source_node[i] == net.edges[e].from) {
                inputs.push_back(sources[i]);
                local.push_back(net.a(i, e));
            }
        for (std::size_t l = 0; l < net.edges.size(); ++l)
            if (net.edges[l].to == net.edges[e].from) {
                inputs.push_back(on_edge[l]);
                local.push_back(net.f(l, e));
            }
        on_edge[e] = recode(gen, inputs, local);
    }
    return on_edge;
}

}  // namespace mmtnc
