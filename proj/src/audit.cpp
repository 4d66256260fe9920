#include "mmtnc/audit.hpp"

#include "mmtnc/error.hpp"
#include "mmtnc/maxflow.hpp"

namespace mmtnc {

namespace {

// nodes [0, n) are the network; then one node per source; then the hub.
FlowNetwork layered(const RankBoundCase& c) {
    const std::size_t atoms = c.atom_holders.size();
    FlowNetwork net(c.nodes + atoms + 1);
    const std::size_t hub = c.nodes + atoms;
    for (std::size_t k = 0; k < atoms; ++k) {
        net.add_arc(hub, c.nodes + k, 1);
        for (auto h : c.atom_holders[k]) {
            if (h >= c.nodes) throw InvalidParameter("holder out of range");
            net.add_arc(c.nodes + k, h, 1);
        }
    }
    for (const auto& a : c.arcs) net.add_arc(a.from, a.to, a.packets);
    return net;
}

}  // namespace

long rank_bound(const RankBoundCase& c, std::size_t node) {
    const auto net = layered(c);
    const std::size_t hub = c.nodes + c.atom_holders.size();
    const std::size_t src[] = {hub};
    return net.max_flow(src, node);
}

std::vector<RankViolation> check_rank_bound(const RankBoundCase& c) {
    if (c.ranks.size() != c.nodes) throw InvalidParameter("one rank per node required");
    const auto net = layered(c);
    const std::size_t hub = c.nodes + c.atom_holders.size();
    const std::size_t src[] = {hub};
    std::vector<RankViolation> out;
    for (std::size_t v = 0; v < c.nodes; ++v) {
        if (c.ranks[v] == 0) continue;
        const long bound = net.max_flow(src, v);
        if (static_cast<long>(c.ranks[v]) > bound) out.push_back({v, c.ranks[v], bound});
    }
    return out;
}

}  // namespace mmtnc
