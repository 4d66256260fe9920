#include "mmtnc/maxflow.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "mmtnc/error.hpp"

namespace mmtnc {

std::size_t FlowNetwork::add_node() {
    adj_.emplace_back();
    return adj_.size() - 1;
}

void FlowNetwork::add_arc(std::size_t u, std::size_t v, long capacity) {
    if (u >= adj_.size() || v >= adj_.size()) throw InvalidParameter("arc endpoint out of range");
    if (capacity < 0) throw InvalidParameter("negative capacity");
    adj_[u].push_back({v, adj_[v].size() + (u == v ? 1 : 0), capacity});
    adj_[v].push_back({u, adj_[u].size() - 1, 0});
}

long FlowNetwork::max_flow(std::span<const std::size_t> sources, std::size_t sink) const {
    if (sink >= adj_.size()) throw InvalidParameter("sink out of range");
    if (std::find(sources.begin(), sources.end(), sink) != sources.end())
        throw InvalidParameter("sink is one of the sources");

    constexpr long kInf = std::numeric_limits<long>::max() / 4;
    auto residual = adj_;
    const std::size_t super = residual.size();
    residual.emplace_back();
    for (auto s : sources) {
        if (s >= super) throw InvalidParameter("source out of range");
        residual[super].push_back({s, residual[s].size(), kInf});
        residual[s].push_back({super, residual[super].size() - 1, 0});
    }

    long flow = 0;
    std::vector<std::pair<std::size_t, std::size_t>> parent(residual.size());
    for (;;) {
        std::vector<bool> seen(residual.size(), false);
        std::deque<std::size_t> queue{super};
        seen[super] = true;
        while (!queue.empty() && !seen[sink]) {
            auto u = queue.front();
            queue.pop_front();
            for (std::size_t k = 0; k < residual[u].size(); ++k) {
                const auto& a = residual[u][k];
                if (a.cap <= 0 || seen[a.to]) continue;
                seen[a.to] = true;
                parent[a.to] = {u, k};
                queue.push_back(a.to);
            }
        }
        if (!seen[sink]) break;
        long push = kInf;
        for (auto v = sink; v != super; v = parent[v].first)
            push = std::min(push, residual[parent[v].first][parent[v].second].cap);
        for (auto v = sink; v != super; v = parent[v].first) {
            auto& a = residual[parent[v].first][parent[v].second];
            a.cap -= push;
            residual[a.to][a.rev].cap += push;
        }
        flow += push;
    }
    return flow;
}

long max_flow(const MmtGraph& g, std::span<const ProcessorId> sources, const ProcessorId& sink) {
    const auto& ix = g.indexer();
    FlowNetwork net(g.node_count());
    for (const auto& l : g.links()) {
        auto a = ix.index(l.origin);
        auto b = ix.index(l.destination);
        net.add_arc(a, b, l.capacity);
        net.add_arc(b, a, l.capacity);
    }
    std::vector<std::size_t> src;
    for (const auto& s : sources) src.push_back(ix.index(s));
    return net.max_flow(src, ix.index(sink));
}

}  // namespace mmtnc
