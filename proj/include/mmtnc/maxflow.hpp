#pragma once

// Integer-capacity max-flow (BFS augmenting paths).

#include <cstddef>
#include <span>
#include <vector>

#include "mmtnc/topology.hpp"

namespace mmtnc {

class FlowNetwork {
public:
    explicit FlowNetwork(std::size_t nodes = 0) : adj_(nodes) {}

    std::size_t add_node();
    std::size_t node_count() const noexcept { return adj_.size(); }
    /// Directed arc u -> v. Parallel arcs are allowed and add up.
    void add_arc(std::size_t u, std::size_t v, long capacity = 1);

    /// Value of a maximum flow from a super-source feeding every node in
    /// `sources` (with unbounded capacity) into `sink`. The network itself is
    /// left untouched, so repeated queries are independent.
    /// Throws InvalidParameter if the sink is one of the sources.
    long max_flow(std::span<const std::size_t> sources, std::size_t sink) const;

private:
    struct Arc {
        std::size_t to;
        std::size_t rev;
        long cap;
    };
    std::vector<std::vector<Arc>> adj_;
};

/// Max-flow on an MMT graph; each link carries one unit in each direction.
long max_flow(const MmtGraph& g, std::span<const ProcessorId> sources, const ProcessorId& sink);

}  // namespace mmtnc
