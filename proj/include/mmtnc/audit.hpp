#pragma once

// Receiver rank can never exceed the max-flow from the sources into that
// receiver over the links used so far.

#include <cstddef>
#include <vector>

namespace mmtnc {

struct FlowArc {
    std::size_t from = 0;
    std::size_t to = 0;
    long packets = 1;  // symbols carried so far; acts as capacity
};

/// One snapshot of a coded run: which nodes held which source at the start,
/// which links have carried how much, and every node's current rank.
struct RankBoundCase {
    std::size_t nodes = 0;
    std::vector<std::vector<std::size_t>> atom_holders;  // per source: nodes holding it initially
    std::vector<FlowArc> arcs;
    std::vector<std::size_t> ranks;  // per node
};

struct RankViolation {
    std::size_t node = 0;
    std::size_t rank = 0;
    long bound = 0;
};

/// Bound for a node: max-flow from a hub feeding each source with capacity 1.
long rank_bound(const RankBoundCase& c, std::size_t node);
std::vector<RankViolation> check_rank_bound(const RankBoundCase& c);

}  // namespace mmtnc
