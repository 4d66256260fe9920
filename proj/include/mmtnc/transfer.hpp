#pragma once

// Algebraic view of a delay-free acyclic coded network: each link carries
//   Y_e = sum_{i : a(i) = o(e)} a[i][e] X_i + sum_{l : d(l) = o(e)} f[l][e] Y_l
// and a receiver sees the Y of its terminal links.

#include <cstddef>
#include <map>
#include <vector>

#include "mmtnc/codec.hpp"

namespace mmtnc {

struct NetEdge {
    std::size_t from = 0;
    std::size_t to = 0;
};

/// A directed network with local coding coefficients on every edge.
/// `a` is r x |E| (source injection), `f` is |E| x |E| (link to link).
/// Entries outside the incidence pattern must be zero.
struct CodedNetwork {
    Field field;
    std::size_t node_count = 0;
    std::vector<NetEdge> edges;
    std::vector<std::size_t> source_node;  // a(i), one per source process
    Matrix a;
    Matrix f;

    std::size_t sources() const noexcept { return source_node.size(); }

    /// Zero-coefficient network with correctly shaped matrices.
    static CodedNetwork with_shape(Field field, std::size_t nodes, std::vector<NetEdge> edges,
                                   std::vector<std::size_t> source_node);

    /// Fills every admissible a/f entry with a fresh draw.
    void randomize(Rng& rng, bool nonzero = false);
};

struct TransferMatrices {
    Matrix a;                           // r x |E|
    Matrix f;                           // |E| x |E|
    std::map<std::size_t, Matrix> b;    // receiver -> |E| x (in-degree) output selection
    std::vector<std::size_t> edge_order;  // a topological order of the links
};

/// Throws NotAcyclic on a directed cycle, InvalidParameter on coefficients
/// outside the incidence pattern or mis-shaped matrices.
TransferMatrices build_transfer_matrices(const CodedNetwork& net);

/// Edges indexed by topological order of their origins; throws NotAcyclic.
std::vector<std::size_t> topological_edge_order(const CodedNetwork& net);

/// r x m matrix M with Z_beta = X * M, computed as A (I + F + F^2 + ...) B_beta.
/// Throws NotAcyclic if F is not nilpotent.
Matrix receiver_observation(const Field& field, const TransferMatrices& tm, std::size_t beta);

/// Packet-level run of the network: every link's packet is recoded from its
/// origin's injected sources and incoming packets, in topological order.
/// Returns one packet per edge.
std::vector<CodedPacket> simulate_packets(const CodedNetwork& net, const Generation& gen,
                                          std::span<const std::vector<Symbol>> messages);

}  // namespace mmtnc
