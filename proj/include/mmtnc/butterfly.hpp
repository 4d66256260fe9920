#pragma once

// The seven-node demo network: P1 multicasts (d1, d2) to P3 and P7.
//
//   P1 -> P2, P1 -> P4, P2 -> P5, P4 -> P5, P2 -> P3, P5 -> P6, P6 -> P3, P6 -> P7
//
// The published edge list names P4P5 twice; the eight distinct edges above
// are used. Coefficients are drawn only where inputs are combined: zeta1..4
// at the source and zeta5, zeta6 at the merge node P5. Single-input nodes
// forward unchanged, so the coded edge P5 -> P6 carries
//   zeta5 (zeta1 d1 + zeta2 d2) + zeta6 (zeta3 d1 + zeta4 d2).

#include <array>
#include <cstddef>
#include <vector>

#include "mmtnc/audit.hpp"
#include "mmtnc/codec.hpp"
#include "mmtnc/transfer.hpp"

namespace mmtnc::butterfly {

inline constexpr std::size_t kNodes = 7;
inline constexpr std::size_t kSinkA = 2;  // P3
inline constexpr std::size_t kSinkB = 6;  // P7
inline constexpr std::size_t kMergeEdge = 5;  // P5 -> P6

/// 0-based edge list in the order above.
std::vector<NetEdge> edges();

using Zeta = std::array<Symbol, 6>;

/// Network with source P1 (two source processes) and the given coefficients.
CodedNetwork network(const Field& field, const Zeta& zeta);

/// Directed unit-capacity max-flow from P1 to `sink` (0-based).
long max_flow_from_source(std::size_t sink);

struct Options {
    std::size_t rounds = 2;         // transmissions per link; P7 has a single in-link
    std::size_t payload_len = 1;
    bool force_ones = false;        // every zeta = 1
    bool nonzero = false;           // draw zeta from [1, q)
};

struct RoundRecord {
    Zeta zeta{};
    std::vector<CodedPacket> edge_packets;  // one per edge
    std::array<std::size_t, kNodes> rank_after{};
};

struct Trial {
    std::vector<std::vector<Symbol>> messages;  // d1, d2
    std::vector<RoundRecord> rounds;
    Matrix sink_a_matrix;  // accumulated encoding vectors received at P3
    Matrix sink_b_matrix;  // ... at P7
    bool sink_a_decoded = false;
    bool sink_b_decoded = false;
    bool sink_a_correct = false;  // decoded payloads equal d1, d2
    bool sink_b_correct = false;
    std::size_t rank_violations = 0;  // rank > max-flow over links used so far
};

Trial run_trial(const Field& field, Rng& rng, const Options& opts = {});

/// Rank-bound case after `rounds_done` rounds (each link used once per round).
RankBoundCase bound_case(const Trial& t, std::size_t rounds_done);

}  // namespace mmtnc::butterfly
