#pragma once

// Round-by-round schedules for the ten steps of all-to-all broadcast on MMT(n).
//
// Gathers climb the row (or column) binary trees toward index 1: in round t
// the nodes with index in (n/2^t, n/2^(t-1)] hand their buffer to their tree
// parent. Broadcasts walk the same trees downward from the root. In coded
// mode the last two gather rounds are merged into one: the deepest senders
// transmit in stage 0 and their parents relay a recoded combination of the
// updated buffer in stage 1 of the same round.
//
// The block root is P(alpha, beta, 1, 1). Interblock exchanges deliver into
// the tree roots: column n -> column 1 over horizontal interblock links and
// row n -> row 1 over vertical interblock links.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mmtnc/topology.hpp"

namespace mmtnc {

enum class Mode { Plain, Coded };

std::string_view to_string(Mode m);
/// Accepts "plain" or "coded"; throws InvalidParameter otherwise.
Mode parse_mode(std::string_view s);

struct Transmission {
    ProcessorId sender;
    ProcessorId receiver;
    LinkKind kind = LinkKind::HorizontalIntrablock;
    /// Relay order inside one round. Stage s sees everything delivered in stages < s.
    std::uint8_t stage = 0;

    friend bool operator==(const Transmission&, const Transmission&) = default;
};

struct Round {
    std::vector<Transmission> transmissions;
    unsigned phase = 0;  // index into StepSchedule::phases
};

struct StepSchedule {
    unsigned step_id = 0;
    Mode mode = Mode::Plain;
    std::vector<std::string> phases;  // e.g. {"row-gather"}
    std::vector<Round> rounds;

    std::size_t transmission_count() const;
};

/// log2(n); throws UnsupportedParameter unless n is a power of two >= 2.
unsigned checked_log2(unsigned n);

/// Step 1 / Step 9. Plain: log2 n rounds. Coded: max(1, log2 n - 1) rounds.
StepSchedule row_gather_schedule(unsigned n, Mode mode, unsigned step_id = 1);
/// Step 2: log2 n rounds down the row trees.
StepSchedule row_broadcast_schedule(unsigned n, unsigned step_id = 2);
/// Step 3 / Step 6: mirror of the row gather on the column trees.
StepSchedule column_gather_schedule(unsigned n, Mode mode, unsigned step_id = 3);
/// Step 4.
StepSchedule column_broadcast_schedule(unsigned n, unsigned step_id = 4);
/// Step 5: one round, P(a, i, b, n) -> P(a, b, i, 1).
StepSchedule interblock_row_exchange(unsigned n, unsigned step_id = 5);
/// Step 7: row broadcast followed by column broadcast inside every block.
StepSchedule block_one_to_all(unsigned n, unsigned step_id = 7);
/// Step 8: one round, P(j, b, n, a) -> P(a, b, 1, j).
StepSchedule interblock_column_exchange(unsigned n, unsigned step_id = 8);
/// Step 10: all-to-all inside every block (row gather, row broadcast,
/// column gather, column broadcast).
StepSchedule block_all_to_all(unsigned n, Mode mode, unsigned step_id = 10);

/// Steps 1..10 in order. Throws UnsupportedParameter for non power-of-two n.
std::vector<StepSchedule> full_aab(unsigned n, Mode mode);

/// Throws StructuralError if a transmission has no matching link, a link is
/// used twice in a round, or a stage-s sender was not fed before stage s.
void validate_schedule(const MmtGraph& g, const StepSchedule& s);

/// One line per transmission: step round stage sender receiver kind.
void write_schedule_trace(std::ostream& out, const std::vector<StepSchedule>& steps);

}  // namespace mmtnc
