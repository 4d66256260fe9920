#include "mmtnc/aab.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <tuple>

#include "mmtnc/error.hpp"

namespace mmtnc {

std::string_view to_string(Mode m) { return m == Mode::Plain ? "plain" : "coded"; }

Mode parse_mode(std::string_view s) {
    if (s == "plain") return Mode::Plain;
    if (s == "coded") return Mode::Coded;
    throw InvalidParameter("mode must be 'plain' or 'coded', got '" + std::string(s) + "'");
}

std::size_t StepSchedule::transmission_count() const {
    std::size_t c = 0;
    for (const auto& r : rounds) c += r.transmissions.size();
    return c;
}

unsigned checked_log2(unsigned n) {
    if (n < 2 || (n & (n - 1)) != 0)
        throw UnsupportedParameter("n must be a power of two >= 2, got " + std::to_string(n));
    unsigned l = 0;
    while ((1u << l) < n) ++l;
    return l;
}

namespace {

// A tree edge inside one row or column, by 1-based tree index.
struct TreeHop {
    unsigned from;
    unsigned to;
    std::uint8_t stage;
};

using TreeRound = std::vector<TreeHop>;

// Heap-ordered gather: round t moves (n/2^t, n/2^(t-1)] to their parents.
std::vector<TreeRound> gather_hops(unsigned n, Mode mode) {
    const unsigned levels = checked_log2(n);
    std::vector<TreeRound> plain;
    for (unsigned t = 1; t <= levels; ++t) {
        TreeRound r;
        for (unsigned k = (n >> t) + 1; k <= (n >> (t - 1)); ++k)
            r.push_back({k, k / 2, 0});
        plain.push_back(std::move(r));
    }
    if (mode == Mode::Plain || levels < 2) return plain;

    // merge the final two rounds; the last one relays in stage 1
    auto last = std::move(plain.back());
    plain.pop_back();
    for (auto& hop : last) {
        hop.stage = 1;
        plain.back().push_back(hop);
    }
    return plain;
}

// Round t sends from depth t-1 to its children.
std::vector<TreeRound> broadcast_hops(unsigned n) {
    const unsigned levels = checked_log2(n);
    std::vector<TreeRound> rounds;
    for (unsigned t = 1; t <= levels; ++t) {
        TreeRound r;
        for (unsigned k = 1u << (t - 1); k < (1u << t); ++k)
            for (unsigned c : {2 * k, 2 * k + 1})
                if (c <= n) r.push_back({k, c, 0});
        rounds.push_back(std::move(r));
    }
    return rounds;
}

ProcessorId pid(unsigned a, unsigned b, unsigned i, unsigned j) {
    return {static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b),
            static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j)};
}

bool transmission_less(const Transmission& x, const Transmission& y) {
    return std::tie(x.stage, x.sender, x.receiver) < std::tie(y.stage, y.sender, y.receiver);
}

// Expands tree hops into every row (horizontal) or column (vertical) of every block.
void append_tree_rounds(StepSchedule& s, unsigned n, const std::vector<TreeRound>& hops,
                        bool horizontal, unsigned phase) {
    for (const auto& tr : hops) {
        Round round;
        round.phase = phase;
        for (unsigned a = 1; a <= n; ++a)
            for (unsigned b = 1; b <= n; ++b)
                for (unsigned line = 1; line <= n; ++line)
                    for (const auto& h : tr) {
                        Transmission t;
                        t.stage = h.stage;
                        if (horizontal) {
                            t.sender = pid(a, b, line, h.from);
                            t.receiver = pid(a, b, line, h.to);
                            t.kind = LinkKind::HorizontalIntrablock;
                        } else {
                            t.sender = pid(a, b, h.from, line);
                            t.receiver = pid(a, b, h.to, line);
                            t.kind = LinkKind::VerticalIntrablock;
                        }
                        round.transmissions.push_back(t);
                    }
        std::sort(round.transmissions.begin(), round.transmissions.end(), transmission_less);
        s.rounds.push_back(std::move(round));
    }
}

StepSchedule make(unsigned step_id, Mode mode, std::vector<std::string> phases) {
    StepSchedule s;
    s.step_id = step_id;
    s.mode = mode;
    s.phases = std::move(phases);
    return s;
}

}  // namespace

StepSchedule row_gather_schedule(unsigned n, Mode mode, unsigned step_id) {
    auto s = make(step_id, mode, {"row-gather"});
    append_tree_rounds(s, n, gather_hops(n, mode), true, 0);
    return s;
}

StepSchedule row_broadcast_schedule(unsigned n, unsigned step_id) {
    auto s = make(step_id, Mode::Plain, {"row-broadcast"});
    append_tree_rounds(s, n, broadcast_hops(n), true, 0);
    return s;
}

StepSchedule column_gather_schedule(unsigned n, Mode mode, unsigned step_id) {
    auto s = make(step_id, mode, {"column-gather"});
    append_tree_rounds(s, n, gather_hops(n, mode), false, 0);
    return s;
}

StepSchedule column_broadcast_schedule(unsigned n, unsigned step_id) {
    auto s = make(step_id, Mode::Plain, {"column-broadcast"});
    append_tree_rounds(s, n, broadcast_hops(n), false, 0);
    return s;
}

StepSchedule interblock_row_exchange(unsigned n, unsigned step_id) {
    checked_log2(n);
    auto s = make(step_id, Mode::Plain, {"row-interblock"});
    Round round;
    for (unsigned a = 1; a <= n; ++a)
        for (unsigned b = 1; b <= n; ++b)
            for (unsigned i = 1; i <= n; ++i)
                round.transmissions.push_back(
                    {pid(a, i, b, n), pid(a, b, i, 1), LinkKind::HorizontalInterblock, 0});
    std::sort(round.transmissions.begin(), round.transmissions.end(), transmission_less);
    s.rounds.push_back(std::move(round));
    return s;
}

StepSchedule interblock_column_exchange(unsigned n, unsigned step_id) {
    checked_log2(n);
    auto s = make(step_id, Mode::Plain, {"column-interblock"});
    Round round;
    for (unsigned a = 1; a <= n; ++a)
        for (unsigned b = 1; b <= n; ++b)
            for (unsigned j = 1; j <= n; ++j)
                round.transmissions.push_back(
                    {pid(j, b, n, a), pid(a, b, 1, j), LinkKind::VerticalInterblock, 0});
    std::sort(round.transmissions.begin(), round.transmissions.end(), transmission_less);
    s.rounds.push_back(std::move(round));
    return s;
}

StepSchedule block_one_to_all(unsigned n, unsigned step_id) {
    auto s = make(step_id, Mode::Plain, {"row-broadcast", "column-broadcast"});
    append_tree_rounds(s, n, broadcast_hops(n), true, 0);
    append_tree_rounds(s, n, broadcast_hops(n), false, 1);
    return s;
}

StepSchedule block_all_to_all(unsigned n, Mode mode, unsigned step_id) {
    auto s = make(step_id, mode,
                  {"row-gather", "row-broadcast", "column-gather", "column-broadcast"});
    append_tree_rounds(s, n, gather_hops(n, mode), true, 0);
    append_tree_rounds(s, n, broadcast_hops(n), true, 1);
    append_tree_rounds(s, n, gather_hops(n, mode), false, 2);
    append_tree_rounds(s, n, broadcast_hops(n), false, 3);
    return s;
}

std::vector<StepSchedule> full_aab(unsigned n, Mode mode) {
    checked_log2(n);
    std::vector<StepSchedule> steps;
    steps.push_back(row_gather_schedule(n, mode, 1));
    steps.push_back(row_broadcast_schedule(n, 2));
    steps.push_back(column_gather_schedule(n, mode, 3));
    steps.push_back(column_broadcast_schedule(n, 4));
    steps.push_back(interblock_row_exchange(n, 5));
    steps.push_back(column_gather_schedule(n, mode, 6));
    steps.push_back(block_one_to_all(n, 7));
    steps.push_back(interblock_column_exchange(n, 8));
    steps.push_back(row_gather_schedule(n, mode, 9));
    steps.push_back(block_all_to_all(n, mode, 10));
    for (auto& s : steps) s.mode = mode;
    return steps;
}

void validate_schedule(const MmtGraph& g, const StepSchedule& s) {
    if (s.step_id < 1 || s.step_id > 10) throw StructuralError("step id outside 1..10");
    if (s.rounds.empty()) throw StructuralError("step " + std::to_string(s.step_id) + " has no rounds");
    for (std::size_t r = 0; r < s.rounds.size(); ++r) {
        const auto& round = s.rounds[r];
        if (round.phase >= s.phases.size()) throw StructuralError("round refers to an unknown phase");
        std::set<std::size_t> used;
        std::map<std::size_t, std::uint8_t> fed;  // receiver -> earliest stage it was fed
        auto where = [&] {
            return "step " + std::to_string(s.step_id) + " round " + std::to_string(r + 1) + ": ";
        };
        for (const auto& t : round.transmissions) {
            auto link = g.find_link(t.sender, t.receiver, t.kind);
            if (!link)
                throw StructuralError(where() + "no " + std::string(to_string(t.kind)) + " link " +
                                      to_string(t.sender) + " -> " + to_string(t.receiver));
            if (!used.insert(*link).second)
                throw StructuralError(where() + "link used twice " + to_string(t.sender) + " -> " +
                                      to_string(t.receiver));
            auto rx = g.indexer().index(t.receiver);
            auto it = fed.find(rx);
            if (it == fed.end() || t.stage < it->second) fed[rx] = t.stage;
        }
        for (const auto& t : round.transmissions) {
            if (t.stage == 0) continue;
            auto it = fed.find(g.indexer().index(t.sender));
            if (it == fed.end() || it->second >= t.stage)
                throw StructuralError(where() + "stage " + std::to_string(t.stage) + " sender " +
                                      to_string(t.sender) + " is not fed by an earlier stage");
        }
    }
}

void write_schedule_trace(std::ostream& out, const std::vector<StepSchedule>& steps) {
    out << "# aab-schedule v1 block_root=P(a,b,1,1)\n";
    for (const auto& s : steps)
        for (std::size_t r = 0; r < s.rounds.size(); ++r)
            for (const auto& t : s.rounds[r].transmissions)
                out << s.step_id << ' ' << r + 1 << ' ' << int(t.stage) << ' ' << to_string(t.sender)
                    << ' ' << to_string(t.receiver) << ' ' << to_string(t.kind) << '\n';
}

}  // namespace mmtnc
