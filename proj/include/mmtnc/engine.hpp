#pragma once

// Bulk-synchronous execution of the AAB schedules over MMT(n).
//
// Plain mode copies working arrays along every scheduled transmission.
// Coded mode splits each schedule phase into independent units (connected
// components of that phase's transmissions: one row, one column, or one
// interblock pair). A unit codes one generation whose sources are the groups
// of messages that are not yet held by every unit member, grouped by which
// members hold them. Each sender transmits as many fresh random combinations
// of its decoder rows as its current rank; receivers decode incrementally.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmtnc/aab.hpp"
#include "mmtnc/audit.hpp"
#include "mmtnc/gf.hpp"
#include "mmtnc/topology.hpp"

namespace mmtnc {

enum class FailurePolicy { Report, Retry };

std::string_view to_string(FailurePolicy p);
FailurePolicy parse_policy(std::string_view s);

struct RunConfig {
    unsigned n = 2;
    Mode mode = Mode::Plain;
    Field field{};
    std::size_t payload_len = 16;
    std::uint64_t seed = 42;
    bool nonzero_coefficients = false;
    FailurePolicy policy = FailurePolicy::Report;
    unsigned retry_rounds = 8;   // extra rounds allowed per unit and phase
    unsigned threads = 1;        // worker threads for coded units; results do not depend on it
    unsigned last_step = 10;     // execute steps 1..last_step
    bool keep_history = false;   // per-unit rank history for the rank-bound audit
    bool record_trace = true;
    std::uint64_t shuffle_seed = 0;  // nonzero: permute transmissions inside each stage
};

/// Throws InvalidParameter on inconsistent settings.
void validate(const RunConfig& cfg);

/// Per-processor set of source messages it holds (indexed by processor index).
class WorkingArrays {
public:
    WorkingArrays() = default;
    explicit WorkingArrays(std::size_t processors);

    std::size_t processors() const noexcept { return count_; }
    bool has(std::size_t holder, std::size_t source) const;
    void set(std::size_t holder, std::size_t source);
    std::size_t size(std::size_t holder) const;
    void merge_into(std::size_t dst, const std::vector<std::uint64_t>& src);
    const std::vector<std::uint64_t>& bits(std::size_t holder) const { return bits_[holder]; }

    friend bool operator==(const WorkingArrays&, const WorkingArrays&) = default;

private:
    std::size_t count_ = 0;
    std::size_t words_ = 0;
    std::vector<std::vector<std::uint64_t>> bits_;
};

/// Source payloads, L symbols per processor, drawn from the run seed.
class MessageStore {
public:
    MessageStore(std::size_t processors, std::size_t payload_len, const Field& field,
                 std::uint64_t seed);

    std::size_t payload_len() const noexcept { return len_; }
    std::span<const Symbol> message(std::size_t source) const {
        return {data_.data() + source * len_, len_};
    }

private:
    std::size_t len_;
    std::vector<Symbol> data_;
};

struct RoundMetrics {
    unsigned step = 0;
    unsigned round = 0;  // 1-based, execution order inside the step
    std::size_t transmissions = 0;
    std::size_t symbols = 0;
    std::size_t active_count = 0;
    double active_pct = 0.0;
    std::size_t failures = 0;
    bool retry = false;

    friend bool operator==(const RoundMetrics&, const RoundMetrics&) = default;
};

struct Metrics {
    unsigned n = 0;
    std::size_t processors = 0;
    std::vector<RoundMetrics> rounds;
    std::size_t decode_failures = 0;      // unit members short of rank after the scheduled rounds
    std::size_t unresolved_failures = 0;  // still short after retries; served by plain fallback
    std::size_t retry_rounds = 0;
    std::size_t payload_mismatches = 0;   // decoded payload differing from the original

    std::size_t round_count(unsigned step) const;
    std::size_t total_rounds() const { return rounds.size(); }
};

struct FinalState {
    unsigned n = 0;
    WorkingArrays wa;
    std::size_t payload_mismatches = 0;
};

struct UnitHistory {
    unsigned step = 0;
    unsigned phase = 0;
    std::vector<std::size_t> members;                     // processor indices
    std::vector<std::vector<std::size_t>> atom_holders;   // member-local
    std::vector<std::size_t> initial_ranks;
    struct RoundRecord {
        std::vector<FlowArc> arcs;  // member-local, packets sent in this round
        std::vector<std::size_t> ranks;
    };
    std::vector<RoundRecord> rounds;
};

struct RunResult {
    FinalState state;
    Metrics metrics;
    std::vector<std::string> trace;  // one line per executed transmission
    std::vector<UnitHistory> history;
};

/// Throws InvalidParameter if cfg.n does not match the graph or is not a
/// power of two, StructuralError if a schedule does not fit the topology.
RunResult run(const MmtGraph& g, const RunConfig& cfg);

struct MissingReport {
    ProcessorId processor;
    std::vector<ProcessorId> missing;
};

struct VerifyResult {
    bool pass = false;
    std::vector<MissingReport> missing;
    std::size_t payload_mismatches = 0;
};

VerifyResult verify_all_to_all(const FinalState& state);

struct UtilizationPoint {
    unsigned step = 0;
    unsigned round = 0;
    double active_pct = 0.0;
    double cumulative_pct = 0.0;  // running mean of active_pct within the step
};

std::vector<UtilizationPoint> utilization_report(const Metrics& m);

struct AuditResult {
    std::size_t checks = 0;
    std::vector<RankViolation> violations;
    bool pass() const noexcept { return violations.empty(); }
};

/// For every unit and round: rank <= max-flow from the unit's sources over
/// the links used so far. Needs a coded run with keep_history.
AuditResult rank_bound_audit(const RunResult& r);

void write_metrics_csv(std::ostream& out, const Metrics& m);
/// Throws ParseError on a malformed file.
Metrics read_metrics_csv(std::istream& in);
void write_trace(std::ostream& out, const RunResult& r);

}  // namespace mmtnc
