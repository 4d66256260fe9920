#include "mmtnc/engine.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "mmtnc/codec.hpp"
#include "mmtnc/error.hpp"

namespace mmtnc {

std::string_view to_string(FailurePolicy p) { return p == FailurePolicy::Report ? "report" : "retry"; }

FailurePolicy parse_policy(std::string_view s) {
    if (s == "report") return FailurePolicy::Report;
    if (s == "retry") return FailurePolicy::Retry;
    throw InvalidParameter("policy must be 'report' or 'retry', got '" + std::string(s) + "'");
}

void validate(const RunConfig& cfg) {
    checked_log2(cfg.n);
    if (cfg.payload_len == 0) throw InvalidParameter("payload length must be >= 1");
    if (cfg.last_step < 1 || cfg.last_step > 10) throw InvalidParameter("last_step must be in 1..10");
    if (cfg.threads == 0) throw InvalidParameter("threads must be >= 1");
}

WorkingArrays::WorkingArrays(std::size_t processors)
    : count_(processors), words_((processors + 63) / 64), bits_(processors, std::vector<std::uint64_t>(words_, 0)) {}

bool WorkingArrays::has(std::size_t holder, std::size_t source) const {
    return (bits_.at(holder).at(source / 64) >> (source % 64)) & 1u;
}

void WorkingArrays::set(std::size_t holder, std::size_t source) {
    bits_.at(holder).at(source / 64) |= std::uint64_t{1} << (source % 64);
}

std::size_t WorkingArrays::size(std::size_t holder) const {
    std::size_t c = 0;
    for (auto w : bits_.at(holder)) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

void WorkingArrays::merge_into(std::size_t dst, const std::vector<std::uint64_t>& src) {
    auto& d = bits_.at(dst);
    for (std::size_t w = 0; w < words_; ++w) d[w] |= src[w];
}

MessageStore::MessageStore(std::size_t processors, std::size_t payload_len, const Field& field,
                           std::uint64_t seed)
    : len_(payload_len), data_(processors * payload_len) {
    Rng rng(seed ^ 0x6d657373616765ULL);
    for (auto& s : data_) s = field.sample(rng);
}

std::size_t Metrics::round_count(unsigned step) const {
    return static_cast<std::size_t>(
        std::count_if(rounds.begin(), rounds.end(), [&](const RoundMetrics& r) { return r.step == step; }));
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t mix(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0;
    for (auto p : parts) h = splitmix(h ^ p);
    return h;
}

struct Fnv {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    void byte(std::uint8_t b) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    void word(std::uint64_t v, int bytes) {
        for (int k = 0; k < bytes; ++k) byte(static_cast<std::uint8_t>(v >> (8 * k)));
    }
};

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

double pct(std::size_t part, std::size_t whole) {
    return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

struct TxResult {
    std::size_t packets = 0;
    std::size_t symbols = 0;
    std::uint64_t digest = 0;
};

struct Endpoints {
    std::size_t sender;
    std::size_t receiver;
};

// Transmission indices grouped by stage, preserving canonical order.
std::vector<std::vector<std::size_t>> by_stage(const Round& round, const std::vector<std::size_t>& idx) {
    std::map<std::uint8_t, std::vector<std::size_t>> m;
    for (auto t : idx) m[round.transmissions[t].stage].push_back(t);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [stage, v] : m) out.push_back(std::move(v));
    return out;
}

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

class Runner {
public:
    Runner(const MmtGraph& g, const RunConfig& cfg)
        : g_(g), cfg_(cfg), store_(g.node_count(), cfg.payload_len, cfg.field, cfg.seed) {
        result_.state.n = g.n();
        result_.state.wa = WorkingArrays(g.node_count());
        for (std::size_t p = 0; p < g.node_count(); ++p) result_.state.wa.set(p, p);
        result_.metrics.n = g.n();
        result_.metrics.processors = g.node_count();
    }

    RunResult execute() {
        auto steps = full_aab(g_.n(), cfg_.mode);
        for (const auto& s : steps) validate_schedule(g_, s);
        for (const auto& s : steps) {
            if (s.step_id > cfg_.last_step) break;
            run_step(s);
        }
        result_.metrics.payload_mismatches = result_.state.payload_mismatches;
        return std::move(result_);
    }

private:
    std::vector<Endpoints> endpoints(const Round& round) const {
        std::vector<Endpoints> e;
        e.reserve(round.transmissions.size());
        for (const auto& t : round.transmissions)
            e.push_back({g_.indexer().index(t.sender), g_.indexer().index(t.receiver)});
        return e;
    }

    void shuffle_stage(std::vector<std::size_t>& v, std::uint64_t salt) const {
        if (cfg_.shuffle_seed == 0) return;
        Rng rng(mix({cfg_.shuffle_seed, salt}));
        std::shuffle(v.begin(), v.end(), rng);
    }

    void record_round(unsigned step, unsigned& counter, const Round& round, const std::vector<Endpoints>& ends,
                      const std::vector<std::size_t>& executed, const std::vector<TxResult>& res,
                      std::string_view kind_prefix, std::size_t failures, bool retry) {
        RoundMetrics m;
        m.step = step;
        m.round = ++counter;
        m.retry = retry;
        m.failures = failures;
        std::set<std::size_t> active;
        for (auto t : executed) {
            ++m.transmissions;
            m.symbols += res[t].symbols;
            active.insert(ends[t].sender);
            active.insert(ends[t].receiver);
        }
        m.active_count = active.size();
        m.active_pct = pct(m.active_count, g_.node_count());
        result_.metrics.rounds.push_back(m);
        if (!cfg_.record_trace) return;
        for (auto t : executed) {
            const auto& tx = round.transmissions[t];
            std::string line = std::to_string(step) + ' ' + std::to_string(m.round) + ' ' + to_string(tx.sender) +
                               ' ' + to_string(tx.receiver) + ' ' + std::string(to_string(tx.kind)) + ' ' +
                               std::string(kind_prefix);
            if (kind_prefix != "plain") line += ':' + std::to_string(res[t].packets);
            line += ' ' + hex64(res[t].digest);
            result_.trace.push_back(std::move(line));
        }
    }

    void run_step(const StepSchedule& s) {
        unsigned counter = 0;
        if (cfg_.mode == Mode::Plain) {
            for (std::size_t r = 0; r < s.rounds.size(); ++r) plain_round(s.step_id, r, s.rounds[r], counter);
            return;
        }
        for (unsigned phase = 0; phase < s.phases.size(); ++phase) {
            std::vector<std::size_t> rounds;
            for (std::size_t r = 0; r < s.rounds.size(); ++r)
                if (s.rounds[r].phase == phase) rounds.push_back(r);
            if (!rounds.empty()) coded_phase(s, phase, rounds, counter);
        }
    }

    void plain_round(unsigned step, std::size_t ridx, const Round& round, unsigned& counter) {
        auto ends = endpoints(round);
        std::vector<TxResult> res(round.transmissions.size());
        auto& wa = result_.state.wa;
        for (auto stage : by_stage(round, all_indices(round.transmissions.size()))) {
            shuffle_stage(stage, mix({step, ridx, stage.front()}));
            std::vector<std::vector<std::uint64_t>> snapshot;
            snapshot.reserve(stage.size());
            for (auto t : stage) snapshot.push_back(wa.bits(ends[t].sender));
            for (std::size_t k = 0; k < stage.size(); ++k) {
                auto t = stage[k];
                Fnv fnv;
                std::size_t carried = 0;
                for (std::size_t w = 0; w < snapshot[k].size(); ++w) {
                    carried += static_cast<std::size_t>(std::popcount(snapshot[k][w]));
                    fnv.word(snapshot[k][w], 8);
                }
                res[t] = {carried, carried * cfg_.payload_len, fnv.h};
                wa.merge_into(ends[t].receiver, snapshot[k]);
            }
        }
        record_round(step, counter, round, ends, all_indices(round.transmissions.size()), res, "plain", 0, false);
    }

    // ---- coded mode ----

    struct Unit {
        std::vector<std::size_t> members;                       // sorted processor indices
        std::vector<std::vector<std::size_t>> tx;               // per phase round: transmission indices
    };

    struct RetryRecord {
        std::size_t phase_round = 0;  // which scheduled round was replayed
        std::vector<std::size_t> tx;
        std::vector<TxResult> res;
        std::size_t failures_after = 0;
    };

    struct UnitOutcome {
        std::size_t failures = 0;    // members short after the scheduled rounds
        std::size_t unresolved = 0;
        std::size_t mismatches = 0;
        std::vector<RetryRecord> retries;
        std::vector<std::pair<std::size_t, std::vector<std::size_t>>> gains;  // processor, sources
        UnitHistory history;
    };

    std::vector<Unit> find_units(const StepSchedule& s, const std::vector<std::size_t>& rounds,
                                 const std::vector<std::vector<Endpoints>>& ends) const {
        std::vector<std::size_t> parent(g_.node_count());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        std::vector<bool> touched(g_.node_count(), false);
        for (std::size_t p = 0; p < rounds.size(); ++p)
            for (const auto& e : ends[p]) {
                touched[e.sender] = touched[e.receiver] = true;
                auto a = find(e.sender), b = find(e.receiver);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        std::map<std::size_t, std::size_t> unit_of_root;
        std::vector<Unit> units;
        for (std::size_t v = 0; v < g_.node_count(); ++v) {
            if (!touched[v]) continue;
            auto root = find(v);
            auto [it, fresh] = unit_of_root.emplace(root, units.size());
            if (fresh) {
                units.emplace_back();
                units.back().tx.resize(rounds.size());
            }
            units[it->second].members.push_back(v);
        }
        for (std::size_t p = 0; p < rounds.size(); ++p)
            for (std::size_t t = 0; t < ends[p].size(); ++t)
                units[unit_of_root.at(find(ends[p][t].sender))].tx[p].push_back(t);
        for (const auto& u : units)
            if (u.members.size() > 64)
                throw UnsupportedParameter("coding unit with more than 64 members in step " +
                                           std::to_string(s.step_id));
        return units;
    }

    UnitOutcome coded_unit(const StepSchedule& s, unsigned phase, const std::vector<std::size_t>& rounds,
                           const std::vector<std::vector<Endpoints>>& ends, const Unit& unit,
                           std::vector<std::vector<TxResult>>& results) const {
        UnitOutcome out;
        const auto& wa = result_.state.wa;
        const auto& members = unit.members;
        const std::size_t m = members.size();
        std::map<std::size_t, std::size_t> local;
        for (std::size_t k = 0; k < m; ++k) local[members[k]] = k;

        // atoms: messages held by some but not all members, grouped by holder mask
        const std::uint64_t everyone = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
        std::map<std::uint64_t, std::vector<std::size_t>> by_mask;
        const std::size_t words = wa.bits(members[0]).size();
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t any = 0;
            for (auto p : members) any |= wa.bits(p)[w];
            while (any) {
                const std::size_t src = w * 64 + static_cast<std::size_t>(std::countr_zero(any));
                any &= any - 1;
                std::uint64_t mask = 0;
                for (std::size_t k = 0; k < m; ++k)
                    if (wa.has(members[k], src)) mask |= std::uint64_t{1} << k;
                if (mask != everyone) by_mask[mask].push_back(src);
            }
        }
        std::vector<std::pair<std::uint64_t, std::vector<std::size_t>>> atoms(by_mask.begin(), by_mask.end());
        std::sort(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) { return a.second[0] < b.second[0]; });
        const std::size_t r = atoms.size();
        std::size_t widest = 1;
        for (const auto& a : atoms) widest = std::max(widest, a.second.size());
        const std::size_t payload = widest * cfg_.payload_len;

        // expected atoms per member after the scheduled rounds
        std::vector<std::vector<bool>> expected(m, std::vector<bool>(r, false));
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t k = 0; k < m; ++k)
                if ((atoms[a].first >> k) & 1u) expected[k][a] = true;
        for (std::size_t p = 0; p < rounds.size(); ++p)
            for (const auto& stage : by_stage(s.rounds[rounds[p]], unit.tx[p])) {
                auto snap = expected;
                for (auto t : stage) {
                    auto snd = local.at(ends[p][t].sender), rcv = local.at(ends[p][t].receiver);
                    for (std::size_t a = 0; a < r; ++a)
                        if (snap[snd][a]) expected[rcv][a] = true;
                }
            }

        if (cfg_.keep_history) {
            out.history.step = s.step_id;
            out.history.phase = phase;
            out.history.members = members;
            for (const auto& a : atoms) {
                std::vector<std::size_t> holders;
                for (std::size_t k = 0; k < m; ++k)
                    if ((a.first >> k) & 1u) holders.push_back(k);
                out.history.atom_holders.push_back(std::move(holders));
            }
        }

        if (r == 0) {
            for (std::size_t p = 0; p < rounds.size(); ++p)
                for (auto t : unit.tx[p]) results[p][t] = {0, 0, Fnv{}.h};
            if (cfg_.keep_history) {
                out.history.initial_ranks.assign(m, 0);
                for (std::size_t p = 0; p < rounds.size(); ++p) {
                    UnitHistory::RoundRecord rec;
                    for (auto t : unit.tx[p])
                        rec.arcs.push_back({local.at(ends[p][t].sender), local.at(ends[p][t].receiver), 0});
                    rec.ranks.assign(m, 0);
                    out.history.rounds.push_back(std::move(rec));
                }
            }
            return out;
        }

        const Generation gen(r, payload, cfg_.field, mix({cfg_.seed, s.step_id, phase, members[0]}));
        std::vector<std::vector<Symbol>> atom_payload(r, std::vector<Symbol>(payload, 0));
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t q = 0; q < atoms[a].second.size(); ++q) {
                auto msg = store_.message(atoms[a].second[q]);
                std::copy(msg.begin(), msg.end(), atom_payload[a].begin() + static_cast<std::ptrdiff_t>(q * cfg_.payload_len));
            }
        std::vector<DecoderState> dec(m, DecoderState(gen));
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t k = 0; k < m; ++k)
                if ((atoms[a].first >> k) & 1u) dec[k].insert(source_packet(gen, a, atom_payload[a]));
        if (cfg_.keep_history)
            for (const auto& d : dec) out.history.initial_ranks.push_back(d.rank());

        auto exec_round = [&](std::size_t p, std::uint64_t round_salt, std::vector<std::size_t> tx_list,
                              std::vector<TxResult>& res) {
            UnitHistory::RoundRecord rec;
            for (auto stage : by_stage(s.rounds[rounds[p]], tx_list)) {
                shuffle_stage(stage, mix({s.step_id, round_salt, members[0], stage.front()}));
                std::vector<std::vector<CodedPacket>> sent(stage.size());
                for (std::size_t q = 0; q < stage.size(); ++q) {
                    const auto t = stage[q];
                    const auto snd = local.at(ends[p][t].sender);
                    const auto& tx = s.rounds[rounds[p]].transmissions[t];
                    const std::size_t count = dec[snd].rank();
                    Fnv fnv;
                    for (std::size_t k = 0; k < count; ++k) {
                        Rng rng(mix({cfg_.seed, s.step_id, round_salt, tx.stage, ends[p][t].sender,
                                     ends[p][t].receiver, k}));
                        sent[q].push_back(dec[snd].random_combination(rng, cfg_.nonzero_coefficients));
                        for (auto c : sent[q].back().coeffs) fnv.word(c, 2);
                    }
                    res[t] = {count, count * (r + payload), fnv.h};
                    if (cfg_.keep_history)
                        rec.arcs.push_back({snd, local.at(ends[p][t].receiver), static_cast<long>(count)});
                }
                for (std::size_t q = 0; q < stage.size(); ++q) {
                    auto& d = dec[local.at(ends[p][stage[q]].receiver)];
                    for (const auto& pkt : sent[q]) d.insert(pkt);
                }
            }
            if (cfg_.keep_history) {
                for (const auto& d : dec) rec.ranks.push_back(d.rank());
                out.history.rounds.push_back(std::move(rec));
            }
        };

        auto short_members = [&] {
            std::size_t c = 0;
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t a = 0; a < r; ++a)
                    if (expected[k][a] && !dec[k].decodable(a)) {
                        ++c;
                        break;
                    }
            return c;
        };

        for (std::size_t p = 0; p < rounds.size(); ++p) exec_round(p, rounds[p], unit.tx[p], results[p]);
        out.failures = short_members();

        std::size_t pending = out.failures;
        if (cfg_.policy == FailurePolicy::Retry) {
            for (unsigned extra = 0; pending > 0 && extra < cfg_.retry_rounds; ++extra) {
                RetryRecord rr;
                rr.phase_round = extra % rounds.size();
                rr.tx = unit.tx[rr.phase_round];
                rr.res.resize(ends[rr.phase_round].size());
                exec_round(rr.phase_round, 1000 + extra, rr.tx, rr.res);
                pending = rr.failures_after = short_members();
                out.retries.push_back(std::move(rr));
            }
        }
        out.unresolved = pending;

        for (std::size_t k = 0; k < m; ++k) {
            std::vector<std::size_t> gained;
            for (std::size_t a = 0; a < r; ++a) {
                if (!expected[k][a] || ((atoms[a].first >> k) & 1u)) continue;
                if (auto got = dec[k].source(a)) {
                    if (*got != atom_payload[a]) ++out.mismatches;
                }
                // undecoded atoms fall back to plain delivery
                gained.insert(gained.end(), atoms[a].second.begin(), atoms[a].second.end());
            }
            if (!gained.empty()) out.gains.emplace_back(members[k], std::move(gained));
        }
        return out;
    }

    void coded_phase(const StepSchedule& s, unsigned phase, const std::vector<std::size_t>& rounds, unsigned& counter) {
        std::vector<std::vector<Endpoints>> ends;
        for (auto r : rounds) ends.push_back(endpoints(s.rounds[r]));
        const auto units = find_units(s, rounds, ends);

        std::vector<std::vector<TxResult>> results;
        for (auto r : rounds) results.emplace_back(s.rounds[r].transmissions.size());
        std::vector<UnitOutcome> outcomes(units.size());

        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (std::size_t u; (u = next.fetch_add(1)) < units.size();) {
                try {
                    outcomes[u] = coded_unit(s, phase, rounds, ends, units[u], results);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        };
        const unsigned workers = std::min<std::size_t>(cfg_.threads, std::max<std::size_t>(units.size(), 1));
        if (workers <= 1) {
            worker();
        } else {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        }
        if (failure) std::rethrow_exception(failure);

        std::size_t failures = 0, max_retries = 0;
        for (const auto& o : outcomes) {
            failures += o.failures;
            max_retries = std::max(max_retries, o.retries.size());
        }
        for (std::size_t p = 0; p < rounds.size(); ++p) {
            const bool last = p + 1 == rounds.size();
            record_round(s.step_id, counter, s.rounds[rounds[p]], ends[p],
                         all_indices(s.rounds[rounds[p]].transmissions.size()), results[p], "coded",
                         last ? failures : 0, false);
        }
        for (std::size_t k = 0; k < max_retries; ++k) {
            // one extra round: every unit still retrying replays its k-th retry
            Round merged;
            merged.phase = phase;
            std::vector<Endpoints> merged_ends;
            std::vector<TxResult> merged_res;
            std::size_t still = 0;
            for (const auto& o : outcomes) {
                if (k >= o.retries.size()) continue;
                const auto& rr = o.retries[k];
                still += rr.failures_after;
                for (auto t : rr.tx) {
                    merged.transmissions.push_back(s.rounds[rounds[rr.phase_round]].transmissions[t]);
                    merged_ends.push_back(ends[rr.phase_round][t]);
                    merged_res.push_back(rr.res[t]);
                }
            }
            auto order = all_indices(merged.transmissions.size());
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                const auto &x = merged.transmissions[a], &y = merged.transmissions[b];
                return std::tie(x.stage, x.sender, x.receiver) < std::tie(y.stage, y.sender, y.receiver);
            });
            record_round(s.step_id, counter, merged, merged_ends, order, merged_res, "coded-retry", still, true);
            ++result_.metrics.retry_rounds;
        }

        for (auto& o : outcomes) {
            result_.metrics.decode_failures += o.failures;
            result_.metrics.unresolved_failures += o.unresolved;
            result_.state.payload_mismatches += o.mismatches;
            for (const auto& [proc, sources] : o.gains)
                for (auto src : sources) result_.state.wa.set(proc, src);
            if (cfg_.keep_history) result_.history.push_back(std::move(o.history));
        }
    }

    const MmtGraph& g_;
    const RunConfig& cfg_;
    MessageStore store_;
    RunResult result_;
};

}  // namespace

RunResult run(const MmtGraph& g, const RunConfig& cfg) {
    validate(cfg);
    if (cfg.n != g.n())
        throw InvalidParameter("config n = " + std::to_string(cfg.n) + " but graph n = " + std::to_string(g.n()));
    return Runner(g, cfg).execute();
}

VerifyResult verify_all_to_all(const FinalState& state) {
    VerifyResult v;
    v.payload_mismatches = state.payload_mismatches;
    const Indexer ix(state.n);
    const std::size_t total = state.wa.processors();
    for (std::size_t p = 0; p < total; ++p) {
        if (state.wa.size(p) == total) continue;
        MissingReport rep{ix.id(p), {}};
        for (std::size_t src = 0; src < total; ++src)
            if (!state.wa.has(p, src)) rep.missing.push_back(ix.id(src));
        v.missing.push_back(std::move(rep));
    }
    v.pass = v.missing.empty() && v.payload_mismatches == 0;
    return v;
}

std::vector<UtilizationPoint> utilization_report(const Metrics& m) {
    std::vector<UtilizationPoint> out;
    unsigned step = 0;
    double sum = 0.0;
    unsigned count = 0;
    for (const auto& r : m.rounds) {
        if (r.step != step) {
            step = r.step;
            sum = 0.0;
            count = 0;
        }
        sum += r.active_pct;
        ++count;
        out.push_back({r.step, r.round, r.active_pct, sum / count});
    }
    return out;
}

AuditResult rank_bound_audit(const RunResult& r) {
    AuditResult out;
    for (const auto& h : r.history) {
        RankBoundCase c;
        c.nodes = h.members.size();
        c.atom_holders = h.atom_holders;
        auto report = [&] {
            for (const auto& v : check_rank_bound(c))
                out.violations.push_back({h.members[v.node], v.rank, v.bound});
            out.checks += c.nodes;
        };
        c.ranks = h.initial_ranks;
        report();
        for (const auto& rec : h.rounds) {
            c.arcs.insert(c.arcs.end(), rec.arcs.begin(), rec.arcs.end());
            c.ranks = rec.ranks;
            report();
        }
    }
    return out;
}

namespace {
constexpr std::string_view kMetricsHeader = "step,round,transmissions,symbols,active_count,active_pct,failures";
}

void write_metrics_csv(std::ostream& out, const Metrics& m) {
    out << kMetricsHeader << '\n';
    char pct_buf[32];
    for (const auto& r : m.rounds) {
        std::snprintf(pct_buf, sizeof pct_buf, "%.2f", r.active_pct);
        out << r.step << ',' << r.round << ',' << r.transmissions << ',' << r.symbols << ',' << r.active_count
            << ',' << pct_buf << ',' << r.failures << '\n';
    }
}

Metrics read_metrics_csv(std::istream& in) {
    Metrics m;
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError("empty metrics file", 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kMetricsHeader) throw ParseError("unexpected metrics header '" + line + "'", lineno);
    auto unsigned_field = [&](std::string_view f) {
        std::size_t v = 0;
        auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (ec != std::errc{} || p != f.data() + f.size())
            throw ParseError("bad number '" + std::string(f) + "'", lineno);
        return v;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (f.size() != 7) throw ParseError("expected 7 columns, got " + std::to_string(f.size()), lineno);
        RoundMetrics r;
        r.step = static_cast<unsigned>(unsigned_field(f[0]));
        r.round = static_cast<unsigned>(unsigned_field(f[1]));
        r.transmissions = unsigned_field(f[2]);
        r.symbols = unsigned_field(f[3]);
        r.active_count = unsigned_field(f[4]);
        try {
            std::size_t used = 0;
            r.active_pct = std::stod(f[5], &used);
            if (used != f[5].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ParseError("bad percentage '" + f[5] + "'", lineno);
        }
        r.failures = unsigned_field(f[6]);
        m.rounds.push_back(r);
    }
    return m;
}

void write_trace(std::ostream& out, const RunResult& r) {
    out << "# step round sender receiver kind packet-kind coefficient-digest\n";
    for (const auto& line : r.trace) out << line << '\n';
}

}  // namespace mmtnc
