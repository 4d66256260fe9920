// mmtnc: build MMT topologies, run all-to-all broadcast, run the butterfly demo,
// and turn metrics into plot-ready series.
//
// Exit codes: 0 ok, 1 usage, 2 verification failure, 3 I/O, 4 internal error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "mmtnc/butterfly.hpp"
#include "mmtnc/engine.hpp"
#include "mmtnc/error.hpp"

namespace {

using namespace mmtnc;

enum Exit { kOk = 0, kUsage = 1, kVerify = 2, kIo = 3, kInternal = 4 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    return f;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read " + path);
    return f;
}

struct RunFlags {
    unsigned n = 2;
    std::string mode = "plain";
    unsigned field_u = Field::kDefaultBits;
    std::uint64_t seed = 42;
    std::size_t payload_len = 16;
    std::string policy = "report";
    unsigned retry_rounds = 8;
    unsigned threads = 1;
    bool nonzero = false;
    std::string out_metrics;
    std::string out_trace;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
    cmd->add_option("--n", f.n, "Blocks per side (power of two)")->required();
    cmd->add_option("--mode", f.mode, "plain or coded")->capture_default_str();
    cmd->add_option("--field-u", f.field_u, "Field GF(2^u), 1..16")->capture_default_str();
    cmd->add_option("--seed", f.seed, "Run seed")->capture_default_str();
    cmd->add_option("--payload-len", f.payload_len, "Symbols per message")->capture_default_str();
    cmd->add_option("--policy", f.policy, "Decode failure policy: report or retry")->capture_default_str();
    cmd->add_option("--retry-rounds", f.retry_rounds, "Extra rounds allowed per unit and phase")
        ->capture_default_str();
    cmd->add_option("--threads", f.threads, "Worker threads")->capture_default_str();
    cmd->add_flag("--nonzero", f.nonzero, "Draw coefficients from the nonzero elements");
    cmd->add_option("--out-metrics", f.out_metrics, "Metrics CSV path");
    cmd->add_option("--out-trace", f.out_trace, "Trace path");
}

RunConfig to_config(const RunFlags& f) {
    RunConfig c;
    c.n = f.n;
    c.mode = parse_mode(f.mode);
    c.field = Field(f.field_u);
    c.seed = f.seed;
    c.payload_len = f.payload_len;
    c.policy = parse_policy(f.policy);
    c.retry_rounds = f.retry_rounds;
    c.threads = f.threads;
    c.nonzero_coefficients = f.nonzero;
    c.record_trace = !f.out_trace.empty();
    validate(c);
    return c;
}

int execute_and_verify(const MmtGraph& g, const RunFlags& flags) {
    const auto cfg = to_config(flags);
    const auto result = run(g, cfg);
    if (!flags.out_metrics.empty()) {
        auto f = open_out(flags.out_metrics);
        write_metrics_csv(f, result.metrics);
    }
    if (!flags.out_trace.empty()) {
        auto f = open_out(flags.out_trace);
        write_trace(f, result);
    }
    const auto& m = result.metrics;
    const auto v = verify_all_to_all(result.state);
    std::cout << "n " << cfg.n << " processors " << m.processors << " mode " << to_string(cfg.mode) << " field GF(2^"
              << cfg.field.bits() << ") seed " << cfg.seed << " sampling "
              << (cfg.nonzero_coefficients ? "nonzero" : "uniform") << '\n';
    for (unsigned s = 1; s <= cfg.last_step; ++s) std::cout << "step " << s << " rounds " << m.round_count(s) << '\n';
    std::cout << "total rounds " << m.total_rounds() << '\n'
              << "decode failures " << m.decode_failures << '\n'
              << "retry rounds " << m.retry_rounds << '\n'
              << "unresolved (plain fallback) " << m.unresolved_failures << '\n'
              << "payload mismatches " << m.payload_mismatches << '\n'
              << "verification " << (v.pass ? "pass" : "FAIL") << '\n';
    for (std::size_t k = 0; k < v.missing.size() && k < 5; ++k)
        std::cout << "  " << to_string(v.missing[k].processor) << " misses " << v.missing[k].missing.size()
                  << " sources\n";
    return v.pass ? kOk : kVerify;
}

std::string format_vector(const std::vector<Symbol>& v) {
    std::ostringstream s;
    s << '(';
    for (std::size_t k = 0; k < v.size(); ++k) s << (k ? "," : "") << v[k];
    s << ')';
    return s.str();
}

int demo_butterfly(unsigned field_u, std::uint64_t seed, std::size_t trials, bool ones, bool nonzero,
                   std::size_t rounds, bool quiet) {
    if (trials == 0) throw InvalidParameter("--trials must be >= 1");
    const Field field(field_u);
    Rng rng(seed);
    butterfly::Options opts;
    opts.force_ones = ones;
    opts.nonzero = nonzero;
    opts.rounds = rounds;
    std::size_t fail_a = 0, fail_b = 0, fail_any = 0, violations = 0;
    std::cout << "butterfly GF(2^" << field.bits() << ") trials " << trials << " rounds " << rounds << " seed " << seed
              << '\n';
    for (std::size_t t = 0; t < trials; ++t) {
        const auto trial = butterfly::run_trial(field, rng, opts);
        fail_a += !trial.sink_a_correct;
        fail_b += !trial.sink_b_correct;
        fail_any += !(trial.sink_a_correct && trial.sink_b_correct);
        violations += trial.rank_violations;
        if (quiet) continue;
        std::cout << "trial " << t;
        for (std::size_t r = 0; r < trial.rounds.size(); ++r) {
            const auto& z = trial.rounds[r].zeta;
            std::cout << " zeta" << r + 1 << '=' << format_vector({z.begin(), z.end()}) << " merged" << r + 1 << '='
                      << format_vector(trial.rounds[r].edge_packets[butterfly::kMergeEdge].coeffs);
        }
        std::cout << " P3=" << (trial.sink_a_correct ? "ok" : "fail") << " P7=" << (trial.sink_b_correct ? "ok" : "fail")
                  << '\n';
    }
    std::cout << std::fixed << std::setprecision(4) << "P3 failure rate " << double(fail_a) / double(trials) << '\n'
              << "P7 failure rate " << double(fail_b) / double(trials) << '\n'
              << "failure rate (either sink) " << double(fail_any) / double(trials) << '\n'
              << "rank bound violations " << violations << '\n';
    return kOk;
}

void write_series(const std::filesystem::path& dir, const Metrics& m, const std::string& tag) {
    std::map<unsigned, std::vector<UtilizationPoint>> per_step;
    for (const auto& p : utilization_report(m)) per_step[p.step].push_back(p);
    char buf[64];
    for (const auto& [step, pts] : per_step) {
        std::snprintf(buf, sizeof buf, "%sutilization_step%02u.tsv", tag.c_str(), step);
        auto f = open_out((dir / buf).string());
        f << "# round\tactive_pct\tcumulative_pct\n";
        for (const auto& p : pts) {
            std::snprintf(buf, sizeof buf, "%u\t%.2f\t%.2f\n", p.round, p.active_pct, p.cumulative_pct);
            f << buf;
        }
    }
    auto f = open_out((dir / (tag + "rounds.tsv")).string());
    f << "# step\trounds\n";
    for (const auto& [step, pts] : per_step) f << step << '\t' << pts.size() << '\n';
}

int report(const std::string& metrics_path, const std::string& compare_path, const std::string& out_dir) {
    Metrics a, b;
    {
        auto f = open_in(metrics_path);
        a = read_metrics_csv(f);
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir);
    write_series(out_dir, a, "");
    std::map<unsigned, std::size_t> steps_a;
    for (const auto& r : a.rounds) ++steps_a[r.step];
    std::cout << "steps " << steps_a.size() << " rounds " << a.rounds.size() << '\n';
    if (compare_path.empty()) return kOk;

    {
        auto f = open_in(compare_path);
        b = read_metrics_csv(f);
    }
    write_series(out_dir, b, "compare_");
    std::map<unsigned, std::size_t> steps_b;
    for (const auto& r : b.rounds) ++steps_b[r.step];
    auto f = open_out((std::filesystem::path(out_dir) / "rounds_diff.tsv").string());
    f << "# step\trounds\tcompare_rounds\tdifference\n";
    std::cout << "step\trounds\tcompare\tdifference\n";
    for (unsigned s = 1; s <= 10; ++s) {
        const long x = long(steps_a[s]), y = long(steps_b[s]);
        if (x == 0 && y == 0) continue;
        f << s << '\t' << x << '\t' << y << '\t' << x - y << '\n';
        std::cout << s << '\t' << x << '\t' << y << '\t' << x - y << '\n';
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-Mesh of Trees all-to-all broadcast with random linear network coding"};
    app.require_subcommand(1);

    unsigned build_n = 2;
    std::string build_out;
    auto* build = app.add_subcommand("build", "Export the MMT(n) topology");
    build->add_option("--n", build_n, "Blocks per side (>= 2)")->required();
    build->add_option("--out", build_out, "Output path (default stdout)");

    RunFlags run_flags;
    auto* run_cmd = app.add_subcommand("run", "Run all-to-all broadcast and verify it");
    add_run_flags(run_cmd, run_flags);

    RunFlags verify_flags;
    std::string topology_path;
    auto* verify = app.add_subcommand("verify", "Check a topology file and run a verified broadcast on it");
    add_run_flags(verify, verify_flags);
    verify->add_option("--topology", topology_path, "Topology file to check against MMT(n)");

    unsigned demo_u = 8;
    std::uint64_t demo_seed = 42;
    std::size_t demo_trials = 1, demo_rounds = 2;
    bool demo_ones = false, demo_nonzero = false, demo_quiet = false;
    auto* demo = app.add_subcommand("demo-butterfly", "Seven-node multicast demo");
    demo->add_option("--field-u", demo_u, "Field GF(2^u)")->capture_default_str();
    demo->add_option("--seed", demo_seed, "Seed")->capture_default_str();
    demo->add_option("--trials", demo_trials, "Number of trials")->capture_default_str();
    demo->add_option("--rounds", demo_rounds, "Transmissions per link")->capture_default_str();
    demo->add_flag("--ones", demo_ones, "Force every coefficient to 1");
    demo->add_flag("--nonzero", demo_nonzero, "Draw coefficients from the nonzero elements");
    demo->add_flag("--quiet", demo_quiet, "Only print the aggregate");

    std::string metrics_path, compare_path, out_dir = ".";
    auto* rep = app.add_subcommand("report", "Plot-ready series from metrics files");
    rep->add_option("--metrics", metrics_path, "Metrics CSV")->required();
    rep->add_option("--compare", compare_path, "Second metrics CSV for a rounds diff");
    rep->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*build) {
            const auto g = build_mmt(build_n);
            if (build_out.empty()) {
                export_topology(g, std::cout);
            } else {
                auto f = open_out(build_out);
                export_topology(g, f);
            }
            return kOk;
        }
        if (*run_cmd) {
            to_config(run_flags);
            return execute_and_verify(build_mmt(run_flags.n), run_flags);
        }
        if (*verify) {
            to_config(verify_flags);
            const auto reference = build_mmt(verify_flags.n);
            if (!topology_path.empty()) {
                auto f = open_in(topology_path);
                const auto g = read_topology(f);
                if (!(g == reference)) {
                    std::cout << "topology differs from MMT(" << verify_flags.n << ")\n";
                    return kVerify;
                }
                std::cout << "topology matches MMT(" << verify_flags.n << ")\n";
            }
            const auto gm = graph_metrics(reference);
            std::cout << "nodes " << gm.node_count << " links " << gm.edge_count << " max degree " << gm.max_degree
                      << " diameter " << (gm.diameter_is_lower_bound ? ">= " : "") << gm.bfs_diameter
                      << " bisection <= " << gm.bisection_upper_bound << '\n';
            return execute_and_verify(reference, verify_flags);
        }
        if (*demo) return demo_butterfly(demo_u, demo_seed, demo_trials, demo_ones, demo_nonzero, demo_rounds, demo_quiet);
        if (*rep) return report(metrics_path, compare_path, out_dir);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const InvalidParameter& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kInternal;
}
