#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mmtnc/butterfly.hpp"
#include "mmtnc/engine.hpp"
#include "mmtnc/error.hpp"

namespace py = pybind11;
using namespace mmtnc;

namespace {

py::dict metrics_dict(const Metrics& m) {
    py::list rounds;
    for (const auto& r : m.rounds) {
        py::dict d;
        d["step"] = r.step;
        d["round"] = r.round;
        d["transmissions"] = r.transmissions;
        d["symbols"] = r.symbols;
        d["active_count"] = r.active_count;
        d["active_pct"] = r.active_pct;
        d["failures"] = r.failures;
        d["retry"] = r.retry;
        rounds.append(d);
    }
    py::dict out;
    out["n"] = m.n;
    out["processors"] = m.processors;
    out["rounds"] = rounds;
    out["decode_failures"] = m.decode_failures;
    out["unresolved_failures"] = m.unresolved_failures;
    out["retry_rounds"] = m.retry_rounds;
    out["payload_mismatches"] = m.payload_mismatches;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "All-to-all broadcast on the Multi-Mesh of Trees with random linear network coding";

    // translators run newest first, so the base class goes first
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<Field>(m, "Field")
        .def(py::init<unsigned>(), py::arg("u") = Field::kDefaultBits)
        .def(py::init<unsigned, std::uint32_t>(), py::arg("u"), py::arg("reduction_poly"))
        .def_property_readonly("bits", &Field::bits)
        .def_property_readonly("size", &Field::size)
        .def_property_readonly("poly", &Field::poly)
        .def("add", &Field::add)
        .def("mul", &Field::mul)
        .def("inv", &Field::inv)
        .def("div", &Field::div);

    m.def(
        "topology",
        [](unsigned n) { return export_topology(build_mmt(n)); },
        py::arg("n"), "Canonical topology export of MMT(n)");

    m.def(
        "graph_metrics",
        [](unsigned n) {
            const auto g = graph_metrics(build_mmt(n));
            py::dict d;
            d["node_count"] = g.node_count;
            d["edge_count_by_kind"] = std::vector<std::size_t>(g.edge_count_by_kind.begin(), g.edge_count_by_kind.end());
            d["edge_count"] = g.edge_count;
            d["bfs_diameter"] = g.bfs_diameter;
            d["diameter_is_lower_bound"] = g.diameter_is_lower_bound;
            d["max_degree"] = g.max_degree;
            d["bisection_upper_bound"] = g.bisection_upper_bound;
            return d;
        },
        py::arg("n"));

    m.def(
        "schedule_rounds",
        [](unsigned n, const std::string& mode) {
            std::vector<std::size_t> out;
            for (const auto& s : full_aab(n, parse_mode(mode))) out.push_back(s.rounds.size());
            return out;
        },
        py::arg("n"), py::arg("mode") = "plain", "Round count of each of the ten steps");

    m.def(
        "run",
        [](unsigned n, const std::string& mode, unsigned field_u, std::uint64_t seed, std::size_t payload_len,
           const std::string& policy, unsigned retry_rounds, unsigned threads, unsigned last_step, bool audit,
           bool trace) {
            RunConfig c;
            c.n = n;
            c.mode = parse_mode(mode);
            c.field = Field(field_u);
            c.seed = seed;
            c.payload_len = payload_len;
            c.policy = parse_policy(policy);
            c.retry_rounds = retry_rounds;
            c.threads = threads;
            c.last_step = last_step;
            c.keep_history = audit;
            c.record_trace = trace;
            RunResult r;
            {
                py::gil_scoped_release release;
                r = run(build_mmt(n), c);
            }
            const auto v = verify_all_to_all(r.state);
            py::dict out;
            out["metrics"] = metrics_dict(r.metrics);
            out["verified"] = v.pass;
            out["incomplete_processors"] = v.missing.size();
            std::ostringstream csv;
            write_metrics_csv(csv, r.metrics);
            out["metrics_csv"] = csv.str();
            if (trace) out["trace"] = r.trace;
            if (audit) {
                const auto a = rank_bound_audit(r);
                out["audit_checks"] = a.checks;
                out["audit_violations"] = a.violations.size();
            }
            return out;
        },
        py::arg("n"), py::arg("mode") = "plain", py::arg("field_u") = 8u, py::arg("seed") = 42u,
        py::arg("payload_len") = 16u, py::arg("policy") = "report", py::arg("retry_rounds") = 8u,
        py::arg("threads") = 1u, py::arg("last_step") = 10u, py::arg("audit") = false, py::arg("trace") = false,
        "Run all-to-all broadcast on MMT(n) and verify the result");

    m.def(
        "butterfly_trial",
        [](unsigned field_u, std::uint64_t seed, bool ones, std::size_t rounds) {
            const Field f(field_u);
            Rng rng(seed);
            butterfly::Options opts;
            opts.force_ones = ones;
            opts.rounds = rounds;
            const auto t = butterfly::run_trial(f, rng, opts);
            py::list merged;
            for (const auto& rec : t.rounds) merged.append(rec.edge_packets[butterfly::kMergeEdge].coeffs);
            py::dict d;
            d["merged_coeffs"] = merged;
            d["p3_decoded"] = t.sink_a_correct;
            d["p7_decoded"] = t.sink_b_correct;
            d["rank_violations"] = t.rank_violations;
            return d;
        },
        py::arg("field_u") = 8u, py::arg("seed") = 42u, py::arg("ones") = false, py::arg("rounds") = 2u);
}
