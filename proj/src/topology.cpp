#include "mmtnc/topology.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "mmtnc/error.hpp"

namespace mmtnc {

std::string to_string(const ProcessorId& p) {
    std::ostringstream os;
    os << "P(" << p.alpha << ',' << p.beta << ',' << p.i << ',' << p.j << ')';
    return os.str();
}

std::string_view to_string(LinkKind kind) {
    switch (kind) {
        case LinkKind::HorizontalIntrablock: return "HorizontalIntrablock";
        case LinkKind::VerticalIntrablock: return "VerticalIntrablock";
        case LinkKind::HorizontalInterblock: return "HorizontalInterblock";
        case LinkKind::VerticalInterblock: return "VerticalInterblock";
    }
    return "?";
}

LinkKind parse_link_kind(std::string_view name) {
    for (auto k : kAllLinkKinds)
        if (to_string(k) == name) return k;
    throw InvalidParameter("unknown link kind '" + std::string(name) + "'");
}

bool Indexer::valid(const ProcessorId& p) const noexcept {
    auto in = [this](unsigned c) { return c >= 1 && c <= n_; };
    return in(p.alpha) && in(p.beta) && in(p.i) && in(p.j);
}

std::size_t Indexer::index(const ProcessorId& p) const {
    if (!valid(p))
        throw InvalidParameter(to_string(p) + " outside MMT(" + std::to_string(n_) + ")");
    const std::size_t n = n_;
    return (((p.alpha - 1) * n + (p.beta - 1)) * n + (p.i - 1)) * n + (p.j - 1);
}

ProcessorId Indexer::id(std::size_t index) const {
    const std::size_t n = n_;
    ProcessorId p;
    p.j = static_cast<std::uint16_t>(index % n + 1);
    index /= n;
    p.i = static_cast<std::uint16_t>(index % n + 1);
    index /= n;
    p.beta = static_cast<std::uint16_t>(index % n + 1);
    index /= n;
    p.alpha = static_cast<std::uint16_t>(index + 1);
    return p;
}

namespace {

bool tree_pair(unsigned parent, unsigned child) {
    return child == 2 * parent || child == 2 * parent + 1;
}

bool kind_matches(unsigned n, const ProcessorId& a, const ProcessorId& b, LinkKind kind) {
    switch (kind) {
        case LinkKind::HorizontalIntrablock:
            return a.alpha == b.alpha && a.beta == b.beta && a.i == b.i &&
                   (tree_pair(a.j, b.j) || tree_pair(b.j, a.j));
        case LinkKind::VerticalIntrablock:
            return a.alpha == b.alpha && a.beta == b.beta && a.j == b.j &&
                   (tree_pair(a.i, b.i) || tree_pair(b.i, a.i));
        case LinkKind::HorizontalInterblock:
            // P(a, b, i, 1) -- P(a, i, b, n)
            return a.j == 1 && b.j == n && a.alpha == b.alpha && b.beta == a.i && b.i == a.beta;
        case LinkKind::VerticalInterblock:
            // P(a, b, 1, j) -- P(j, b, n, a)
            return a.i == 1 && b.i == n && a.beta == b.beta && b.alpha == a.j && b.j == a.alpha;
    }
    return false;
}

}  // namespace

bool link_kind_consistent(unsigned n, const ProcessorId& a, const ProcessorId& b, LinkKind kind) {
    return kind_matches(n, a, b, kind) || kind_matches(n, b, a, kind);
}

MmtGraph::MmtGraph(unsigned n, std::vector<Link> links) : indexer_(n), links_(std::move(links)) {
    if (n < 2) throw InvalidParameter("MMT requires n >= 2, got " + std::to_string(n));
    auto key = [this](const Link& l) {
        return std::tuple(indexer_.index(l.origin), indexer_.index(l.destination), l.kind);
    };
    for (const auto& l : links_) {
        if (!indexer_.valid(l.origin) || !indexer_.valid(l.destination))
            throw InvalidParameter("link endpoint outside MMT(" + std::to_string(n) + ")");
        if (l.origin == l.destination) throw InvalidParameter("self-loop at " + to_string(l.origin));
        if (!link_kind_consistent(n, l.origin, l.destination, l.kind))
            throw InvalidParameter("link " + to_string(l.origin) + "-" + to_string(l.destination) +
                                   " is not a " + std::string(to_string(l.kind)) + " link");
    }
    std::sort(links_.begin(), links_.end(),
              [&](const Link& a, const Link& b) { return key(a) < key(b); });

    std::set<std::tuple<std::size_t, std::size_t, LinkKind>> seen;
    incident_.assign(indexer_.count(), {});
    for (std::size_t k = 0; k < links_.size(); ++k) {
        auto a = indexer_.index(links_[k].origin);
        auto b = indexer_.index(links_[k].destination);
        if (!seen.emplace(std::min(a, b), std::max(a, b), links_[k].kind).second)
            throw InvalidParameter("duplicate link " + to_string(links_[k].origin) + "-" +
                                   to_string(links_[k].destination));
        incident_[a].push_back(k);
        incident_[b].push_back(k);
    }
}

std::vector<Neighbor> MmtGraph::neighbors(const ProcessorId& p) const {
    const auto self = indexer_.index(p);
    std::vector<Neighbor> out;
    out.reserve(incident_[self].size());
    for (auto k : incident_[self]) {
        const auto& l = links_[k];
        out.push_back({l.origin == p ? l.destination : l.origin, l.kind, k});
    }
    return out;
}

std::optional<std::size_t> MmtGraph::find_link(const ProcessorId& a, const ProcessorId& b,
                                               LinkKind kind) const {
    if (!indexer_.valid(a) || !indexer_.valid(b)) return std::nullopt;
    for (auto k : incident_[indexer_.index(a)]) {
        const auto& l = links_[k];
        if (l.kind != kind) continue;
        if ((l.origin == a && l.destination == b) || (l.origin == b && l.destination == a)) return k;
    }
    return std::nullopt;
}

MmtGraph build_mmt(unsigned n) {
    if (n < 2) throw InvalidParameter("MMT requires n >= 2, got " + std::to_string(n));
    if (n > std::numeric_limits<std::uint16_t>::max())
        throw InvalidParameter("n too large");
    auto P = [](unsigned a, unsigned b, unsigned i, unsigned j) {
        return ProcessorId{static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b),
                           static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j)};
    };
    std::vector<Link> links;
    links.reserve(2 * static_cast<std::size_t>(n) * n * n * n);
    for (unsigned a = 1; a <= n; ++a)
        for (unsigned b = 1; b <= n; ++b)
            for (unsigned x = 1; x <= n; ++x)
                for (unsigned parent = 1; parent <= n / 2; ++parent)
                    for (unsigned child : {2 * parent, 2 * parent + 1}) {
                        if (child > n) continue;
                        links.push_back({P(a, b, x, parent), P(a, b, x, child),
                                         LinkKind::HorizontalIntrablock});
                        links.push_back({P(a, b, parent, x), P(a, b, child, x),
                                         LinkKind::VerticalIntrablock});
                    }
    for (unsigned a = 1; a <= n; ++a)
        for (unsigned b = 1; b <= n; ++b)
            for (unsigned x = 1; x <= n; ++x) {
                links.push_back({P(a, b, x, 1), P(a, x, b, n), LinkKind::HorizontalInterblock});
                links.push_back({P(a, b, 1, x), P(x, b, n, a), LinkKind::VerticalInterblock});
            }
    return MmtGraph(n, std::move(links));
}

std::vector<unsigned> bfs_distances(const MmtGraph& g, std::size_t source) {
    constexpr auto kUnreached = std::numeric_limits<unsigned>::max();
    std::vector<unsigned> dist(g.node_count(), kUnreached);
    std::deque<std::size_t> queue{source};
    dist[source] = 0;
    const auto& links = g.links();
    const auto& ix = g.indexer();
    while (!queue.empty()) {
        auto u = queue.front();
        queue.pop_front();
        for (auto k : g.incident(u)) {
            auto a = ix.index(links[k].origin);
            auto v = a == u ? ix.index(links[k].destination) : a;
            if (dist[v] != kUnreached) continue;
            dist[v] = dist[u] + 1;
            queue.push_back(v);
        }
    }
    return dist;
}

namespace {

unsigned eccentricity(const std::vector<unsigned>& dist, std::size_t* farthest = nullptr) {
    unsigned best = 0;
    for (std::size_t v = 0; v < dist.size(); ++v) {
        if (dist[v] == std::numeric_limits<unsigned>::max())
            throw StructuralError("MMT graph is disconnected");
        if (dist[v] > best || (farthest && dist[v] == best && v < *farthest)) {
            best = dist[v];
            if (farthest) *farthest = v;
        }
    }
    return best;
}

std::size_t cut_size(const MmtGraph& g, auto&& side) {
    std::size_t crossing = 0;
    for (const auto& l : g.links())
        if (side(l.origin) != side(l.destination)) ++crossing;
    return crossing;
}

}  // namespace

GraphMetrics graph_metrics(const MmtGraph& g, unsigned exact_limit) {
    GraphMetrics m;
    m.node_count = g.node_count();
    m.edge_count = g.links().size();
    for (const auto& l : g.links()) ++m.edge_count_by_kind[static_cast<std::size_t>(l.kind)];
    for (std::size_t v = 0; v < g.node_count(); ++v)
        m.max_degree = std::max(m.max_degree, g.incident(v).size());

    if (g.n() <= exact_limit) {
        for (std::size_t v = 0; v < g.node_count(); ++v)
            m.bfs_diameter = std::max(m.bfs_diameter, eccentricity(bfs_distances(g, v)));
    } else {
        // double sweep from a few deterministic starting points
        m.diameter_is_lower_bound = true;
        const std::size_t starts[] = {0, g.node_count() / 3, g.node_count() - 1};
        for (auto s : starts) {
            std::size_t far = 0;
            eccentricity(bfs_distances(g, s), &far);
            m.bfs_diameter = std::max(m.bfs_diameter, eccentricity(bfs_distances(g, far)));
        }
    }

    const unsigned half = g.n() / 2;
    const std::size_t by_alpha = cut_size(g, [&](const ProcessorId& p) { return p.alpha <= half; });
    const std::size_t by_beta = cut_size(g, [&](const ProcessorId& p) { return p.beta <= half; });
    m.bisection_upper_bound = std::min(by_alpha, by_beta);
    if (g.n() % 2 != 0) {
        // odd n: the half-block cut is unbalanced; fall back to index halves
        const auto mid = g.node_count() / 2;
        const auto& ix = g.indexer();
        m.bisection_upper_bound =
            cut_size(g, [&](const ProcessorId& p) { return ix.index(p) < mid; });
    }
    return m;
}

void export_topology(const MmtGraph& g, std::ostream& out) {
    const auto m_counts = [&] {
        std::array<std::size_t, 4> c{};
        for (const auto& l : g.links()) ++c[static_cast<std::size_t>(l.kind)];
        return c;
    }();
    auto tuple = [](const ProcessorId& p) {
        return std::to_string(p.alpha) + ' ' + std::to_string(p.beta) + ' ' + std::to_string(p.i) +
               ' ' + std::to_string(p.j);
    };
    out << "# mmt-topology v1\n";
    out << "n " << g.n() << '\n';
    out << "node_count " << g.node_count() << '\n';
    for (auto k : kAllLinkKinds)
        out << "count " << to_string(k) << ' ' << m_counts[static_cast<std::size_t>(k)] << '\n';
    for (std::size_t v = 0; v < g.node_count(); ++v) out << "node " << tuple(g.indexer().id(v)) << '\n';
    for (const auto& l : g.links())
        out << "link " << tuple(l.origin) << ' ' << tuple(l.destination) << ' ' << to_string(l.kind)
            << '\n';
}

std::string export_topology(const MmtGraph& g) {
    std::ostringstream os;
    export_topology(g, os);
    return os.str();
}

MmtGraph read_topology(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    unsigned n = 0;
    std::size_t declared_nodes = 0, seen_nodes = 0;
    std::array<std::size_t, 4> declared{};
    std::array<bool, 4> have_count{};
    std::vector<Link> links;

    auto read_id = [&](std::istringstream& is) {
        unsigned a, b, i, j;
        if (!(is >> a >> b >> i >> j)) throw ParseError("expected four coordinates", lineno);
        ProcessorId p{static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b),
                      static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j)};
        if (n == 0 || !Indexer(n).valid(p)) throw ParseError("coordinates out of range", lineno);
        return p;
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        std::string tag;
        is >> tag;
        if (tag == "n") {
            if (!(is >> n) || n < 2) throw ParseError("bad n", lineno);
        } else if (tag == "node_count") {
            if (!(is >> declared_nodes)) throw ParseError("bad node_count", lineno);
        } else if (tag == "count") {
            std::string kind;
            std::size_t c;
            if (!(is >> kind >> c)) throw ParseError("bad count record", lineno);
            try {
                auto k = static_cast<std::size_t>(parse_link_kind(kind));
                declared[k] = c;
                have_count[k] = true;
            } catch (const InvalidParameter& e) {
                throw ParseError(e.what(), lineno);
            }
        } else if (tag == "node") {
            read_id(is);
            ++seen_nodes;
        } else if (tag == "link") {
            auto a = read_id(is);
            auto b = read_id(is);
            std::string kind;
            if (!(is >> kind)) throw ParseError("missing link kind", lineno);
            try {
                links.push_back({a, b, parse_link_kind(kind)});
            } catch (const InvalidParameter& e) {
                throw ParseError(e.what(), lineno);
            }
        } else {
            throw ParseError("unknown record '" + tag + "'", lineno);
        }
    }
    if (n == 0) throw ParseError("missing n header", lineno);
    if (seen_nodes != declared_nodes || declared_nodes != Indexer(n).count())
        throw ParseError("node records disagree with node_count", lineno);
    std::array<std::size_t, 4> actual{};
    for (const auto& l : links) ++actual[static_cast<std::size_t>(l.kind)];
    for (std::size_t k = 0; k < 4; ++k)
        if (!have_count[k] || actual[k] != declared[k])
            throw ParseError("link records disagree with count header", lineno);
    try {
        return MmtGraph(n, std::move(links));
    } catch (const InvalidParameter& e) {
        throw ParseError(e.what(), lineno);
    }
}

}  // namespace mmtnc
