#pragma once

// Multi-Mesh of Trees: n^2 blocks of n x n processors. Rows and columns of a
// block form binary trees (children of index k are 2k and 2k+1); blocks are
// joined by boundary links between column 1 / column n and row 1 / row n.

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mmtnc {

/// P(alpha, beta, i, j): block row, block column, row in block, column in block.
/// All coordinates are 1-based.
struct ProcessorId {
    std::uint16_t alpha = 1;
    std::uint16_t beta = 1;
    std::uint16_t i = 1;
    std::uint16_t j = 1;

    friend auto operator<=>(const ProcessorId&, const ProcessorId&) = default;
};

std::string to_string(const ProcessorId& p);

enum class LinkKind : std::uint8_t {
    HorizontalIntrablock,
    VerticalIntrablock,
    HorizontalInterblock,
    VerticalInterblock,
};

inline constexpr std::array<LinkKind, 4> kAllLinkKinds = {
    LinkKind::HorizontalIntrablock, LinkKind::VerticalIntrablock,
    LinkKind::HorizontalInterblock, LinkKind::VerticalInterblock};

std::string_view to_string(LinkKind kind);
/// Throws InvalidParameter on an unknown name.
LinkKind parse_link_kind(std::string_view name);

/// One bidirected link. `origin` is the endpoint named first by its generating rule.
struct Link {
    ProcessorId origin;
    ProcessorId destination;
    LinkKind kind = LinkKind::HorizontalIntrablock;
    unsigned capacity = 1;

    friend bool operator==(const Link&, const Link&) = default;
};

struct Neighbor {
    ProcessorId peer;
    LinkKind kind;
    std::size_t link;  // index into MmtGraph::links()

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Dense 0-based index of processors in lexicographic (alpha, beta, i, j) order.
class Indexer {
public:
    explicit Indexer(unsigned n) : n_(n) {}

    unsigned n() const noexcept { return n_; }
    std::size_t count() const noexcept {
        return static_cast<std::size_t>(n_) * n_ * n_ * n_;
    }
    bool valid(const ProcessorId& p) const noexcept;
    /// Throws InvalidParameter for out-of-range coordinates.
    std::size_t index(const ProcessorId& p) const;
    ProcessorId id(std::size_t index) const;

private:
    unsigned n_;
};

/// Immutable MMT(n) graph. Links are stored once, in canonical order, and
/// referenced from both endpoints' adjacency lists.
class MmtGraph {
public:
    /// Validates and indexes an explicit link list (used by the builder and
    /// by the topology reader). Throws InvalidParameter on self-loops,
    /// duplicates, out-of-range endpoints, or a kind that does not match the
    /// endpoints' coordinates.
    MmtGraph(unsigned n, std::vector<Link> links);

    unsigned n() const noexcept { return indexer_.n(); }
    const Indexer& indexer() const noexcept { return indexer_; }
    std::size_t node_count() const noexcept { return indexer_.count(); }
    const std::vector<Link>& links() const noexcept { return links_; }

    /// Throws InvalidParameter for an invalid processor.
    std::vector<Neighbor> neighbors(const ProcessorId& p) const;
    const std::vector<std::size_t>& incident(std::size_t node) const { return incident_[node]; }

    /// Index of a link joining a and b (either orientation) of the given kind.
    std::optional<std::size_t> find_link(const ProcessorId& a, const ProcessorId& b,
                                         LinkKind kind) const;

    friend bool operator==(const MmtGraph& a, const MmtGraph& b) {
        return a.n() == b.n() && a.links_ == b.links_;
    }

private:
    Indexer indexer_;
    std::vector<Link> links_;
    std::vector<std::vector<std::size_t>> incident_;
};

/// Throws InvalidParameter for n < 2.
MmtGraph build_mmt(unsigned n);

/// True if the kind is the one the generating rules assign to (a, b).
bool link_kind_consistent(unsigned n, const ProcessorId& a, const ProcessorId& b, LinkKind kind);

struct GraphMetrics {
    std::size_t node_count = 0;
    std::array<std::size_t, 4> edge_count_by_kind{};
    std::size_t edge_count = 0;
    unsigned bfs_diameter = 0;
    bool diameter_is_lower_bound = false;
    std::size_t max_degree = 0;
    /// Links crossing the best of a few balanced block cuts; an upper bound
    /// on the bisection width.
    std::size_t bisection_upper_bound = 0;
};

/// Exact all-pairs BFS diameter for n <= `exact_limit`, double-sweep lower
/// bound otherwise. Throws StructuralError if the graph is disconnected.
GraphMetrics graph_metrics(const MmtGraph& g, unsigned exact_limit = 4);

/// BFS hop distances from one node.
std::vector<unsigned> bfs_distances(const MmtGraph& g, std::size_t source);

/// Canonical text export: header, one node record per processor, one link
/// record per link, all sorted lexicographically.
void export_topology(const MmtGraph& g, std::ostream& out);
std::string export_topology(const MmtGraph& g);
/// Throws ParseError with the offending line number.
MmtGraph read_topology(std::istream& in);

}  // namespace mmtnc
