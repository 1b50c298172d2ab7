#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace netevo {

// Vertices are 0-based internally; generator identifiers are index + 1.
using Vertex = std::int32_t;
using Arc = std::pair<Vertex, Vertex>;

/// Simple directed or undirected graph that only grows. No self-loops and no
/// duplicate arcs. For undirected graphs each edge is stored once logically
/// and appears in both endpoints' neighbour lists.
class GrowthGraph {
public:
    GrowthGraph(std::size_t n, bool directed);

    [[nodiscard]] std::size_t vertex_count() const { return out_.size(); }
    [[nodiscard]] std::size_t arc_count() const { return arcs_.size(); }
    [[nodiscard]] bool directed() const { return directed_; }

    // Number of legal arcs in a complete graph of this size and kind.
    [[nodiscard]] std::size_t capacity() const;
    [[nodiscard]] bool saturated() const { return arc_count() >= capacity(); }

    [[nodiscard]] bool has_arc(Vertex u, Vertex v) const;

    /// Inserts u -> v (or {u, v}). Returns false for self-loops and
    /// duplicates, leaving the graph unchanged.
    bool add_arc(Vertex u, Vertex v);

    // For undirected graphs both return the neighbour list.
    [[nodiscard]] std::span<const Vertex> out_neighbors(Vertex v) const { return out_[static_cast<std::size_t>(v)]; }
    [[nodiscard]] std::span<const Vertex> in_neighbors(Vertex v) const
    {
        return directed_ ? std::span<const Vertex>(in_[static_cast<std::size_t>(v)]) : out_neighbors(v);
    }

    // For undirected graphs both are the degree.
    [[nodiscard]] std::int64_t indeg(Vertex v) const { return static_cast<std::int64_t>(in_neighbors(v).size()); }
    [[nodiscard]] std::int64_t outdeg(Vertex v) const { return static_cast<std::int64_t>(out_neighbors(v).size()); }

    // Arcs in insertion order.
    [[nodiscard]] const std::vector<Arc>& arcs() const { return arcs_; }

    // Recounts degrees from the arc list and compares with the adjacency.
    [[nodiscard]] bool check_invariants() const;

    // Hash over (n, directedness, sorted canonical arcs).
    [[nodiscard]] std::uint64_t content_hash() const;

private:
    [[nodiscard]] std::uint64_t key(Vertex u, Vertex v) const;

    bool directed_;
    std::vector<std::vector<Vertex>> out_;
    std::vector<std::vector<Vertex>> in_;
    std::vector<Arc> arcs_;
    std::unordered_set<std::uint64_t> present_;
};

// FirstAppearance: sequential identifiers in order of first appearance.
// Random: a seeded permutation of that order.
// Numeric: labels must be positive integers and keep their value; a
// `# vertices N` comment raises the vertex count to N (isolated vertices).
enum class IdOrder { FirstAppearance, Random, Numeric };

struct LoadedGraph {
    GrowthGraph graph;
    std::vector<std::string> labels; // labels[v] is the input label of vertex v
    std::size_t skipped_self_loops = 0;
    std::size_t skipped_duplicates = 0;
};

/// Parses `src dst` label pairs, one per line, '#' comments.
LoadedGraph read_edge_list(std::istream& in, bool directed, IdOrder order = IdOrder::FirstAppearance, std::uint64_t seed = 0);
LoadedGraph read_edge_list(const std::filesystem::path& path, bool directed, IdOrder order = IdOrder::FirstAppearance,
    std::uint64_t seed = 0);

// Writes 1-based `src dst` lines in insertion order, optionally preceded by a
// `# vertices N` line.
void write_edge_list(std::ostream& out, const GrowthGraph& g, bool vertex_header = false);
void write_edge_list(const std::filesystem::path& path, const GrowthGraph& g, bool vertex_header = false);

} // namespace netevo
