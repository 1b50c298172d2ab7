#pragma once

// Structural summaries of a network and dissimilarities between them.

#include <array>
#include <climits>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "netevo/graph.hpp"

namespace netevo {

/// Integer-keyed counts. Key Histogram::kOverflow holds unreachable pairs.
struct Histogram {
    static constexpr int kOverflow = INT_MAX;
    std::map<int, double> bins;

    [[nodiscard]] double total() const;
    [[nodiscard]] double count(int key) const;
    bool operator==(const Histogram&) const = default;
};

// Writes `bin count` lines; the overflow bin is written as `inf`.
void write_histogram(std::ostream& out, const Histogram& h);

enum class DistanceMode { Directed, Undirected };

struct MetricParams {
    double damping = 0.85;
    double tolerance = 1e-9;
    int max_iterations = 200;
    // All-sources BFS up to this many vertices, sampled sources beyond.
    std::size_t exact_distance_limit = 2000;
    std::size_t sampled_sources = 500;
    std::uint64_t seed = 0;
};

/// Power iteration with uniform redistribution of dangling mass. With
/// `reverse` every arc is inverted first. Undirected graphs use both
/// directions of each edge. Scores sum to 1.
std::vector<double> pagerank(const GrowthGraph& g, bool reverse, double damping = 0.85, double tolerance = 1e-9,
    int max_iterations = 200);

/// BFS distance histogram over ordered (source, target) pairs. Uses every
/// vertex as a source when source_cap >= n, otherwise source_cap distinct
/// sources drawn with `seed`.
Histogram distance_histogram(const GrowthGraph& g, DistanceMode mode, std::size_t source_cap, std::uint64_t seed = 0);

// Directed connected triad classes in standard order.
inline constexpr std::array<const char*, 13> kDirectedTriadNames {
    "021D", "021U", "021C", "111D", "111U", "030T", "030C", "201", "120D", "120U", "120C", "210", "300"
};
inline constexpr std::array<const char*, 2> kUndirectedTriadNames { "path", "triangle" };

/// Isomorphism class (0..15, standard census order starting at 003) of a
/// triad given its 6-bit adjacency code: bit 1 v->u, 2 u->v, 4 v->w,
/// 8 w->v, 16 u->w, 32 w->u.
int triad_class(unsigned code);

struct TriadCensus {
    std::vector<double> counts; // 13 (directed) or 2 (undirected) connected classes
    [[nodiscard]] double total() const;
    [[nodiscard]] std::vector<double> profile() const; // normalized; all zero when total is 0
};

TriadCensus triad_census(const GrowthGraph& g);
inline std::vector<double> triad_profile(const GrowthGraph& g) { return triad_census(g).profile(); }

/// Wasserstein-1 distance between two sorted empirical samples (integral of
/// the absolute CDF difference).
double emd(std::span<const double> sorted_a, std::span<const double> sorted_b);

/// Mean over bins occupied in either histogram of |ln((a + 1) / (b + 1))|.
double ratio_dissimilarity(const Histogram& a, const Histogram& b);

struct MetricProfile {
    bool directed = true;
    std::map<std::string, std::vector<double>> degree_dists;
    std::map<std::string, std::vector<double>> pagerank_dists;
    std::map<std::string, Histogram> distance_hists;
    TriadCensus triads;
};

// k_in, k_out, PR_d, PR_r, d_d, d_u, tau (directed); k, PR, d_u, tau (undirected).
std::vector<std::string> metric_names(bool directed);

MetricProfile metric_profile(const GrowthGraph& g, const MetricParams& params = {});

using DissimilarityVector = std::map<std::string, double>;

// Throws std::invalid_argument on directedness mismatch.
DissimilarityVector dissimilarity_vector(const MetricProfile& a, const MetricProfile& b);

} // namespace netevo
