#pragma once

// Arc-by-arc network growth driven by a generator program.

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "netevo/genlang.hpp"
#include "netevo/graph.hpp"
#include "netevo/rng.hpp"

namespace netevo {

struct GrowthParams {
    double sample_ratio = 0.01;
    std::size_t min_sample = 50;
    int walk_count = 3;
    int walk_max_len = 10;
    double distance_cap = 11.0;

    // Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

class SaturatedError : public std::runtime_error {
public:
    SaturatedError()
        : std::runtime_error("saturated: no absent arc left to create")
    {
    }
};

enum class WalkMode { Undirected, Directed, Reverse };

/// Candidate sample size min(max(ceil(s_r * n^2), min_sample), |A'|).
std::size_t sample_size(const GrowthGraph& g, const GrowthParams& params);

/// Distinct absent arcs drawn uniformly without replacement. For undirected
/// graphs an arc (i, j) stands for {i, j}; i is the endpoint drawn first.
std::vector<Arc> sample_candidates(const GrowthGraph& g, const GrowthParams& params, Rng& rng);

/// Smallest step at which any of walk_count random walks from i (at most
/// walk_max_len steps each) reaches j; distance_cap when none does.
double walk_distance(const GrowthGraph& g, Vertex i, Vertex j, WalkMode mode, const GrowthParams& params, Rng& rng);

/// Context for arc i -> j. Only the distance fields selected by `needs` are
/// estimated (walks are the expensive part); the rest stay at distance_cap.
ArcContext arc_context(const GrowthGraph& g, Vertex i, Vertex j, const GrowthParams& params, Rng& rng,
    VarMask needs = VarMask::all());

/// Selection probabilities: negative weights count as zero and an all-zero
/// sample is treated as uniform.
std::vector<double> selection_probabilities(std::span<const double> weights);

std::size_t select_arc(std::span<const double> weights, Rng& rng);

struct GrowthStep {
    std::size_t step;
    const GrowthGraph& graph; // state before the chosen arc is inserted
    std::span<const Arc> candidates;
    std::span<const ArcContext> contexts;
    std::span<const double> weights;
    std::size_t chosen;
};

using StepObserver = std::function<void(const GrowthStep&)>;

struct GrowOptions {
    // Context fields to fill beyond the ones the program reads.
    VarMask extra_variables;
    StepObserver observer;
};

/// Grows m arcs on n initially isolated vertices. Throws SaturatedError if m
/// exceeds the capacity of the graph.
GrowthGraph grow_network(const GeneratorProgram& prog, std::size_t n, std::size_t m, const GrowthParams& params, Rng& rng,
    const GrowOptions& options = {});

} // namespace netevo
