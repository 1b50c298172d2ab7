#pragma once

// Mutation-only search with two champions: the best-fitness program and the
// shortest program whose fitness is within a tolerance of the best.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "netevo/fitness.hpp"
#include "netevo/genlang.hpp"
#include "netevo/growth.hpp"
#include "netevo/netmetrics.hpp"

namespace netevo {

struct SearchParams {
    double tolerance = 0.10;
    std::size_t stable_limit = 1000;
    // Hard stop after this many generations; 0 means no limit.
    std::size_t max_generations = 0;
    TreeGenParams tree;
    GrowthParams growth;
    MetricParams metrics;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Everything needed to score a program against one target network.
struct TargetProblem {
    std::size_t vertices = 0;
    std::size_t arcs = 0;
    bool directed = true;
    MetricProfile profile;
    BaselineNorms norms;

    static TargetProblem from_graph(const GrowthGraph& target, std::size_t ensemble_size, const MetricParams& metrics,
        std::uint64_t seed, const std::filesystem::path& cache_dir = {}, unsigned jobs = 1);
};

/// Grows one network with `prog` and scores it against the target.
FitnessReport evaluate_program(const TargetProblem& problem, const GeneratorProgram& prog, const GrowthParams& growth,
    const MetricParams& metrics, Rng& rng);

struct Champion {
    GeneratorProgram program;
    FitnessReport report;

    [[nodiscard]] double fitness() const { return report.fitness; }
    [[nodiscard]] std::size_t length() const { return program.length(); }
};

enum class SearchEvent { Init, None, Best, Shortest, Both };
std::string_view event_name(SearchEvent e);

struct HistoryEntry {
    std::size_t generation;
    SearchEvent event;
    double fitness; // of the program evaluated in this generation
    std::size_t length;
};

struct SearchState {
    Champion best;     // w_o
    Champion shortest; // w_s
    std::size_t generation = 0;
    std::size_t stable_count = 0;
    double tolerance = 0.10;
    std::size_t stable_limit = 1000;
    std::uint64_t seed = 0;
    std::vector<HistoryEntry> history;
    Rng mutation_rng;
};

// True when both champion invariants hold.
bool check_invariants(const SearchState& state);

SearchState init_state(const TargetProblem& problem, const SearchParams& params);

/// Outcome of comparing a scored child with the champions; applies the
/// replacement rules and returns which champions changed.
SearchEvent apply_child(SearchState& state, Champion child);

/// One generation: pick a parent from {w_o, w_s}, mutate, grow, score and
/// apply the replacement rules.
void step_generation(SearchState& state, const TargetProblem& problem, const SearchParams& params);

struct RunReport {
    Champion shortest;
    Champion best;
    std::vector<HistoryEntry> history;
    std::size_t generations = 0;
};

using GenerationObserver = std::function<void(const SearchState&)>;

/// Runs until neither champion changed for stable_limit generations (or
/// max_generations is reached).
RunReport run_search(const TargetProblem& problem, const SearchParams& params, const GenerationObserver& observer = {});

void write_history_csv(std::ostream& out, const std::vector<HistoryEntry>& history);

// Shortest round-trip decimal form.
std::string format_double(double value);

} // namespace netevo
