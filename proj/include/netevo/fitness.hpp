#pragma once

// Fitness of a synthetic network: per-metric dissimilarity to the target,
// expressed as a ratio to the mean dissimilarity between the target and an
// Erdos-Renyi ensemble of the same size. Fitness is the largest ratio.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "netevo/graph.hpp"
#include "netevo/netmetrics.hpp"
#include "netevo/rng.hpp"

namespace netevo {

struct BaselineNorms {
    std::uint64_t target_hash = 0;
    std::uint64_t params_hash = 0;
    std::size_t ensemble_size = 0;
    std::uint64_t seed = 0;
    std::map<std::string, double> per_metric_mean;
};

struct FitnessReport {
    std::map<std::string, double> ratios;
    double fitness = 0.0;
};

/// Uniform random simple graph with exactly m arcs.
GrowthGraph erdos_renyi(std::size_t n, std::size_t m, bool directed, Rng& rng);

std::uint64_t baseline_params_hash(std::size_t ensemble_size, const MetricParams& params, std::uint64_t seed);

/// Mean dissimilarity between the target and `ensemble_size` ER graphs with
/// the target's (n, m, directedness). Member k draws from stream
/// ("baseline", k) of `seed`, so results do not depend on `jobs`.
/// Throws std::runtime_error if any mean is zero.
BaselineNorms baseline_norms(const GrowthGraph& target, const MetricProfile& target_profile, std::size_t ensemble_size,
    const MetricParams& params, std::uint64_t seed, unsigned jobs = 1);
BaselineNorms baseline_norms(const GrowthGraph& target, std::size_t ensemble_size, const MetricParams& params,
    std::uint64_t seed, unsigned jobs = 1);

void save_norms(const std::filesystem::path& path, const BaselineNorms& norms);
BaselineNorms load_norms(const std::filesystem::path& path);

/// Looks up `<cache_dir>/<target hash>-<params hash>.json`, computing and
/// storing the norms on a miss. An empty cache_dir disables caching.
BaselineNorms cached_baseline_norms(const GrowthGraph& target, const MetricProfile& target_profile,
    std::size_t ensemble_size, const MetricParams& params, std::uint64_t seed, const std::filesystem::path& cache_dir,
    unsigned jobs = 1);

// Throws std::invalid_argument when metric names differ.
FitnessReport fitness_from_dissimilarities(const DissimilarityVector& dissimilarity, const BaselineNorms& norms);
FitnessReport fitness(const MetricProfile& candidate, const MetricProfile& target, const BaselineNorms& norms);

std::string hex64(std::uint64_t value);

} // namespace netevo
