#include "netevo/fitness.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "netevo/parallel.hpp"

namespace netevo {

GrowthGraph erdos_renyi(std::size_t n, std::size_t m, bool directed, Rng& rng)
{
    GrowthGraph g(n, directed);
    if (m > g.capacity())
        throw std::invalid_argument("ER graph cannot hold the requested number of arcs");
    if (2 * m <= g.capacity()) {
        while (g.arc_count() < m) {
            auto u = static_cast<Vertex>(uniform_index(rng, n));
            auto v = static_cast<Vertex>(uniform_index(rng, n));
            g.add_arc(u, v);
        }
        return g;
    }
    std::vector<Arc> pool;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = directed ? 0 : a + 1; b < n; ++b)
            if (a != b)
                pool.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
    std::shuffle(pool.begin(), pool.end(), rng);
    for (std::size_t k = 0; k < m; ++k)
        g.add_arc(pool[k].first, pool[k].second);
    return g;
}

std::string hex64(std::uint64_t value)
{
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << value;
    return os.str();
}

std::uint64_t baseline_params_hash(std::size_t ensemble_size, const MetricParams& params, std::uint64_t seed)
{
    std::ostringstream os;
    os.precision(17);
    os << "er:" << ensemble_size << ':' << seed << ':' << params.damping << ':' << params.tolerance << ':'
       << params.max_iterations << ':' << params.exact_distance_limit << ':' << params.sampled_sources << ':'
       << params.seed;
    return fnv1a(os.str());
}

BaselineNorms baseline_norms(const GrowthGraph& target, const MetricProfile& target_profile, std::size_t ensemble_size,
    const MetricParams& params, std::uint64_t seed, unsigned jobs)
{
    if (ensemble_size == 0)
        throw std::invalid_argument("ensemble size must be positive");
    if (target.vertex_count() == 0)
        throw std::invalid_argument("target network is empty");

    std::vector<DissimilarityVector> members(ensemble_size);
    parallel_for(ensemble_size, jobs, [&](std::size_t k) {
        auto rng = make_stream(seed, "baseline", k);
        auto er = erdos_renyi(target.vertex_count(), target.arc_count(), target.directed(), rng);
        members[k] = dissimilarity_vector(target_profile, metric_profile(er, params));
    });

    BaselineNorms norms;
    norms.target_hash = target.content_hash();
    norms.params_hash = baseline_params_hash(ensemble_size, params, seed);
    norms.ensemble_size = ensemble_size;
    norms.seed = seed;
    for (const auto& name : metric_names(target.directed())) {
        double sum = 0.0;
        for (const auto& d : members)
            sum += d.at(name);
        double mean = sum / static_cast<double>(ensemble_size);
        if (!(mean > 0.0))
            throw std::runtime_error("baseline mean dissimilarity for " + name + " is zero; cannot normalize");
        norms.per_metric_mean[name] = mean;
    }
    return norms;
}

BaselineNorms baseline_norms(const GrowthGraph& target, std::size_t ensemble_size, const MetricParams& params,
    std::uint64_t seed, unsigned jobs)
{
    return baseline_norms(target, metric_profile(target, params), ensemble_size, params, seed, jobs);
}

void save_norms(const std::filesystem::path& path, const BaselineNorms& norms)
{
    nlohmann::ordered_json j;
    j["target_hash"] = hex64(norms.target_hash);
    j["params_hash"] = hex64(norms.params_hash);
    j["ensemble_size"] = norms.ensemble_size;
    j["means"] = norms.per_metric_mean;
    j["seed"] = norms.seed;
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write baseline file " + path.string());
    out << j.dump(2) << '\n';
}

BaselineNorms load_norms(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open baseline file " + path.string());
    try {
        auto j = nlohmann::json::parse(in);
        BaselineNorms norms;
        norms.target_hash = std::stoull(j.at("target_hash").get<std::string>(), nullptr, 16);
        norms.params_hash = std::stoull(j.at("params_hash").get<std::string>(), nullptr, 16);
        norms.ensemble_size = j.at("ensemble_size").get<std::size_t>();
        norms.seed = j.at("seed").get<std::uint64_t>();
        norms.per_metric_mean = j.at("means").get<std::map<std::string, double>>();
        return norms;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed baseline file " + path.string() + ": " + e.what());
    }
}

BaselineNorms cached_baseline_norms(const GrowthGraph& target, const MetricProfile& target_profile,
    std::size_t ensemble_size, const MetricParams& params, std::uint64_t seed, const std::filesystem::path& cache_dir,
    unsigned jobs)
{
    if (cache_dir.empty())
        return baseline_norms(target, target_profile, ensemble_size, params, seed, jobs);
    auto file = cache_dir / (hex64(target.content_hash()) + "-" + hex64(baseline_params_hash(ensemble_size, params, seed)) + ".json");
    if (std::filesystem::exists(file)) {
        auto norms = load_norms(file);
        if (norms.target_hash == target.content_hash() && norms.ensemble_size == ensemble_size && norms.seed == seed)
            return norms;
    }
    auto norms = baseline_norms(target, target_profile, ensemble_size, params, seed, jobs);
    std::filesystem::create_directories(cache_dir);
    save_norms(file, norms);
    return norms;
}

FitnessReport fitness_from_dissimilarities(const DissimilarityVector& dissimilarity, const BaselineNorms& norms)
{
    if (dissimilarity.size() != norms.per_metric_mean.size())
        throw std::invalid_argument("metric set mismatch between candidate and baseline");
    FitnessReport report;
    for (const auto& [name, value] : dissimilarity) {
        auto it = norms.per_metric_mean.find(name);
        if (it == norms.per_metric_mean.end())
            throw std::invalid_argument("baseline has no metric named " + name);
        report.ratios[name] = value / it->second;
    }
    report.fitness = 0.0;
    for (const auto& [name, ratio] : report.ratios)
        report.fitness = std::max(report.fitness, ratio);
    return report;
}

FitnessReport fitness(const MetricProfile& candidate, const MetricProfile& target, const BaselineNorms& norms)
{
    return fitness_from_dissimilarities(dissimilarity_vector(target, candidate), norms);
}

} // namespace netevo
