#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "netevo/fitness.hpp"

using namespace netevo;

namespace {

BaselineNorms unit_norms(bool directed, double value = 1.0)
{
    BaselineNorms norms;
    for (const auto& name : metric_names(directed))
        norms.per_metric_mean[name] = value;
    return norms;
}

GrowthGraph complete_graph(std::size_t n, bool directed)
{
    GrowthGraph g(n, directed);
    for (Vertex u = 0; u < static_cast<Vertex>(n); ++u)
        for (Vertex v = 0; v < static_cast<Vertex>(n); ++v)
            g.add_arc(u, v);
    return g;
}

} // namespace

TEST_CASE("erdos_renyi produces the requested size")
{
    Rng rng(1);
    auto g = erdos_renyi(50, 300, true, rng);
    CHECK(g.vertex_count() == 50);
    CHECK(g.arc_count() == 300);
    CHECK(g.check_invariants());
    auto u = erdos_renyi(20, 190, false, rng);
    CHECK(u.saturated());
    CHECK_THROWS_AS(erdos_renyi(5, 21, true, rng), std::invalid_argument);
}

TEST_CASE("fitness is the largest normalized ratio")
{
    auto norms = unit_norms(true);
    norms.per_metric_mean["k_in"] = 5.0;
    DissimilarityVector d;
    for (const auto& name : metric_names(true))
        d[name] = 0.1;
    d["k_in"] = 3.0;
    auto report = fitness_from_dissimilarities(d, norms);
    CHECK(report.fitness == doctest::Approx(0.6));
    CHECK(report.ratios.at("k_in") == doctest::Approx(0.6));
    CHECK(report.ratios.at("tau") == doctest::Approx(0.1));
    CHECK(report.ratios.size() == 7);

    d.erase("tau");
    CHECK_THROWS_AS(fitness_from_dissimilarities(d, norms), std::invalid_argument);
}

TEST_CASE("fitness of the target against itself is zero")
{
    Rng rng(2);
    auto target = erdos_renyi(60, 400, true, rng);
    auto profile = metric_profile(target);
    auto norms = baseline_norms(target, profile, 5, MetricParams {}, 7);
    auto report = fitness(profile, profile, norms);
    CHECK(report.fitness == 0.0);
    for (const auto& [name, r] : report.ratios)
        CHECK(r == 0.0);
}

TEST_CASE("baseline norms are deterministic and independent of jobs")
{
    Rng rng(3);
    auto target = erdos_renyi(60, 400, true, rng);
    auto a = baseline_norms(target, 6, MetricParams {}, 11, 1);
    auto b = baseline_norms(target, 6, MetricParams {}, 11, 3);
    CHECK(a.per_metric_mean == b.per_metric_mean);
    CHECK(a.target_hash == target.content_hash());
    auto c = baseline_norms(target, 6, MetricParams {}, 12, 1);
    CHECK(a.per_metric_mean != c.per_metric_mean);
    CHECK(a.params_hash != c.params_hash);
    for (const auto& [name, mean] : a.per_metric_mean)
        CHECK(mean > 0.0);
}

TEST_CASE("rescaling the baseline rescales fitness")
{
    Rng rng(4);
    auto target = metric_profile(erdos_renyi(40, 200, false, rng));
    auto candidate = metric_profile(erdos_renyi(40, 200, false, rng));
    auto norms = unit_norms(false, 0.5);
    auto doubled = unit_norms(false, 1.0);
    CHECK(fitness(candidate, target, norms).fitness == doctest::Approx(2.0 * fitness(candidate, target, doubled).fitness));
}

TEST_CASE("baseline cache round trip")
{
    auto dir = std::filesystem::temp_directory_path() / "netevo_test_fitness_cache";
    std::filesystem::remove_all(dir);
    Rng rng(5);
    auto target = erdos_renyi(40, 200, true, rng);
    auto profile = metric_profile(target);
    auto first = cached_baseline_norms(target, profile, 4, MetricParams {}, 9, dir);
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        ++files;
        auto loaded = load_norms(entry.path());
        CHECK(loaded.per_metric_mean == first.per_metric_mean);
        CHECK(loaded.target_hash == first.target_hash);
        CHECK(loaded.params_hash == first.params_hash);
        CHECK(loaded.ensemble_size == 4);
        CHECK(entry.path().filename().string() == hex64(first.target_hash) + "-" + hex64(first.params_hash) + ".json");
    }
    CHECK(files == 1);
    auto second = cached_baseline_norms(target, profile, 4, MetricParams {}, 9, dir);
    CHECK(second.per_metric_mean == first.per_metric_mean);
    std::filesystem::remove_all(dir);
}

TEST_CASE("a target every ER graph reproduces cannot be normalized")
{
    auto target = complete_graph(4, true);
    CHECK_THROWS_AS(baseline_norms(target, 3, MetricParams {}, 1), std::runtime_error);
}

TEST_CASE("a fresh ER candidate scores near one against an ER target")
{
    // Tolerance from the spread of ER-to-ER dissimilarities.
    const int trials = 40;
    int inside = 0;
    for (int t = 0; t < trials; ++t) {
        auto rng = make_stream(100, "trial", static_cast<std::uint64_t>(t));
        auto target = erdos_renyi(100, 1000, true, rng);
        auto profile = metric_profile(target);
        auto norms = baseline_norms(target, profile, 30, MetricParams {}, static_cast<std::uint64_t>(t));
        auto report = fitness(metric_profile(erdos_renyi(100, 1000, true, rng)), profile, norms);
        if (report.fitness >= 0.5 && report.fitness <= 2.0)
            ++inside;
    }
    MESSAGE("ER candidates with fitness in [0.5, 2]: " << inside << " of " << trials);
    CHECK(inside >= 38);
}
