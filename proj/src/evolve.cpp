#include "netevo/evolve.hpp"

#include <array>
#include <charconv>
#include <ostream>
#include <stdexcept>

namespace netevo {

void SearchParams::validate() const
{
    if (!(tolerance >= 0.0))
        throw std::invalid_argument("tolerance must be nonnegative");
    if (stable_limit < 1)
        throw std::invalid_argument("stable generation limit must be >= 1");
    if (tree.max_depth < 1)
        throw std::invalid_argument("max depth must be >= 1");
    growth.validate();
}

TargetProblem TargetProblem::from_graph(const GrowthGraph& target, std::size_t ensemble_size, const MetricParams& metrics,
    std::uint64_t seed, const std::filesystem::path& cache_dir, unsigned jobs)
{
    TargetProblem p;
    p.vertices = target.vertex_count();
    p.arcs = target.arc_count();
    p.directed = target.directed();
    p.profile = metric_profile(target, metrics);
    p.norms = cached_baseline_norms(target, p.profile, ensemble_size, metrics, seed, cache_dir, jobs);
    return p;
}

FitnessReport evaluate_program(const TargetProblem& problem, const GeneratorProgram& prog, const GrowthParams& growth,
    const MetricParams& metrics, Rng& rng)
{
    auto g = grow_network(prog, problem.vertices, problem.arcs, growth, rng);
    return fitness(metric_profile(g, metrics), problem.profile, problem.norms);
}

std::string_view event_name(SearchEvent e)
{
    switch (e) {
    case SearchEvent::Init:
        return "init";
    case SearchEvent::None:
        return "none";
    case SearchEvent::Best:
        return "best";
    case SearchEvent::Shortest:
        return "shortest";
    case SearchEvent::Both:
        return "both";
    }
    return "?";
}

bool check_invariants(const SearchState& s)
{
    return s.shortest.fitness() <= (1.0 + s.tolerance) * s.best.fitness() && s.shortest.length() <= s.best.length();
}

namespace {

    Champion score(const TargetProblem& problem, GeneratorProgram prog, const SearchParams& params, std::size_t generation)
    {
        auto rng = make_stream(params.seed, "growth", generation);
        auto report = evaluate_program(problem, prog, params.growth, params.metrics, rng);
        return Champion { std::move(prog), std::move(report) };
    }

    TreeGenParams tree_params(const TargetProblem& problem, const SearchParams& params)
    {
        auto t = params.tree;
        t.directed = problem.directed;
        return t;
    }

} // namespace

SearchState init_state(const TargetProblem& problem, const SearchParams& params)
{
    params.validate();
    auto rng = make_stream(params.seed, "mutation");
    auto prog = random_program(tree_params(problem, params), rng);
    auto first = score(problem, std::move(prog), params, 0);
    SearchState s { first, first, 0, 0, params.tolerance, params.stable_limit, params.seed, {}, rng };
    s.history.push_back({ 0, SearchEvent::Init, first.fitness(), first.length() });
    return s;
}

SearchEvent apply_child(SearchState& s, Champion child)
{
    const double fc = child.fitness();
    bool best_changed = false;
    bool shortest_changed = false;

    if (fc < s.best.fitness()) {
        s.best = child;
        best_changed = true;
        if (s.shortest.fitness() > (1.0 + s.tolerance) * s.best.fitness()) {
            s.shortest = s.best;
            shortest_changed = true;
        }
    }
    if (fc <= (1.0 + s.tolerance) * s.best.fitness()) {
        bool shorter = child.length() < s.shortest.length();
        bool tie_better = child.length() == s.shortest.length() && fc < s.shortest.fitness();
        if (shorter || tie_better) {
            s.shortest = std::move(child);
            shortest_changed = true;
        }
    }

    if (best_changed || shortest_changed)
        s.stable_count = 0;
    else
        ++s.stable_count;
    if (best_changed && shortest_changed)
        return SearchEvent::Both;
    if (best_changed)
        return SearchEvent::Best;
    return shortest_changed ? SearchEvent::Shortest : SearchEvent::None;
}

void step_generation(SearchState& s, const TargetProblem& problem, const SearchParams& params)
{
    ++s.generation;
    const Champion& parent = bernoulli(s.mutation_rng, 0.5) ? s.best : s.shortest;
    auto child_prog = mutate(parent.program, tree_params(problem, params), s.mutation_rng);
    auto child = score(problem, std::move(child_prog), params, s.generation);
    const double fc = child.fitness();
    const std::size_t len = child.length();
    auto event = apply_child(s, std::move(child));
    s.history.push_back({ s.generation, event, fc, len });
}

RunReport run_search(const TargetProblem& problem, const SearchParams& params, const GenerationObserver& observer)
{
    auto state = init_state(problem, params);
    if (observer)
        observer(state);
    while (state.stable_count < params.stable_limit
        && (params.max_generations == 0 || state.generation < params.max_generations)) {
        step_generation(state, problem, params);
        if (observer)
            observer(state);
    }
    return RunReport { state.shortest, state.best, std::move(state.history), state.generation };
}

std::string format_double(double value)
{
    std::array<char, 64> buf {};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

void write_history_csv(std::ostream& out, const std::vector<HistoryEntry>& history)
{
    out << "generation,event,fitness,length\n";
    for (const auto& h : history)
        out << h.generation << ',' << event_name(h.event) << ',' << format_double(h.fitness) << ',' << h.length << '\n';
}

} // namespace netevo
