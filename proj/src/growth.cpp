#include "netevo/growth.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace netevo {

void GrowthParams::validate() const
{
    if (!(sample_ratio > 0.0 && sample_ratio <= 1.0))
        throw std::invalid_argument("sample ratio must lie in (0, 1]");
    if (walk_count < 1)
        throw std::invalid_argument("walk count must be >= 1");
    if (walk_max_len < 1)
        throw std::invalid_argument("walk length must be >= 1");
    if (!(distance_cap > walk_max_len))
        throw std::invalid_argument("distance cap must exceed the walk length");
}

std::size_t sample_size(const GrowthGraph& g, const GrowthParams& params)
{
    auto n = static_cast<double>(g.vertex_count());
    auto wanted = static_cast<std::size_t>(std::ceil(params.sample_ratio * n * n - 1e-9));
    wanted = std::max(wanted, params.min_sample);
    return std::min(wanted, g.capacity() - g.arc_count());
}

std::vector<Arc> sample_candidates(const GrowthGraph& g, const GrowthParams& params, Rng& rng)
{
    if (g.saturated())
        throw SaturatedError();
    const std::size_t n = g.vertex_count();
    const std::size_t absent = g.capacity() - g.arc_count();
    const std::size_t k = sample_size(g, params);

    std::vector<Arc> out;
    out.reserve(k);
    if (2 * k <= absent) {
        // Rejection sampling over ordered non-self pairs.
        std::unordered_set<std::uint64_t> chosen;
        chosen.reserve(2 * k);
        while (out.size() < k) {
            auto u = static_cast<Vertex>(uniform_index(rng, n));
            auto v = static_cast<Vertex>(uniform_index(rng, n - 1));
            if (v >= u)
                ++v;
            if (g.has_arc(u, v))
                continue;
            Vertex a = u;
            Vertex b = v;
            if (!g.directed() && a > b)
                std::swap(a, b);
            auto key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
            if (chosen.insert(key).second)
                out.emplace_back(u, v);
        }
        return out;
    }

    // Dense regime: enumerate A' and take a partial Fisher-Yates prefix.
    std::vector<Arc> pool;
    pool.reserve(absent);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = g.directed() ? 0 : a + 1; b < n; ++b) {
            auto u = static_cast<Vertex>(a);
            auto v = static_cast<Vertex>(b);
            if (u != v && !g.has_arc(u, v))
                pool.emplace_back(u, v);
        }
    }
    for (std::size_t t = 0; t < k; ++t) {
        std::size_t pick = t + uniform_index(rng, pool.size() - t);
        std::swap(pool[t], pool[pick]);
        if (!g.directed() && bernoulli(rng, 0.5))
            std::swap(pool[t].first, pool[t].second);
        out.push_back(pool[t]);
    }
    return out;
}

double walk_distance(const GrowthGraph& g, Vertex i, Vertex j, WalkMode mode, const GrowthParams& params, Rng& rng)
{
    if (!g.directed() && mode != WalkMode::Undirected)
        throw std::invalid_argument("directed walk requested on an undirected graph");
    double best = params.distance_cap;
    for (int w = 0; w < params.walk_count; ++w) {
        Vertex at = i;
        for (int step = 1; step <= params.walk_max_len && step < best; ++step) {
            auto out = g.out_neighbors(at);
            auto in = g.in_neighbors(at);
            std::size_t choices = 0;
            switch (mode) {
            case WalkMode::Directed:
                choices = out.size();
                break;
            case WalkMode::Reverse:
                choices = in.size();
                break;
            case WalkMode::Undirected:
                choices = g.directed() ? out.size() + in.size() : out.size();
                break;
            }
            if (choices == 0)
                break;
            std::size_t pick = uniform_index(rng, choices);
            if (mode == WalkMode::Reverse)
                at = in[pick];
            else
                at = pick < out.size() ? out[pick] : in[pick - out.size()];
            if (at == j) {
                best = step;
                break;
            }
        }
    }
    return best;
}

ArcContext arc_context(const GrowthGraph& g, Vertex i, Vertex j, const GrowthParams& params, Rng& rng, VarMask needs)
{
    ArcContext ctx;
    ctx.directed = g.directed();
    ctx.i = i + 1;
    ctx.j = j + 1;
    ctx.indeg_i = g.indeg(i);
    ctx.indeg_j = g.indeg(j);
    ctx.d_u = ctx.d_d = ctx.d_r = params.distance_cap;
    if (g.directed()) {
        ctx.outdeg_i = g.outdeg(i);
        ctx.outdeg_j = g.outdeg(j);
    }
    if (needs.has(Var::Du))
        ctx.d_u = walk_distance(g, i, j, WalkMode::Undirected, params, rng);
    if (g.directed()) {
        if (needs.has(Var::Dd))
            ctx.d_d = walk_distance(g, i, j, WalkMode::Directed, params, rng);
        if (needs.has(Var::Dr))
            ctx.d_r = walk_distance(g, i, j, WalkMode::Reverse, params, rng);
    }
    return ctx;
}

std::vector<double> selection_probabilities(std::span<const double> weights)
{
    std::vector<double> p(weights.size(), 0.0);
    double top = 0.0;
    for (double w : weights)
        if (w > top)
            top = w;
    if (top <= 0.0 || !std::isfinite(top)) {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
        return p;
    }
    // Scale by the maximum so the sum cannot overflow.
    double total = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        p[k] = weights[k] > 0.0 ? weights[k] / top : 0.0;
        total += p[k];
    }
    for (double& x : p)
        x /= total;
    return p;
}

std::size_t select_arc(std::span<const double> weights, Rng& rng)
{
    if (weights.empty())
        throw std::invalid_argument("select_arc needs at least one weight");
    auto p = selection_probabilities(weights);
    double u = uniform_real(rng, 0.0, 1.0);
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] <= 0.0)
            continue;
        last_positive = k;
        acc += p[k];
        if (u < acc)
            return k;
    }
    return last_positive;
}

GrowthGraph grow_network(const GeneratorProgram& prog, std::size_t n, std::size_t m, const GrowthParams& params, Rng& rng,
    const GrowOptions& options)
{
    params.validate();
    GrowthGraph g(n, prog.directed());
    if (m > g.capacity())
        throw SaturatedError();

    Rng sampling(rng());
    Rng selection(rng());
    Rng walks(rng());
    const VarMask needs = prog.variables() | options.extra_variables;

    std::vector<ArcContext> contexts;
    std::vector<double> weights;
    for (std::size_t step = 0; step < m; ++step) {
        auto candidates = sample_candidates(g, params, sampling);
        contexts.clear();
        weights.clear();
        for (auto [i, j] : candidates) {
            contexts.push_back(arc_context(g, i, j, params, walks, needs));
            weights.push_back(evaluate(prog, contexts.back()));
        }
        std::size_t chosen = select_arc(weights, selection);
        if (options.observer)
            options.observer(GrowthStep { step, g, candidates, contexts, weights, chosen });
        g.add_arc(candidates[chosen].first, candidates[chosen].second);
    }
    return g;
}

} // namespace netevo
