#include "netevo/netmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <queue>
#include <stdexcept>

#include "netevo/rng.hpp"

namespace netevo {

double Histogram::total() const
{
    double t = 0.0;
    for (const auto& [k, c] : bins)
        t += c;
    return t;
}

double Histogram::count(int key) const
{
    auto it = bins.find(key);
    return it == bins.end() ? 0.0 : it->second;
}

void write_histogram(std::ostream& out, const Histogram& h)
{
    for (const auto& [k, c] : h.bins) {
        if (k == Histogram::kOverflow)
            out << "inf";
        else
            out << k;
        out << ' ' << c << '\n';
    }
}

// --- PageRank ----------------------------------------------------------------

std::vector<double> pagerank(const GrowthGraph& g, bool reverse, double damping, double tolerance, int max_iterations)
{
    const std::size_t n = g.vertex_count();
    if (n == 0)
        return {};
    auto nd = static_cast<double>(n);
    // Scores flow along `succ`; mass arriving at v comes from pred(v).
    auto succ = [&](Vertex v) { return reverse ? g.in_neighbors(v) : g.out_neighbors(v); };
    auto pred = [&](Vertex v) { return reverse ? g.out_neighbors(v) : g.in_neighbors(v); };

    std::vector<double> x(n, 1.0 / nd);
    std::vector<double> next(n);
    for (int it = 0; it < max_iterations; ++it) {
        double dangling = 0.0;
        for (std::size_t v = 0; v < n; ++v)
            if (succ(static_cast<Vertex>(v)).empty())
                dangling += x[v];
        const double base = (1.0 - damping) / nd + damping * dangling / nd;
        for (std::size_t v = 0; v < n; ++v) {
            double in = 0.0;
            for (Vertex u : pred(static_cast<Vertex>(v)))
                in += x[static_cast<std::size_t>(u)] / static_cast<double>(succ(u).size());
            next[v] = base + damping * in;
        }
        double sum = std::accumulate(next.begin(), next.end(), 0.0);
        double change = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            next[v] /= sum;
            change += std::fabs(next[v] - x[v]);
        }
        x.swap(next);
        if (change < tolerance)
            break;
    }
    return x;
}

// --- distances ---------------------------------------------------------------

Histogram distance_histogram(const GrowthGraph& g, DistanceMode mode, std::size_t source_cap, std::uint64_t seed)
{
    const std::size_t n = g.vertex_count();
    if (mode == DistanceMode::Directed && !g.directed())
        throw std::invalid_argument("directed distances requested on an undirected graph");

    std::vector<Vertex> sources(n);
    std::iota(sources.begin(), sources.end(), 0);
    if (source_cap < n) {
        auto rng = make_stream(seed, "distance-sources");
        std::shuffle(sources.begin(), sources.end(), rng);
        sources.resize(source_cap);
        std::sort(sources.begin(), sources.end());
    }

    const bool both = mode == DistanceMode::Undirected && g.directed();
    std::vector<std::int64_t> counts(n + 1, 0);
    std::int64_t unreachable = 0;
    std::vector<int> dist(n);
    std::vector<Vertex> queue(n);
    for (Vertex s : sources) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[static_cast<std::size_t>(s)] = 0;
        std::size_t head = 0;
        std::size_t tail = 0;
        queue[tail++] = s;
        std::size_t reached = 1;
        while (head < tail) {
            Vertex v = queue[head++];
            int dv = dist[static_cast<std::size_t>(v)];
            auto visit = [&](Vertex w) {
                auto& dw = dist[static_cast<std::size_t>(w)];
                if (dw < 0) {
                    dw = dv + 1;
                    queue[tail++] = w;
                    ++counts[static_cast<std::size_t>(dw)];
                    ++reached;
                }
            };
            for (Vertex w : g.out_neighbors(v))
                visit(w);
            if (both)
                for (Vertex w : g.in_neighbors(v))
                    visit(w);
        }
        unreachable += static_cast<std::int64_t>(n - reached);
    }

    Histogram h;
    for (std::size_t d = 1; d <= n; ++d)
        if (counts[d] > 0)
            h.bins[static_cast<int>(d)] = static_cast<double>(counts[d]);
    if (unreachable > 0)
        h.bins[Histogram::kOverflow] = static_cast<double>(unreachable);
    return h;
}

// --- triads ------------------------------------------------------------------

namespace {

    int classify_triad(unsigned code)
    {
        bool adj[3][3] = {};
        adj[0][1] = code & 1U;
        adj[1][0] = code & 2U;
        adj[0][2] = code & 4U;
        adj[2][0] = code & 8U;
        adj[1][2] = code & 16U;
        adj[2][1] = code & 32U;

        constexpr int pairs[3][2] = { { 0, 1 }, { 0, 2 }, { 1, 2 } };
        int mutual = 0;
        int asym = 0;
        int mutual_pair = -1;
        int out[3] = {};
        int in[3] = {};
        for (int p = 0; p < 3; ++p) {
            int a = pairs[p][0];
            int b = pairs[p][1];
            if (adj[a][b] && adj[b][a]) {
                ++mutual;
                mutual_pair = p;
            } else if (adj[a][b] || adj[b][a]) {
                ++asym;
                int from = adj[a][b] ? a : b;
                int to = adj[a][b] ? b : a;
                ++out[from];
                ++in[to];
            }
        }
        // Vertex outside the (single) mutual dyad.
        auto third = [&] { return 3 - pairs[mutual_pair][0] - pairs[mutual_pair][1]; };

        switch (mutual * 4 + asym) {
        case 0:
            return 0; // 003
        case 1:
            return 1; // 012
        case 4:
            return 2; // 102
        case 2:
            for (int v = 0; v < 3; ++v) {
                if (out[v] == 2)
                    return 3; // 021D
                if (in[v] == 2)
                    return 4; // 021U
            }
            return 5; // 021C
        case 5:
            return out[third()] == 1 ? 6 : 7; // 111D : 111U
        case 3:
            return (out[0] == 1 && out[1] == 1 && out[2] == 1) ? 9 : 8; // 030C : 030T
        case 8:
            return 10; // 201
        case 6: {
            int t = third();
            if (out[t] == 2)
                return 11; // 120D
            if (in[t] == 2)
                return 12; // 120U
            return 13;     // 120C
        }
        case 9:
            return 14; // 210
        case 12:
            return 15; // 300
        default:
            throw std::logic_error("impossible triad code");
        }
    }

    std::array<int, 64> make_triad_table()
    {
        std::array<int, 64> t {};
        for (unsigned c = 0; c < 64; ++c)
            t[c] = classify_triad(c);
        return t;
    }

    const std::array<int, 64>& triad_table()
    {
        static const auto table = make_triad_table();
        return table;
    }

    std::vector<std::vector<Vertex>> undirected_neighbors(const GrowthGraph& g)
    {
        const std::size_t n = g.vertex_count();
        std::vector<std::vector<Vertex>> nb(n);
        for (std::size_t v = 0; v < n; ++v) {
            auto vv = static_cast<Vertex>(v);
            auto out = g.out_neighbors(vv);
            nb[v].assign(out.begin(), out.end());
            if (g.directed()) {
                auto in = g.in_neighbors(vv);
                nb[v].insert(nb[v].end(), in.begin(), in.end());
            }
            std::sort(nb[v].begin(), nb[v].end());
            nb[v].erase(std::unique(nb[v].begin(), nb[v].end()), nb[v].end());
        }
        return nb;
    }

    TriadCensus directed_census(const GrowthGraph& g)
    {
        TriadCensus census { std::vector<double>(13, 0.0) };
        const auto nb = undirected_neighbors(g);
        const auto& table = triad_table();
        std::vector<std::int64_t> counts(16, 0);
        std::vector<Vertex> s;
        auto code = [&](Vertex v, Vertex u, Vertex w) {
            unsigned c = 0;
            c |= g.has_arc(v, u) ? 1U : 0U;
            c |= g.has_arc(u, v) ? 2U : 0U;
            c |= g.has_arc(v, w) ? 4U : 0U;
            c |= g.has_arc(w, v) ? 8U : 0U;
            c |= g.has_arc(u, w) ? 16U : 0U;
            c |= g.has_arc(w, u) ? 32U : 0U;
            return c;
        };
        // Each connected triad is visited once, from its smallest adjacent pair.
        for (std::size_t vi = 0; vi < nb.size(); ++vi) {
            auto v = static_cast<Vertex>(vi);
            const auto& nv = nb[vi];
            for (Vertex u : nv) {
                if (u <= v)
                    continue;
                const auto& nu = nb[static_cast<std::size_t>(u)];
                s.clear();
                std::set_union(nv.begin(), nv.end(), nu.begin(), nu.end(), std::back_inserter(s));
                for (Vertex w : s) {
                    if (w == u || w == v)
                        continue;
                    if (u < w || (v < w && w < u && !std::binary_search(nv.begin(), nv.end(), w)))
                        ++counts[static_cast<std::size_t>(table[code(v, u, w)])];
                }
            }
        }
        for (std::size_t k = 0; k < 13; ++k)
            census.counts[k] = static_cast<double>(counts[k + 3]);
        return census;
    }

    TriadCensus undirected_census(const GrowthGraph& g)
    {
        const auto nb = undirected_neighbors(g);
        std::int64_t triangles = 0;
        std::int64_t wedges = 0;
        for (std::size_t v = 0; v < nb.size(); ++v) {
            auto d = static_cast<std::int64_t>(nb[v].size());
            wedges += d * (d - 1) / 2;
            for (Vertex u : nb[v]) {
                if (u <= static_cast<Vertex>(v))
                    continue;
                const auto& nu = nb[static_cast<std::size_t>(u)];
                // Count common neighbours w > u.
                auto a = std::upper_bound(nb[v].begin(), nb[v].end(), u);
                auto b = std::upper_bound(nu.begin(), nu.end(), u);
                while (a != nb[v].end() && b != nu.end()) {
                    if (*a < *b) {
                        ++a;
                    } else if (*b < *a) {
                        ++b;
                    } else {
                        ++triangles;
                        ++a;
                        ++b;
                    }
                }
            }
        }
        return TriadCensus { { static_cast<double>(wedges - 3 * triangles), static_cast<double>(triangles) } };
    }

} // namespace

int triad_class(unsigned code)
{
    if (code >= 64)
        throw std::out_of_range("triad code must be < 64");
    return triad_table()[code];
}

double TriadCensus::total() const { return std::accumulate(counts.begin(), counts.end(), 0.0); }

std::vector<double> TriadCensus::profile() const
{
    std::vector<double> p(counts.size(), 0.0);
    double t = total();
    if (t > 0.0)
        for (std::size_t k = 0; k < p.size(); ++k)
            p[k] = counts[k] / t;
    return p;
}

TriadCensus triad_census(const GrowthGraph& g)
{
    if (g.vertex_count() < 3)
        return TriadCensus { std::vector<double>(g.directed() ? 13 : 2, 0.0) };
    return g.directed() ? directed_census(g) : undirected_census(g);
}

// --- dissimilarities ---------------------------------------------------------

double emd(std::span<const double> a, std::span<const double> b)
{
    if (a.empty() || b.empty())
        throw std::invalid_argument("emd needs nonempty samples");
    if (a.size() == b.size()) {
        double s = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k)
            s += std::fabs(a[k] - b[k]);
        return s / static_cast<double>(a.size());
    }
    // Sweep the merged support, integrating |F_a - F_b| between breakpoints.
    const auto na = static_cast<double>(a.size());
    const auto nb = static_cast<double>(b.size());
    std::size_t ia = 0;
    std::size_t ib = 0;
    double x = std::min(a[0], b[0]);
    double total = 0.0;
    while (ia < a.size() || ib < b.size()) {
        double next = ia < a.size() && (ib >= b.size() || a[ia] <= b[ib]) ? a[ia] : b[ib];
        total += std::fabs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb) * (next - x);
        x = next;
        while (ia < a.size() && a[ia] == x)
            ++ia;
        while (ib < b.size() && b[ib] == x)
            ++ib;
    }
    return total;
}

double ratio_dissimilarity(const Histogram& a, const Histogram& b)
{
    double sum = 0.0;
    std::size_t occupied = 0;
    auto ia = a.bins.begin();
    auto ib = b.bins.begin();
    while (ia != a.bins.end() || ib != b.bins.end()) {
        double ca = 0.0;
        double cb = 0.0;
        if (ib == b.bins.end() || (ia != a.bins.end() && ia->first < ib->first)) {
            ca = (ia++)->second;
        } else if (ia == a.bins.end() || ib->first < ia->first) {
            cb = (ib++)->second;
        } else {
            ca = (ia++)->second;
            cb = (ib++)->second;
        }
        if (ca <= 0.0 && cb <= 0.0)
            continue;
        sum += std::log((std::max(ca, cb) + 1.0) / (std::min(ca, cb) + 1.0));
        ++occupied;
    }
    return occupied == 0 ? 0.0 : sum / static_cast<double>(occupied);
}

std::vector<std::string> metric_names(bool directed)
{
    if (directed)
        return { "k_in", "k_out", "PR_d", "PR_r", "d_d", "d_u", "tau" };
    return { "k", "PR", "d_u", "tau" };
}

namespace {

    std::vector<double> sorted(std::vector<double> v)
    {
        std::sort(v.begin(), v.end());
        return v;
    }

    Histogram census_as_histogram(const TriadCensus& c)
    {
        Histogram h;
        for (std::size_t k = 0; k < c.counts.size(); ++k)
            if (c.counts[k] > 0.0)
                h.bins[static_cast<int>(k)] = c.counts[k];
        return h;
    }

} // namespace

MetricProfile metric_profile(const GrowthGraph& g, const MetricParams& params)
{
    MetricProfile p;
    p.directed = g.directed();
    const std::size_t n = g.vertex_count();
    std::vector<double> in(n);
    std::vector<double> out(n);
    for (std::size_t v = 0; v < n; ++v) {
        in[v] = static_cast<double>(g.indeg(static_cast<Vertex>(v)));
        out[v] = static_cast<double>(g.outdeg(static_cast<Vertex>(v)));
    }
    const std::size_t sources = n <= params.exact_distance_limit ? n : params.sampled_sources;
    auto pr = [&](bool reverse) {
        return sorted(pagerank(g, reverse, params.damping, params.tolerance, params.max_iterations));
    };
    if (p.directed) {
        p.degree_dists["k_in"] = sorted(std::move(in));
        p.degree_dists["k_out"] = sorted(std::move(out));
        p.pagerank_dists["PR_d"] = pr(false);
        p.pagerank_dists["PR_r"] = pr(true);
        p.distance_hists["d_d"] = distance_histogram(g, DistanceMode::Directed, sources, params.seed);
    } else {
        p.degree_dists["k"] = sorted(std::move(in));
        p.pagerank_dists["PR"] = pr(false);
    }
    p.distance_hists["d_u"] = distance_histogram(g, DistanceMode::Undirected, sources, params.seed);
    p.triads = triad_census(g);
    return p;
}

DissimilarityVector dissimilarity_vector(const MetricProfile& a, const MetricProfile& b)
{
    if (a.directed != b.directed)
        throw std::invalid_argument("directedness mismatch between compared networks");
    DissimilarityVector d;
    for (const auto& [name, sample] : a.degree_dists)
        d[name] = emd(sample, b.degree_dists.at(name));
    for (const auto& [name, sample] : a.pagerank_dists)
        d[name] = emd(sample, b.pagerank_dists.at(name));
    for (const auto& [name, hist] : a.distance_hists)
        d[name] = ratio_dissimilarity(hist, b.distance_hists.at(name));
    d["tau"] = ratio_dissimilarity(census_as_histogram(a.triads), census_as_histogram(b.triads));
    return d;
}

} // namespace netevo
