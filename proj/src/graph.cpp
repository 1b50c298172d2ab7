#include "netevo/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "netevo/rng.hpp"

namespace netevo {

GrowthGraph::GrowthGraph(std::size_t n, bool directed)
    : directed_(directed)
    , out_(n)
    , in_(directed ? n : 0)
{
}

std::size_t GrowthGraph::capacity() const
{
    std::size_t n = vertex_count();
    if (n < 2)
        return 0;
    return directed_ ? n * (n - 1) : n * (n - 1) / 2;
}

std::uint64_t GrowthGraph::key(Vertex u, Vertex v) const
{
    if (!directed_ && u > v)
        std::swap(u, v);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) | static_cast<std::uint32_t>(v);
}

bool GrowthGraph::has_arc(Vertex u, Vertex v) const { return present_.contains(key(u, v)); }

bool GrowthGraph::add_arc(Vertex u, Vertex v)
{
    auto n = static_cast<Vertex>(vertex_count());
    if (u < 0 || v < 0 || u >= n || v >= n)
        throw std::out_of_range("arc endpoint out of range");
    if (u == v || !present_.insert(key(u, v)).second)
        return false;
    arcs_.emplace_back(u, v);
    out_[static_cast<std::size_t>(u)].push_back(v);
    if (directed_)
        in_[static_cast<std::size_t>(v)].push_back(u);
    else
        out_[static_cast<std::size_t>(v)].push_back(u);
    return true;
}

bool GrowthGraph::check_invariants() const
{
    std::size_t n = vertex_count();
    std::vector<std::int64_t> in(n, 0);
    std::vector<std::int64_t> out(n, 0);
    std::unordered_set<std::uint64_t> seen;
    for (auto [u, v] : arcs_) {
        if (u == v || !seen.insert(key(u, v)).second)
            return false;
        ++out[static_cast<std::size_t>(u)];
        ++in[static_cast<std::size_t>(v)];
    }
    if (seen != present_)
        return false;
    for (std::size_t v = 0; v < n; ++v) {
        auto vv = static_cast<Vertex>(v);
        if (directed_) {
            if (indeg(vv) != in[v] || outdeg(vv) != out[v])
                return false;
        } else if (indeg(vv) != in[v] + out[v]) {
            return false;
        }
    }
    return true;
}

std::uint64_t GrowthGraph::content_hash() const
{
    std::vector<std::uint64_t> keys(present_.begin(), present_.end());
    std::sort(keys.begin(), keys.end());
    std::ostringstream os;
    os << vertex_count() << (directed_ ? 'd' : 'u');
    for (auto k : keys)
        os << ',' << k;
    return fnv1a(os.str());
}

LoadedGraph read_edge_list(std::istream& in, bool directed, IdOrder order, std::uint64_t seed)
{
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::string> labels;
    std::vector<std::pair<std::size_t, std::size_t>> raw;
    auto id_of = [&](const std::string& label) {
        auto [it, inserted] = index.emplace(label, labels.size());
        if (inserted)
            labels.push_back(label);
        return it->second;
    };

    std::size_t declared_n = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            std::istringstream cs(line.substr(hash + 1));
            std::string word;
            std::size_t count = 0;
            if (cs >> word && word == "vertices" && cs >> count)
                declared_n = std::max(declared_n, count);
            line.erase(hash);
        }
        std::istringstream ls(line);
        std::string a;
        std::string b;
        if (!(ls >> a))
            continue;
        std::string extra;
        if (!(ls >> b) || (ls >> extra))
            throw std::runtime_error("edge list line " + std::to_string(lineno) + ": expected exactly two labels");
        auto ia = id_of(a);
        auto ib = id_of(b);
        raw.emplace_back(ia, ib);
    }

    std::vector<std::size_t> perm(labels.size());
    std::iota(perm.begin(), perm.end(), 0);
    if (order == IdOrder::Numeric) {
        std::size_t n = declared_n;
        for (std::size_t k = 0; k < labels.size(); ++k) {
            std::size_t value = 0;
            auto [ptr, ec] = std::from_chars(labels[k].data(), labels[k].data() + labels[k].size(), value);
            if (ec != std::errc() || ptr != labels[k].data() + labels[k].size() || value == 0)
                throw std::runtime_error("edge list label '" + labels[k] + "' is not a positive integer");
            perm[k] = value - 1;
            n = std::max(n, value);
        }
        LoadedGraph result { GrowthGraph(n, directed), {}, 0, 0 };
        result.labels.resize(n);
        for (std::size_t v = 0; v < n; ++v)
            result.labels[v] = std::to_string(v + 1);
        for (auto [a, b] : raw) {
            auto u = static_cast<Vertex>(perm[a]);
            auto v = static_cast<Vertex>(perm[b]);
            if (u == v)
                ++result.skipped_self_loops;
            else if (!result.graph.add_arc(u, v))
                ++result.skipped_duplicates;
        }
        return result;
    }
    if (order == IdOrder::Random) {
        auto rng = make_stream(seed, "ids");
        std::shuffle(perm.begin(), perm.end(), rng);
    }
    std::vector<std::string> permuted(labels.size());
    for (std::size_t k = 0; k < labels.size(); ++k)
        permuted[perm[k]] = labels[k];

    LoadedGraph result { GrowthGraph(labels.size(), directed), std::move(permuted), 0, 0 };
    for (auto [a, b] : raw) {
        auto u = static_cast<Vertex>(perm[a]);
        auto v = static_cast<Vertex>(perm[b]);
        if (u == v)
            ++result.skipped_self_loops;
        else if (!result.graph.add_arc(u, v))
            ++result.skipped_duplicates;
    }
    return result;
}

LoadedGraph read_edge_list(const std::filesystem::path& path, bool directed, IdOrder order, std::uint64_t seed)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open edge list " + path.string());
    return read_edge_list(in, directed, order, seed);
}

void write_edge_list(std::ostream& out, const GrowthGraph& g, bool vertex_header)
{
    if (vertex_header)
        out << "# vertices " << g.vertex_count() << '\n';
    for (auto [u, v] : g.arcs())
        out << (u + 1) << ' ' << (v + 1) << '\n';
}

void write_edge_list(const std::filesystem::path& path, const GrowthGraph& g, bool vertex_header)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write edge list " + path.string());
    write_edge_list(out, g, vertex_header);
}

} // namespace netevo
