#include "netevo/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "netevo/evolve.hpp"
#include "netevo/fitness.hpp"
#include "netevo/genlang.hpp"
#include "netevo/gensim.hpp"
#include "netevo/graph.hpp"
#include "netevo/growth.hpp"
#include "netevo/netmetrics.hpp"

namespace netevo {

namespace {

    namespace fs = std::filesystem;
    using ojson = nlohmann::ordered_json;

    constexpr const char* kCacheEnv = "NETEVO_CACHE_DIR";

    class InputError : public std::runtime_error {
    public:
        using std::runtime_error::runtime_error;
    };

    struct CommonOptions {
        std::uint64_t seed = 0;
        bool undirected = false;
        std::string ids = "first";
        unsigned jobs = 1;
        GrowthParams growth;
    };

    void add_common(CLI::App* cmd, CommonOptions& o, bool with_ids)
    {
        cmd->add_option("--seed", o.seed, "Root random seed; every random stream derives from it")->capture_default_str();
        cmd->add_flag("--undirected", o.undirected, "Treat networks and programs as undirected");
        cmd->add_option("--jobs", o.jobs, "Maximum worker threads")->capture_default_str()->check(CLI::PositiveNumber);
        cmd->add_option("--sample-ratio", o.growth.sample_ratio, "Candidate sample ratio s_r in (0, 1]")
            ->capture_default_str()
            ->check(CLI::Range(1e-12, 1.0));
        cmd->add_option("--min-sample", o.growth.min_sample, "Minimum candidate sample size")->capture_default_str();
        cmd->add_option("--walk-count", o.growth.walk_count, "Random walks per distance estimate")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--walk-length", o.growth.walk_max_len, "Maximum steps per random walk")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--distance-cap", o.growth.distance_cap, "Distance reported when no walk reaches the target")
            ->capture_default_str();
        if (with_ids)
            cmd->add_option("--ids", o.ids,
                   "Vertex identifier assignment for edge lists. Identifiers are visible to generators "
                   "(variables i, j and psi), so their order matters: 'first' numbers labels by first "
                   "appearance, 'random' shuffles that order with the seed, 'numeric' keeps integer labels")
                ->capture_default_str()
                ->check(CLI::IsMember({ "first", "random", "numeric" }));
    }

    IdOrder id_order(const std::string& s)
    {
        if (s == "random")
            return IdOrder::Random;
        if (s == "numeric")
            return IdOrder::Numeric;
        return IdOrder::FirstAppearance;
    }

    GrowthGraph load_target(const std::string& path, const CommonOptions& o)
    {
        if (!fs::exists(path))
            throw InputError("cannot open edge list " + path);
        try {
            auto loaded = read_edge_list(fs::path(path), !o.undirected, id_order(o.ids), o.seed);
            if (loaded.graph.vertex_count() == 0 || loaded.graph.arc_count() == 0)
                throw InputError("edge list " + path + " contains no arcs");
            return std::move(loaded.graph);
        } catch (const InputError&) {
            throw;
        } catch (const std::exception& e) {
            throw InputError(e.what());
        }
    }

    GeneratorProgram load_prog(const std::string& path, const CommonOptions& o)
    {
        if (!fs::exists(path))
            throw InputError("cannot open program file " + path);
        return load_program(path, !o.undirected);
    }

    fs::path cache_dir()
    {
        const char* env = std::getenv(kCacheEnv);
        return env != nullptr ? fs::path(env) : fs::path();
    }

    ojson report_json(const FitnessReport& r)
    {
        ojson j;
        j["fitness"] = r.fitness;
        j["ratios"] = r.ratios;
        return j;
    }

    ojson growth_json(const GrowthParams& g)
    {
        return ojson { { "sample_ratio", g.sample_ratio }, { "min_sample", g.min_sample },
            { "walk_count", g.walk_count }, { "walk_max_len", g.walk_max_len }, { "distance_cap", g.distance_cap } };
    }

    void check_params(const GrowthParams& g)
    {
        try {
            g.validate();
        } catch (const std::invalid_argument& e) {
            throw CLI::ValidationError(e.what());
        }
    }

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app { "netevo: evolve network growth generators from a target network" };
    app.require_subcommand(1);
    app.footer("Exit status: 0 ok, 1 usage, 2 input error, 3 runtime error. Baseline norms are cached in $"
        + std::string(kCacheEnv) + " when set.");

    // synth
    CommonOptions synth_o;
    std::string synth_prog;
    std::size_t synth_n = 0;
    std::size_t synth_m = 0;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "Grow a network from a generator program");
    synth->add_option("--program", synth_prog, "Generator program file")->required();
    synth->add_option("--vertices", synth_n, "Number of vertices")->required();
    synth->add_option("--arcs", synth_m, "Number of arcs")->required();
    synth->add_option("--out", synth_out, "Output edge list (stdout when omitted)");
    add_common(synth, synth_o, false);

    // evolve
    CommonOptions evo_o;
    std::string evo_target;
    std::string evo_dir;
    SearchParams evo_p;
    std::size_t evo_count = 30;
    auto* evo = app.add_subcommand("evolve", "Search for a generator that reproduces a target network");
    evo->add_option("--target", evo_target, "Target edge list")->required();
    evo->add_option("--out-dir", evo_dir, "Run directory to create")->required();
    evo->add_option("--stable-gens", evo_p.stable_limit, "Stop after this many generations without champion change")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    evo->add_option("--max-gens", evo_p.max_generations, "Hard generation limit (0 = none)")->capture_default_str();
    evo->add_option("--tolerance", evo_p.tolerance,
           "Anti-bloat tolerance. 0.15 tends to stall evolution; 0.05 tends to give bloated, hard to read programs")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 10.0));
    evo->add_option("--max-depth", evo_p.tree.max_depth, "Depth of randomly generated trees")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    evo->add_option("--terminal-prob", evo_p.tree.terminal_probability, "Leaf probability per node when growing trees")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    evo->add_option("--count", evo_count, "ER baseline ensemble size")->capture_default_str()->check(CLI::PositiveNumber);
    add_common(evo, evo_o, true);

    // eval
    CommonOptions eval_o;
    std::string eval_prog;
    std::string eval_network;
    std::string eval_target;
    std::size_t eval_count = 30;
    auto* eval = app.add_subcommand("eval", "Score a generator program against a target network");
    auto* eval_src = eval->add_option_group("source", "What to score");
    eval_src->add_option("--program", eval_prog, "Generator program file");
    eval_src->add_option("--network", eval_network, "Score this edge list instead of growing one");
    eval_src->require_option(1);
    eval->add_option("--target", eval_target, "Target edge list")->required();
    eval->add_option("--count", eval_count, "ER baseline ensemble size")->capture_default_str()->check(CLI::PositiveNumber);
    add_common(eval, eval_o, true);

    // compare
    CommonOptions cmp_o;
    std::string cmp_a;
    std::string cmp_b;
    std::string cmp_dump;
    auto* cmp = app.add_subcommand("compare", "Dissimilarity vector between two networks");
    cmp->add_option("--a", cmp_a, "First edge list")->required();
    cmp->add_option("--b", cmp_b, "Second edge list")->required();
    cmp->add_option("--dump-dir", cmp_dump, "Directory for plot-ready distribution and histogram files");
    add_common(cmp, cmp_o, true);

    // baseline
    CommonOptions base_o;
    std::string base_target;
    std::size_t base_count = 30;
    std::string base_out;
    auto* base = app.add_subcommand("baseline", "Compute (and cache) ER baseline norms for a target");
    base->add_option("--target", base_target, "Target edge list")->required();
    base->add_option("--count", base_count, "ER ensemble size")->capture_default_str()->check(CLI::PositiveNumber);
    base->add_option("--out", base_out, "Also write the norms to this file");
    add_common(base, base_o, true);

    // gensim
    CommonOptions gs_o;
    std::string gs_a;
    std::string gs_b;
    std::size_t gs_n = 100;
    std::size_t gs_m = 1000;
    auto* gs = app.add_subcommand("gensim", "Behavioural dissimilarity between two generator programs");
    gs->add_option("--a", gs_a, "First program file")->required();
    gs->add_option("--b", gs_b, "Second program file")->required();
    gs->add_option("--vertices", gs_n, "Vertices of the comparison trajectories")->capture_default_str();
    gs->add_option("--arcs", gs_m, "Arcs of the comparison trajectories")->capture_default_str();
    add_common(gs, gs_o, false);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*synth) {
            check_params(synth_o.growth);
            auto prog = load_prog(synth_prog, synth_o);
            auto rng = make_stream(synth_o.seed, "synth");
            auto g = grow_network(prog, synth_n, synth_m, synth_o.growth, rng);
            if (synth_out.empty())
                write_edge_list(out, g);
            else
                write_edge_list(fs::path(synth_out), g);
        } else if (*evo) {
            check_params(evo_o.growth);
            evo_p.growth = evo_o.growth;
            evo_p.seed = evo_o.seed;
            evo_p.metrics.seed = evo_o.seed;
            auto target = load_target(evo_target, evo_o);
            auto problem = TargetProblem::from_graph(target, evo_count, evo_p.metrics, evo_o.seed, cache_dir(), evo_o.jobs);
            auto report = run_search(problem, evo_p);

            fs::create_directories(evo_dir);
            fs::path dir(evo_dir);
            {
                std::ofstream h(dir / "history.csv");
                write_history_csv(h, report.history);
            }
            save_program(dir / "best.gen", report.best.program);
            save_program(dir / "shortest.gen", report.shortest.program);
            auto rng = make_stream(evo_o.seed, "synthetic");
            auto synthetic = grow_network(report.shortest.program, problem.vertices, problem.arcs, evo_p.growth, rng);
            write_edge_list(dir / "synthetic.edges", synthetic);

            ojson run;
            run["target"] = evo_target;
            run["target_hash"] = hex64(target.content_hash());
            run["seed"] = evo_o.seed;
            run["directed"] = !evo_o.undirected;
            run["params"] = { { "tolerance", evo_p.tolerance }, { "stable_limit", evo_p.stable_limit },
                { "max_generations", evo_p.max_generations }, { "max_depth", evo_p.tree.max_depth },
                { "terminal_probability", evo_p.tree.terminal_probability }, { "ensemble_size", evo_count },
                { "growth", growth_json(evo_p.growth) } };
            run["generations"] = report.generations;
            run["shortest"] = { { "program", print_program(report.shortest.program) },
                { "length", report.shortest.length() }, { "report", report_json(report.shortest.report) } };
            run["best"] = { { "program", print_program(report.best.program) }, { "length", report.best.length() },
                { "report", report_json(report.best.report) } };
            std::ofstream(dir / "run.json") << run.dump(2) << '\n';
            out << print_program(report.shortest.program) << '\n';
        } else if (*eval) {
            check_params(eval_o.growth);
            MetricParams metrics;
            metrics.seed = eval_o.seed;
            auto target = load_target(eval_target, eval_o);
            auto problem = TargetProblem::from_graph(target, eval_count, metrics, eval_o.seed, cache_dir(), eval_o.jobs);
            ojson j;
            if (!eval_network.empty()) {
                auto network = load_target(eval_network, eval_o);
                j = report_json(fitness(metric_profile(network, metrics), problem.profile, problem.norms));
                j["network"] = eval_network;
            } else {
                auto prog = load_prog(eval_prog, eval_o);
                auto rng = make_stream(eval_o.seed, "eval");
                j = report_json(evaluate_program(problem, prog, eval_o.growth, metrics, rng));
                j["program"] = print_program(prog);
            }
            out << j.dump(2) << '\n';
        } else if (*cmp) {
            MetricParams metrics;
            metrics.seed = cmp_o.seed;
            auto a = load_target(cmp_a, cmp_o);
            auto b = load_target(cmp_b, cmp_o);
            auto pa = metric_profile(a, metrics);
            auto pb = metric_profile(b, metrics);
            ojson j = dissimilarity_vector(pa, pb);
            out << j.dump(2) << '\n';
            if (!cmp_dump.empty()) {
                fs::create_directories(cmp_dump);
                auto dump = [&](const MetricProfile& p, const std::string& tag) {
                    for (const auto& [name, sample] : p.degree_dists) {
                        std::ofstream f(fs::path(cmp_dump) / (tag + "_" + name + ".dist"));
                        for (double x : sample)
                            f << format_double(x) << '\n';
                    }
                    for (const auto& [name, sample] : p.pagerank_dists) {
                        std::ofstream f(fs::path(cmp_dump) / (tag + "_" + name + ".dist"));
                        for (double x : sample)
                            f << format_double(x) << '\n';
                    }
                    for (const auto& [name, h] : p.distance_hists) {
                        std::ofstream f(fs::path(cmp_dump) / (tag + "_" + name + ".hist"));
                        write_histogram(f, h);
                    }
                    std::ofstream f(fs::path(cmp_dump) / (tag + "_tau.hist"));
                    const auto names = p.directed ? std::vector<std::string>(kDirectedTriadNames.begin(), kDirectedTriadNames.end())
                                                  : std::vector<std::string>(kUndirectedTriadNames.begin(), kUndirectedTriadNames.end());
                    for (std::size_t k = 0; k < p.triads.counts.size(); ++k)
                        f << names[k] << ' ' << format_double(p.triads.counts[k]) << '\n';
                };
                dump(pa, "a");
                dump(pb, "b");
            }
        } else if (*base) {
            MetricParams metrics;
            metrics.seed = base_o.seed;
            auto target = load_target(base_target, base_o);
            auto norms = cached_baseline_norms(target, metric_profile(target, metrics), base_count, metrics, base_o.seed,
                cache_dir(), base_o.jobs);
            if (!base_out.empty())
                save_norms(base_out, norms);
            ojson j;
            j["target_hash"] = hex64(norms.target_hash);
            j["params_hash"] = hex64(norms.params_hash);
            j["ensemble_size"] = norms.ensemble_size;
            j["means"] = norms.per_metric_mean;
            j["seed"] = norms.seed;
            out << j.dump(2) << '\n';
        } else if (*gs) {
            check_params(gs_o.growth);
            auto a = load_prog(gs_a, gs_o);
            auto b = load_prog(gs_b, gs_o);
            auto r = generator_dissimilarity(a, b, gs_n, gs_m, gs_o.growth, gs_o.seed, gs_o.jobs);
            ojson j;
            j["d_ww2"] = r.d_ww2;
            j["d_w2w"] = r.d_w2w;
            j["d"] = r.d;
            j["seeds"] = { { "ww2", r.seed_ww2 }, { "w2w", r.seed_w2w } };
            out << j.dump(2) << '\n';
        }
    } catch (const CLI::ValidationError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitInput;
    } catch (const StructuralError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitInput;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const SaturatedError& e) {
        err << "runtime error: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

} // namespace netevo
