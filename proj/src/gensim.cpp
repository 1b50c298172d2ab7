#include "netevo/gensim.hpp"

#include <cmath>
#include <stdexcept>

#include "netevo/parallel.hpp"

namespace netevo {

double directed_dissim(const GeneratorProgram& w, const GeneratorProgram& w2, std::size_t n, std::size_t m,
    const GrowthParams& params, Rng& rng)
{
    if (w.directed() != w2.directed())
        throw std::invalid_argument("generators differ in directedness");
    double sum_steps = 0.0;
    std::size_t steps = 0;
    std::vector<double> other;
    GrowOptions options;
    options.extra_variables = w2.variables();
    options.observer = [&](const GrowthStep& step) {
        auto p = selection_probabilities(step.weights);
        other.clear();
        for (const auto& ctx : step.contexts)
            other.push_back(evaluate(w2, ctx));
        auto q = selection_probabilities(other);
        double s = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k)
            s += std::fabs(p[k] - q[k]);
        sum_steps += s / static_cast<double>(p.size());
        ++steps;
    };
    grow_network(w, n, m, params, rng, options);
    return steps == 0 ? 0.0 : sum_steps / static_cast<double>(steps);
}

GenDissimilarity generator_dissimilarity(const GeneratorProgram& w, const GeneratorProgram& w2, std::size_t n,
    std::size_t m, const GrowthParams& params, std::uint64_t seed, unsigned jobs)
{
    GenDissimilarity r;
    r.seed_ww2 = derive_seed(seed, print_program(w));
    r.seed_w2w = derive_seed(seed, print_program(w2));
    parallel_for(2, jobs, [&](std::size_t k) {
        if (k == 0) {
            Rng rng(r.seed_ww2);
            r.d_ww2 = directed_dissim(w, w2, n, m, params, rng);
        } else {
            Rng rng(r.seed_w2w);
            r.d_w2w = directed_dissim(w2, w, n, m, params, rng);
        }
    });
    r.d = (r.d_ww2 + r.d_w2w) / 2.0;
    return r;
}

} // namespace netevo
