#pragma once

// Behavioural distance between generators: how differently they distribute
// selection probability over the same candidate samples.

#include <cstdint>

#include "netevo/genlang.hpp"
#include "netevo/growth.hpp"

namespace netevo {

struct GenDissimilarity {
    double d_ww2 = 0.0;
    double d_w2w = 0.0;
    double d = 0.0;
    std::uint64_t seed_ww2 = 0;
    std::uint64_t seed_w2w = 0;
};

/// Grows n vertices / m arcs with `w`; at every step compares the selection
/// probabilities of `w` and `w2` over that step's candidates. Returns the
/// mean absolute difference, averaged over candidates, then over steps.
double directed_dissim(const GeneratorProgram& w, const GeneratorProgram& w2, std::size_t n, std::size_t m,
    const GrowthParams& params, Rng& rng);

/// Mean of both directed terms. The trajectory grown by a program draws from
/// a stream keyed by `seed` and that program's text, so swapping the
/// arguments swaps the two terms exactly.
GenDissimilarity generator_dissimilarity(const GeneratorProgram& w, const GeneratorProgram& w2, std::size_t n,
    std::size_t m, const GrowthParams& params, std::uint64_t seed, unsigned jobs = 1);

} // namespace netevo
