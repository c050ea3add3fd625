#pragma once

#include <cstdint>
#include <random>

namespace gsel::mc {

// One round of the splitmix64 output function over an already-advanced
// state. The generator's state advances by the golden-ratio increment per
// draw, so the r-th output of the stream seeded with `master` is
// mix64(master + (r + 1) * increment).
inline std::uint64_t mix64(std::uint64_t state) {
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed of replication `rep` within the stream of `master`: statistically
// independent across replications and independent of execution order, so
// parallel harnesses reproduce bit-identically for any worker count.
inline std::uint64_t replication_seed(std::uint64_t master,
                                      std::uint64_t rep) {
    return mix64(master + (rep + 1) * 0x9e3779b97f4a7c15ULL);
}

inline std::mt19937_64 engine_for(std::uint64_t master, std::uint64_t rep) {
    return std::mt19937_64(replication_seed(master, rep));
}

}  // namespace gsel::mc
