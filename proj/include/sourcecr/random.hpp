#ifndef SOURCECR_RANDOM_HPP
#define SOURCECR_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace sourcecr {

using Engine = std::mt19937_64;

/// Independent stream for a position in the experiment tree
/// (master seed, then e.g. repetition, claim, side).
inline Engine make_engine(std::uint64_t master, std::initializer_list<std::uint64_t> path = {}) {
    std::vector<std::uint32_t> words;
    words.reserve(2 + 2 * path.size());
    auto push = [&words](std::uint64_t x) {
        words.push_back(static_cast<std::uint32_t>(x));
        words.push_back(static_cast<std::uint32_t>(x >> 32));
    };
    push(master);
    for (auto p : path) push(p);
    std::seed_seq seq(words.begin(), words.end());
    return Engine(seq);
}

/// Derives a child seed; used where a component takes a plain integer seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    Engine e = make_engine(master, path);
    return e();
}

inline double uniform01(Engine& e) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(e);
}

} // namespace sourcecr

#endif // SOURCECR_RANDOM_HPP
