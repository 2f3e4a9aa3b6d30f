#pragma once

// Seeded random streams on std::mt19937_64.
//
// A stream is identified by its seed path (root seed, then substream ids);
// the engine is seeded from that path through std::seed_seq, so a child
// stream never depends on how its parent or siblings were consumed.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace qgrass {

class RandomStream {
public:
    using result_type = std::mt19937_64::result_type;

    explicit RandomStream(std::uint64_t seed) : RandomStream(std::vector<std::uint64_t>{seed}) {}

    /// Same as RandomStream(path[0]).substream(path[1])..., without seeding the ancestors.
    static RandomStream from_path(std::vector<std::uint64_t> path) { return RandomStream(std::move(path)); }

    /// Child stream for `id`; distinct ids give distinct seed paths.
    RandomStream substream(std::uint64_t id) const
    {
        auto path = path_;
        path.push_back(id);
        return RandomStream(std::move(path));
    }

    result_type next() { return engine_(); }
    result_type operator()() { return engine_(); }

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }

    /// Uniform double in [0, 1).
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    /// Uniform integer in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t bound)
    {
        return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    explicit RandomStream(std::vector<std::uint64_t> path) : path_(std::move(path))
    {
        // seed_seq takes 32-bit words
        std::vector<std::uint32_t> words;
        words.push_back(static_cast<std::uint32_t>(path_.size()));
        for (std::uint64_t x : path_) {
            words.push_back(static_cast<std::uint32_t>(x));
            words.push_back(static_cast<std::uint32_t>(x >> 32));
        }
        std::seed_seq seq(words.begin(), words.end());
        engine_.seed(seq);
    }

    std::vector<std::uint64_t> path_;
    std::mt19937_64 engine_;
};

} // namespace qgrass
