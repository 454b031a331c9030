// Seedable randomness with substreams, shared by all protocol drivers.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace entcon {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// One stream per protocol run; trials of a batch get independent substreams
// derived from (seed, trial index) so output is reproducible regardless of
// execution order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng for_trial(std::uint64_t seed, std::uint64_t trial) {
        return Rng(splitmix64(seed ^ splitmix64(trial + 1)));
    }

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits; avoids the
    // implementation-defined std::uniform_real_distribution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller (two fresh uniforms per call, no cache,
    // so replay never depends on call parity).
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    // Index into a probability vector (sums to ~1). Rounding leftovers fall
    // onto the last outcome with nonzero probability.
    int sample_discrete(std::span<const double> probs) {
        if (probs.empty()) throw std::invalid_argument("sample_discrete: empty distribution");
        const double u = uniform();
        double cum = 0.0;
        int last_nonzero = -1;
        for (std::size_t j = 0; j < probs.size(); ++j) {
            if (probs[j] > 0.0) last_nonzero = static_cast<int>(j);
            cum += probs[j];
            if (u < cum) return static_cast<int>(j);
        }
        if (last_nonzero < 0) throw std::invalid_argument("sample_discrete: all probabilities zero");
        return last_nonzero;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace entcon
