#pragma once

#include <cstdint>
#include <random>

namespace mgs {

// Seedable generator used for every stochastic decision in the project
// (search operators, k-means init, synthetic traces). Backed by std::mt19937_64,
// whose output sequence is fixed by the standard, with hand-rolled bounded and
// floating draws so results do not depend on the standard library's
// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1), 53 bits of precision.
    double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n), unbiased via rejection sampling. n must be > 0.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t rem = (UINT64_MAX % n + 1) % n; // 2^64 mod n
        if (rem == 0)
            return gen_() % n;
        const std::uint64_t limit = 0 - rem; // 2^64 - rem
        for (;;) {
            const std::uint64_t x = gen_();
            if (x < limit)
                return x % n;
        }
    }

    // Uniform integer in [lo, hi], inclusive.
    int next_int(int lo, int hi) {
        return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool next_bool() { return (gen_() >> 63) != 0; }

    // Uniform in [-1, 1) scaled by sqrt(3)*sigma: zero mean, variance sigma^2.
    // Used instead of std::normal_distribution to keep traces bit-reproducible
    // across standard libraries.
    double next_noise(double sigma) { return (2.0 * next_double() - 1.0) * 1.7320508075688772 * sigma; }

private:
    std::mt19937_64 gen_;
};

} // namespace mgs
