#ifndef AEP_RNG_HPP
#define AEP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace aep {

/// xoshiro256** seeded through splitmix64. All experiment randomness goes
/// through this generator so that runs are reproducible from the recorded
/// seeds regardless of the standard library in use. Integer output is
/// bit-portable; the floating-point helpers additionally depend on libm.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0,n). Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

    /// Standard normal via Box-Muller; the second deviate of each pair is
    /// cached, so draws depend only on call order.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Derives an independent child seed from a master seed and a path of
/// integers (fold index, grid index, purpose tag, ...). Used so that
/// parallel evaluation tasks draw from disjoint, order-independent streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t x = master ^ 0xa0761d6478bd642fULL;
    std::uint64_t acc = Rng::splitmix64(x);
    for (std::uint64_t p : path) {
        x = acc ^ (p + 0x9e3779b97f4a7c15ULL);
        acc = Rng::splitmix64(x);
    }
    return acc;
}

/// Purpose tags for derive_seed paths.
namespace seed_tag {
inline constexpr std::uint64_t fit = 1;
inline constexpr std::uint64_t resample = 2;
inline constexpr std::uint64_t inner_fit = 3;
inline constexpr std::uint64_t inner_resample = 4;
inline constexpr std::uint64_t tree = 5;
inline constexpr std::uint64_t synth = 6;
} // namespace seed_tag

} // namespace aep

#endif
