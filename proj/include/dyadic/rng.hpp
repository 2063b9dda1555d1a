#ifndef DYADIC_RNG_HPP
#define DYADIC_RNG_HPP

#include <cstdint>
#include <random>

namespace dyadic {

/// mt19937_64 with platform-independent helpers (std distributions are
/// implementation-defined; these are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    /// uniform in [0,1)
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1p-53; }

    /// uniform in [a,b)
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// uniform integer in [0,n)
    std::uint64_t below(std::uint64_t n) { return eng_() % n; }

    /// deterministic per-task child seed
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                std::uint64_t c = 0) {
        std::uint64_t x = seed ^ (a * 0x9e3779b97f4a7c15ULL) ^ (b * 0xbf58476d1ce4e5b9ULL) ^
                          (c * 0x94d049bb133111ebULL);
        // splitmix64 finalizer
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

private:
    std::mt19937_64 eng_;
};

} // namespace dyadic

#endif
