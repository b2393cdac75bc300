#pragma once

// Portable, seedable random numbers. Every stream here is defined bit-for-bit
// by published algorithms so that generated fixtures are identical across
// compilers and standard libraries (std:: distributions are not).
//
//   SplitMix64        Steele, Lea & Flood (2014); seeds the state below.
//   xoshiro256** 1.0  Blackman & Vigna (2018).
//   Poisson           multiplication method for mean < 10, PTRS
//                     transformed rejection (Hoermann 1993) otherwise.
//   Normal            Box-Muller, one variate per pair of uniforms.

#include <array>
#include <cstdint>
#include <limits>

namespace hypecurve {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t operator()() noexcept;

private:
    std::uint64_t state_;
};

class Xoshiro256StarStar {
public:
    using result_type = std::uint64_t;

    /// State expanded from `seed` by four SplitMix64 draws.
    explicit Xoshiro256StarStar(std::uint64_t seed) noexcept;
    explicit Xoshiro256StarStar(const std::array<std::uint64_t, 4>& state) noexcept
        : s_(state) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;

private:
    std::array<std::uint64_t, 4> s_;
};

/// Integer Poisson draw with the given mean (returned as double so large
/// means do not overflow). mean <= 0 yields 0.
double sample_poisson(Xoshiro256StarStar& rng, double mean);

double sample_standard_normal(Xoshiro256StarStar& rng);

}  // namespace hypecurve
