#pragma once

#include <cstdint>

#include "hypecurve/model.hpp"
#include "hypecurve/series.hpp"

namespace hypecurve {

enum class NoiseKind { none, poisson, gaussian };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::none;
    double sigma = 0.0;      ///< gaussian only: sd as a fraction of the bin expectation
    std::uint64_t seed = 0;  ///< ignored for NoiseKind::none
};

struct SeriesPair {
    YearSeries publications;
    YearSeries patents;
};

/// Yearly bins year_start .. year_end inclusive. Publications are drawn
/// before patents from a single xoshiro256** stream seeded with noise.seed.
/// Throws Error(degenerate_range) unless year_end > year_start + 2.
SeriesPair generate(const HypeParams& hp, int year_start, int year_end, const NoiseSpec& noise,
                    ForwardModel forward = ForwardModel::bin_integral);

struct OledFixture {
    YearSeries publications;
    YearSeries patents;
    HypeParams truth;
};

namespace oled {
inline constexpr int first_year = 1985;
inline constexpr int last_year = 2016;
inline constexpr double pub_trigger = 1990.0;
inline constexpr double pat_trigger = 1995.0;
inline constexpr double growth_rate = 0.35;    // free choice, not a measured value
inline constexpr double pub_total = 8567.0;    // mean of 8179 (WoS) and 8955 (Scopus)
inline constexpr double pat_total = 21845.0;   // mean of 19614, 22928, 22993
inline constexpr double epsilon = 0.05;
inline constexpr std::uint64_t seed = 20161231;
}  // namespace oled

/// Noise-free parameters meeting the oled:: constraints: 5% cumulative
/// trigger at pub_trigger, 5% patent trigger at pat_trigger, and expected
/// window totals equal to pub_total and pat_total.
HypeParams oled_truth();

/// oled_truth() sampled over the oled:: window with Poisson noise at
/// oled::seed. The per-year values are synthetic.
OledFixture oled_fixture();

}  // namespace hypecurve
