#include "hypecurve/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hypecurve/error.hpp"
#include "hypecurve/random.hpp"

namespace hypecurve {

namespace {

double draw(Xoshiro256StarStar& rng, double expected, const NoiseSpec& noise) {
    switch (noise.kind) {
        case NoiseKind::none:
            return expected;
        case NoiseKind::poisson:
            return sample_poisson(rng, expected);
        case NoiseKind::gaussian:
            return std::max(0.0, expected + noise.sigma * expected * sample_standard_normal(rng));
    }
    return expected;
}

}  // namespace

SeriesPair generate(const HypeParams& hp, int year_start, int year_end, const NoiseSpec& noise,
                    ForwardModel forward) {
    validate(hp);
    if (!(year_end > year_start + 2)) {
        throw Error(Errc::degenerate_range, "year range " + std::to_string(year_start) + ".." +
                                                std::to_string(year_end) +
                                                " is too short (need end > start + 2)");
    }
    if (noise.kind == NoiseKind::gaussian && !(noise.sigma >= 0.0 && std::isfinite(noise.sigma))) {
        throw Error(Errc::invalid_argument, "sigma must be finite and >= 0");
    }

    Xoshiro256StarStar rng(noise.seed);
    auto sample = [&](Curve curve) {
        std::vector<YearCount> pts;
        for (int y = year_start; y <= year_end; ++y) {
            pts.push_back({y, draw(rng, expected_count(y, hp, curve, forward), noise)});
        }
        return pts;
    };
    auto pub = sample(Curve::publications);
    auto pat = sample(Curve::patents);
    return {YearSeries("publications", std::move(pub)), YearSeries("patents", std::move(pat))};
}

HypeParams oled_truth() {
    const double r = oled::growth_rate;
    // C reaches epsilon k where r (t - t0) = log(epsilon / (1 - epsilon)).
    const double offset = std::log(oled::epsilon / (1.0 - oled::epsilon)) / r;
    const double t0 = oled::pub_trigger - offset;
    const double tstar = oled::pat_trigger - oled::pub_trigger;

    // Window totals are linear in k and in p k.
    const HypeParams unit{{1.0, r, t0}, {1.0, tstar}};
    double pub_unit = 0.0;
    double pat_unit = 0.0;
    for (int y = oled::first_year; y <= oled::last_year; ++y) {
        pub_unit += pub_bin(y, unit.science);
        pat_unit += patent_bin(y, unit);
    }
    const double k = oled::pub_total / pub_unit;
    const double p = oled::pat_total / pat_unit / k;
    return {{k, r, t0}, {p, tstar}};
}

OledFixture oled_fixture() {
    const auto truth = oled_truth();
    auto pair = generate(truth, oled::first_year, oled::last_year,
                         {NoiseKind::poisson, 0.0, oled::seed});
    return {std::move(pair.publications), std::move(pair.patents), truth};
}

}  // namespace hypecurve
