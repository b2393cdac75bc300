#pragma once

// Closed-form evaluation of the logistic publication curve, the delayed
// patent curve and their sum.
//
//   C(t) = k / (1 + exp(-r (t - t0)))          cumulative publications
//   N(t) = dC/dt                               publications per year
//   P(t) = p C(t - tstar)                      patents per year
//   H(t) = N(t) + P(t)                         hype curve
//
// Time is a continuous calendar year. A yearly observation labelled `y`
// covers the bin [y, y + 1).

namespace hypecurve {

struct ScienceParams {
    double k = 1.0;   ///< carrying capacity (total publications)
    double r = 1.0;   ///< growth rate, 1/year
    double t0 = 0.0;  ///< inflection year (peak of N)

    bool operator==(const ScienceParams&) const = default;
};

struct TechParams {
    double p = 1.0;      ///< patents per accumulated publication
    double tstar = 0.0;  ///< delay of the technology phase, years

    bool operator==(const TechParams&) const = default;
};

struct HypeParams {
    ScienceParams science;
    TechParams tech;

    bool operator==(const HypeParams&) const = default;
};

enum class Curve { publications, patents };

/// How a yearly count is predicted from the continuous rate curves.
enum class ForwardModel {
    bin_integral,  ///< integral of the rate over [y, y + 1)
    midpoint,      ///< rate evaluated at y + 0.5
};

bool is_valid(const ScienceParams& sp) noexcept;
bool is_valid(const TechParams& tp) noexcept;
bool is_valid(const HypeParams& hp) noexcept;

/// Throws Error(invalid_argument) naming the offending field.
void validate(const ScienceParams& sp);
void validate(const HypeParams& hp);

/// 1 / (1 + exp(-x)), evaluated without overflow for any finite x.
double logistic(double x) noexcept;

/// log(1 + exp(x)) without overflow.
double softplus(double x) noexcept;

double cumulative(double t, const ScienceParams& sp) noexcept;
double pub_rate(double t, const ScienceParams& sp) noexcept;
double patent_rate(double t, const HypeParams& hp) noexcept;
double hype(double t, const HypeParams& hp) noexcept;

/// Peak of N, reached at t0.
inline double pub_peak_rate(const ScienceParams& sp) noexcept { return sp.k * sp.r / 4.0; }

/// Limit of P as t -> infinity.
inline double patent_plateau(const HypeParams& hp) noexcept { return hp.tech.p * hp.science.k; }

/// Expected publications in [year_start, year_start + 1); closed form.
double pub_bin(double year_start, const ScienceParams& sp) noexcept;

/// Expected patents in [year_start, year_start + 1); adaptive Simpson on P
/// to relative tolerance 1e-8.
double patent_bin(double year_start, const HypeParams& hp);

double bin_expected(double year_start, const HypeParams& hp, Curve curve);

/// Predicted yearly count for the bin labelled `year` under `forward`.
double expected_count(double year, const HypeParams& hp, Curve curve, ForwardModel forward);

}  // namespace hypecurve
