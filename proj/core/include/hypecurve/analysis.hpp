#pragma once

#include <optional>
#include <vector>

#include "hypecurve/fit.hpp"
#include "hypecurve/model.hpp"

namespace hypecurve {

/// Which curve a trigger is measured on. Each reaches `epsilon` times its own
/// reference level at the trigger: N against its peak k r / 4, C against k,
/// P against its plateau p k.
enum class TriggerCurve {
    pub_rate,    ///< N(t)
    cumulative,  ///< C(t); a translate of P, so triggers differ by tstar exactly
    patents,     ///< P(t)
};

/// Earliest t where the curve reaches epsilon of its reference level, found
/// by bisection to 1e-9 year. Throws Error(invalid_epsilon) unless
/// 0 < epsilon < 1.
double trigger_time(const HypeParams& hp, TriggerCurve curve, double epsilon = 0.05);

/// Algebraic root of 4u / (1 + u)^2 = epsilon with u = exp(-r (t - t0)) > 1.
double pub_rate_trigger_closed_form(const ScienceParams& sp, double epsilon = 0.05);

struct Dip {
    double peak_year = 0.0;  ///< local maximum of H preceding the dip
    double year = 0.0;       ///< local minimum of H
    double depth = 0.0;      ///< (H(peak) - H(dip)) / H(peak), in (0, 1)
};

/// Scans H on a grid of step `step_factor / r` and refines the first interior
/// minimum that follows a local maximum by golden-section search to 1e-4
/// year. Returns nullopt when H has no such minimum.
std::optional<Dip> detect_dip(const HypeParams& hp, double step_factor = 0.01);

struct ForecastRow {
    int year = 0;
    double pub_rate = 0.0;   ///< expected publications in [year, year + 1)
    double pat_rate = 0.0;   ///< expected patents in [year, year + 1)
    double hype = 0.0;       ///< pub_rate + pat_rate
    double pub_ratio = 0.0;  ///< N(year) / (k r / 4)
};

/// Rows for from_year .. from_year + horizon_years inclusive.
std::vector<ForecastRow> forecast(const HypeParams& hp, int from_year, int horizon_years);

/// First forecast year whose pub_ratio is below `threshold` and that lies
/// past the publication peak, if any.
std::optional<int> first_year_below(const std::vector<ForecastRow>& rows, double t0,
                                    double threshold = 0.5);

struct ReportConfig {
    double epsilon = 0.05;
    int horizon_years = 10;
    /// Curve used for pub_trigger_year. The cumulative curve makes
    /// delay_years equal tstar; pub_rate_trigger_year is reported regardless.
    TriggerCurve pub_trigger_basis = TriggerCurve::cumulative;
};

struct HypeReport {
    double pub_peak_year = 0.0;
    double pub_peak_rate = 0.0;
    double pub_trigger_year = 0.0;
    double pub_rate_trigger_year = 0.0;
    int forecast_from_year = 0;
    bool has_tech = false;
    double pat_trigger_year = 0.0;
    double delay_years = 0.0;
    double patent_plateau = 0.0;
    std::optional<Dip> dip;
    std::vector<ForecastRow> forecast;
    std::optional<int> pub_half_year;  ///< first forecast year below half the peak
};

/// Throws Error(unconverged_fit) if fit.converged is false.
HypeReport build_report(const FitResult& fit, int last_observed_year,
                        const ReportConfig& cfg = {});

/// Report straight from parameters (no fit diagnostics involved).
HypeReport report_from_params(const HypeParams& hp, bool has_tech, int forecast_from_year,
                              const ReportConfig& cfg = {});

}  // namespace hypecurve
