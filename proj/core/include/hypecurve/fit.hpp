#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hypecurve/model.hpp"
#include "hypecurve/series.hpp"

namespace hypecurve {

enum class FitMode {
    joint,        ///< all five parameters against both series at once
    independent,  ///< science from publications, then tech from patents
};

struct FitConfig {
    FitMode mode = FitMode::joint;
    ForwardModel forward = ForwardModel::bin_integral;
    int starts = 16;
    int max_iters = 2000;     ///< per start, including polish restarts
    double tolerance = 1e-10; ///< relative objective spread of the simplex
    std::uint64_t seed = 0;   ///< start-point jitter

    /// Throws Error(invalid_argument).
    void validate() const;
};

struct Residual {
    Curve curve = Curve::publications;
    int year = 0;
    double value = 0.0;  ///< observed - predicted, raw units
};

struct FitResult {
    HypeParams params;
    bool has_tech = false;       ///< false for publication-only fits
    double sse = 0.0;            ///< minimized objective (see below)
    double rmse = 0.0;           ///< sqrt(sse / n_points)
    double r_squared = 0.0;      ///< 1 - sse / total sum of squares, same weighting
    std::size_t n_points = 0;
    bool converged = false;
    int best_start_index = 0;
    int iterations = 0;          ///< simplex iterations of the winning start
    std::vector<Residual> residuals;
    std::vector<std::string> warnings;
};
// Objective weighting: single-series fits use raw squared residuals; joint
// fits divide each series' residuals by that series' maximum count first.

/// Heuristic starting point: t0 at the peak bin centre, k from the total
/// (doubled if the peak is in the last two years), r from the peak height.
ScienceParams init_science(const YearSeries& publications);

/// Scans the delay on a 0.25-year grid with the least-squares optimal p for
/// each candidate; returns the best pair.
TechParams init_tech(const YearSeries& patents, const ScienceParams& science,
                     ForwardModel forward = ForwardModel::bin_integral);

FitResult fit_science(const YearSeries& publications, const FitConfig& cfg = {});

/// Fits (p, tstar) with (k, r, t0) held fixed.
FitResult fit_tech(const YearSeries& patents, const ScienceParams& science,
                   const FitConfig& cfg = {});

/// Dispatches on cfg.mode. Diagnostics always use the joint weighting so the
/// two modes are comparable.
FitResult fit_joint(const YearSeries& publications, const YearSeries& patents,
                    const FitConfig& cfg = {});

double science_objective(const ScienceParams& sp, const YearSeries& publications,
                         ForwardModel forward = ForwardModel::bin_integral);
double tech_objective(const HypeParams& hp, const YearSeries& patents,
                      ForwardModel forward = ForwardModel::bin_integral);
double joint_objective(const HypeParams& hp, const YearSeries& publications,
                       const YearSeries& patents,
                       ForwardModel forward = ForwardModel::bin_integral);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct ParamBox {
    Interval k, r, t0, p, tstar;
};

struct OracleResult {
    HypeParams params;
    double objective = 0.0;
};

/// Exhaustive evaluation of joint_objective on a `steps`^5 grid (endpoints
/// included). Intended for certifying optimizer results in tests.
/// steps < 8 or a non-finite/empty box throws Error(invalid_argument).
OracleResult grid_oracle(const YearSeries& publications, const YearSeries& patents,
                         const ParamBox& box, int steps,
                         ForwardModel forward = ForwardModel::bin_integral);

}  // namespace hypecurve
