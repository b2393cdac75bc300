#pragma once

#include <functional>
#include <span>
#include <vector>

namespace hypecurve::detail {

struct SimplexOptions {
    int max_iters = 2000;
    /// Stop once (f_worst - f_best) <= rel_tol * |f_best| + abs_tol.
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Nelder-Mead with dimension-adaptive coefficients (Gao & Han 2012).
/// Non-finite objective values are treated as +infinity. The returned point
/// is never worse than x0.
SimplexResult nelder_mead(const Objective& f, std::vector<double> x0,
                          std::span<const double> steps, const SimplexOptions& opts);

}  // namespace hypecurve::detail
