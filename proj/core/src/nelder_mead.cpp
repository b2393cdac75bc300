#include "hypecurve/detail/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hypecurve::detail {

namespace {

double eval(const Objective& f, std::span<const double> x) {
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

SimplexResult nelder_mead(const Objective& f, std::vector<double> x0,
                          std::span<const double> steps, const SimplexOptions& opts) {
    const std::size_t n = x0.size();
    const double dn = static_cast<double>(n);
    const double alpha = 1.0;
    const double beta = 1.0 + 2.0 / dn;
    const double gamma = 0.75 - 1.0 / (2.0 * dn);
    const double delta = 1.0 - 1.0 / dn;

    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i + 1][i] += steps[i];
    }
    for (std::size_t i = 0; i <= n; ++i) {
        vals[i] = eval(f, pts[i]);
    }

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    SimplexResult res;

    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        // Stable on ties so the earlier vertex (x0 first) stays best.
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    };

    int iter = 0;
    for (; iter < opts.max_iters; ++iter) {
        sort_simplex();
        const double fbest = vals[order.front()];
        const double fworst = vals[order.back()];
        if (std::isfinite(fworst) &&
            fworst - fbest <= opts.rel_tol * std::abs(fbest) + opts.abs_tol) {
            res.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& p = pts[order[i]];
            for (std::size_t j = 0; j < n; ++j) centroid[j] += p[j];
        }
        for (auto& c : centroid) c /= dn;

        auto& worst = pts[order.back()];
        const double fsecond = vals[order[n - 1]];

        for (std::size_t j = 0; j < n; ++j) xr[j] = centroid[j] + alpha * (centroid[j] - worst[j]);
        const double fr = eval(f, xr);

        if (fr < fbest) {
            for (std::size_t j = 0; j < n; ++j) xe[j] = centroid[j] + beta * (xr[j] - centroid[j]);
            const double fe = eval(f, xe);
            if (fe < fr) {
                worst = xe;
                vals[order.back()] = fe;
            } else {
                worst = xr;
                vals[order.back()] = fr;
            }
            continue;
        }
        if (fr < fsecond) {
            worst = xr;
            vals[order.back()] = fr;
            continue;
        }

        // Contraction: outside if the reflection beat the worst vertex.
        const bool outside = fr < fworst;
        const auto& base = outside ? xr : worst;
        for (std::size_t j = 0; j < n; ++j) xc[j] = centroid[j] + gamma * (base[j] - centroid[j]);
        const double fc = eval(f, xc);
        if (fc < (outside ? fr : fworst)) {
            worst = xc;
            vals[order.back()] = fc;
            continue;
        }

        // Shrink towards the best vertex.
        const auto best = pts[order.front()];
        for (std::size_t i = 1; i <= n; ++i) {
            auto& p = pts[order[i]];
            for (std::size_t j = 0; j < n; ++j) p[j] = best[j] + delta * (p[j] - best[j]);
            vals[order[i]] = eval(f, p);
        }
    }

    sort_simplex();
    res.x = pts[order.front()];
    res.value = vals[order.front()];
    res.iterations = iter;
    return res;
}

}  // namespace hypecurve::detail
