#include "hypecurve/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hypecurve/error.hpp"

namespace hypecurve {

namespace {

constexpr double trigger_tol = 1e-9;
constexpr double dip_tol = 1e-4;

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw Error(Errc::invalid_epsilon, "epsilon must lie in (0, 1)");
    }
}

// Smallest t in [lo, hi] with f(t) >= target, for f increasing on [lo, hi]
// with f(lo) < target <= f(hi).
double bisect_rising(const std::function<double(double)>& f, double target, double lo, double hi) {
    while (hi - lo > trigger_tol) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) >= target ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

double golden_min(const std::function<double(double)>& f, double a, double b) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > dip_tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

double golden_max(const std::function<double(double)>& f, double a, double b) {
    return golden_min([&f](double t) { return -f(t); }, a, b);
}

}  // namespace

double pub_rate_trigger_closed_form(const ScienceParams& sp, double epsilon) {
    check_epsilon(epsilon);
    // epsilon u^2 + (2 epsilon - 4) u + epsilon = 0, larger root.
    const double u = ((2.0 - epsilon) + 2.0 * std::sqrt(1.0 - epsilon)) / epsilon;
    return sp.t0 - std::log(u) / sp.r;
}

double trigger_time(const HypeParams& hp, TriggerCurve curve, double epsilon) {
    check_epsilon(epsilon);
    const auto& sp = hp.science;
    // Every curve is within a factor e^{-60} of zero at its centre - 60/r.
    const double reach = 60.0 / sp.r;
    switch (curve) {
        case TriggerCurve::pub_rate:
            return bisect_rising([&sp](double t) { return pub_rate(t, sp); },
                                 epsilon * pub_peak_rate(sp), sp.t0 - reach, sp.t0);
        case TriggerCurve::cumulative:
            return bisect_rising([&sp](double t) { return cumulative(t, sp); }, epsilon * sp.k,
                                 sp.t0 - reach, sp.t0 + reach);
        case TriggerCurve::patents: {
            const double centre = sp.t0 + hp.tech.tstar;
            return bisect_rising([&hp](double t) { return patent_rate(t, hp); },
                                 epsilon * patent_plateau(hp), centre - reach, centre + reach);
        }
    }
    throw Error(Errc::invalid_argument, "unknown trigger curve");
}

std::optional<Dip> detect_dip(const HypeParams& hp, double step_factor) {
    const auto& sp = hp.science;
    const double step = step_factor / sp.r;
    const double lo = std::min(sp.t0, sp.t0 + hp.tech.tstar) - 20.0 / sp.r;
    const double hi = std::max(sp.t0, sp.t0 + hp.tech.tstar) + 20.0 / sp.r;
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step));
    const auto h = [&hp](double t) { return hype(t, hp); };

    std::vector<double> ts(n + 1), hs(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        ts[i] = lo + step * static_cast<double>(i);
        hs[i] = h(ts[i]);
    }

    // Rise, fall, rise scan; changes below tol are rounding noise on a plateau.
    const double tol = 1e-9 * *std::max_element(hs.begin(), hs.end());
    int phase = 0;
    std::size_t imax = 0, imin = 0, ilow = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        if (phase == 0) {
            if (hs[i] < hs[ilow]) ilow = i;
            if (hs[i] > hs[ilow] + tol) {
                phase = 1;
                imax = i;
            }
        } else if (phase == 1) {
            if (hs[i] > hs[imax]) imax = i;
            if (hs[i] < hs[imax] - tol) {
                phase = 2;
                imin = i;
            }
        } else {
            if (hs[i] < hs[imin]) imin = i;
            if (hs[i] > hs[imin] + tol) {
                phase = 3;
                break;
            }
        }
    }
    if (phase != 3 || imax == 0 || imin >= n) return std::nullopt;

    Dip dip;
    dip.peak_year = golden_max(h, ts[imax - 1], ts[imax + 1]);
    dip.year = golden_min(h, ts[imin - 1], ts[imin + 1]);
    const double hmax = h(dip.peak_year);
    const double hmin = h(dip.year);
    dip.depth = (hmax - hmin) / hmax;
    if (!(dip.depth > 0.0 && dip.depth < 1.0)) return std::nullopt;
    return dip;
}

std::vector<ForecastRow> forecast(const HypeParams& hp, int from_year, int horizon_years) {
    if (horizon_years < 0) {
        throw Error(Errc::invalid_argument, "horizon must be >= 0");
    }
    const double peak = pub_peak_rate(hp.science);
    std::vector<ForecastRow> rows;
    rows.reserve(static_cast<std::size_t>(horizon_years) + 1);
    for (int y = from_year; y <= from_year + horizon_years; ++y) {
        ForecastRow row;
        row.year = y;
        row.pub_rate = pub_bin(y, hp.science);
        row.pat_rate = patent_bin(y, hp);
        row.hype = row.pub_rate + row.pat_rate;
        row.pub_ratio = pub_rate(y, hp.science) / peak;
        rows.push_back(row);
    }
    return rows;
}

std::optional<int> first_year_below(const std::vector<ForecastRow>& rows, double t0,
                                    double threshold) {
    for (const auto& row : rows) {
        if (row.year >= t0 && row.pub_ratio < threshold) return row.year;
    }
    return std::nullopt;
}

HypeReport report_from_params(const HypeParams& hp, bool has_tech, int forecast_from_year,
                              const ReportConfig& cfg) {
    check_epsilon(cfg.epsilon);
    HypeReport rep;
    const auto& sp = hp.science;
    rep.pub_peak_year = sp.t0;
    rep.pub_peak_rate = pub_peak_rate(sp);
    rep.pub_trigger_year = trigger_time(hp, cfg.pub_trigger_basis, cfg.epsilon);
    rep.pub_rate_trigger_year = trigger_time(hp, TriggerCurve::pub_rate, cfg.epsilon);
    rep.forecast_from_year = forecast_from_year;
    rep.has_tech = has_tech;
    if (has_tech) {
        rep.pat_trigger_year = trigger_time(hp, TriggerCurve::patents, cfg.epsilon);
        rep.delay_years = rep.pat_trigger_year - rep.pub_trigger_year;
        rep.patent_plateau = patent_plateau(hp);
        rep.dip = detect_dip(hp);
    }
    rep.forecast = forecast(hp, forecast_from_year, cfg.horizon_years);
    if (!has_tech) {
        for (auto& row : rep.forecast) {
            row.pat_rate = 0.0;
            row.hype = row.pub_rate;
        }
    }
    rep.pub_half_year = first_year_below(rep.forecast, sp.t0, 0.5);
    return rep;
}

HypeReport build_report(const FitResult& fit, int last_observed_year, const ReportConfig& cfg) {
    if (!fit.converged) {
        throw Error(Errc::unconverged_fit, "fit did not converge; no report produced");
    }
    return report_from_params(fit.params, fit.has_tech, last_observed_year, cfg);
}

}  // namespace hypecurve
