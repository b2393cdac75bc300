#include "hypecurve/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>

#include "hypecurve/detail/nelder_mead.hpp"
#include "hypecurve/error.hpp"
#include "hypecurve/random.hpp"

namespace hypecurve {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Search box for the log-parameterized quantities; outside it the objective
// is +inf. Hitting it is reported as a warning, never silently.
constexpr double r_min = 1e-3;
constexpr double r_max = 20.0;
constexpr double box_span = 1e6;  // k, p may move this factor from their init

struct Observations {
    std::vector<double> years;
    std::vector<double> counts;
    double weight = 1.0;  // multiplies squared residuals

    Observations(const YearSeries& s, double w) : weight(w) {
        for (const auto& pt : s.points()) {
            years.push_back(pt.year);
            counts.push_back(pt.count);
        }
    }

    double sst() const {
        double mean = 0.0;
        for (double c : counts) mean += c;
        mean /= static_cast<double>(counts.size());
        double ss = 0.0;
        for (double c : counts) ss += (c - mean) * (c - mean);
        return weight * ss;
    }
};

double sse(const Observations& obs, const HypeParams& hp, Curve curve, ForwardModel forward) {
    double acc = 0.0;
    for (std::size_t i = 0; i < obs.years.size(); ++i) {
        const double d = obs.counts[i] - expected_count(obs.years[i], hp, curve, forward);
        acc += d * d;
    }
    return obs.weight * acc;
}

double inverse_square(double max) { return 1.0 / (max * max); }

void append_residuals(std::vector<Residual>& out, const YearSeries& s, const HypeParams& hp,
                      Curve curve, ForwardModel forward) {
    for (const auto& pt : s.points()) {
        out.push_back({curve, pt.year, pt.count - expected_count(pt.year, hp, curve, forward)});
    }
}

struct Bounds {
    std::vector<double> lo, hi;

    bool contains(std::span<const double> x) const {
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!(x[i] >= lo[i] && x[i] <= hi[i])) return false;
        }
        return true;
    }
};

struct StartOutcome {
    std::vector<double> x;
    double value = inf;
    int iterations = 0;
    bool converged = false;
};

// Multi-start simplex search. Start 0 is the unperturbed initial point;
// the rest are jittered by `jitter` half-widths drawn from a seeded stream.
StartOutcome multi_start(const detail::Objective& objective, const std::vector<double>& x0,
                         const std::vector<double>& steps, const std::vector<double>& jitter,
                         const Bounds& bounds, const FitConfig& cfg, double abs_tol,
                         int& best_index) {
    Xoshiro256StarStar rng(cfg.seed);
    StartOutcome best;
    best_index = -1;

    for (int s = 0; s < cfg.starts; ++s) {
        auto start = x0;
        if (s > 0) {
            for (std::size_t j = 0; j < start.size(); ++j) {
                start[j] += jitter[j] * (2.0 * rng.uniform() - 1.0);
                start[j] = std::clamp(start[j], bounds.lo[j], bounds.hi[j]);
            }
        }

        detail::SimplexOptions opts{cfg.max_iters, cfg.tolerance, abs_tol};
        auto res = detail::nelder_mead(objective, start, steps, opts);
        int used = res.iterations;

        // Restart from the best vertex with a smaller simplex; a collapsed
        // simplex can report convergence away from a minimum.
        auto polish_steps = steps;
        for (int round = 0; round < 4 && used < cfg.max_iters && std::isfinite(res.value); ++round) {
            for (auto& st : polish_steps) st *= 0.25;
            opts.max_iters = cfg.max_iters - used;
            auto again = detail::nelder_mead(objective, res.x, polish_steps, opts);
            used += again.iterations;
            const double gain = res.value - again.value;
            const bool improved = gain > cfg.tolerance * std::abs(res.value) + abs_tol;
            res = std::move(again);
            if (!improved) break;
        }
        res.iterations = used;

        // Strict < keeps the lowest start index on ties.
        if (res.value < best.value) {
            best = {res.x, res.value, res.iterations, res.converged};
            best_index = s;
        }
    }
    return best;
}

void warn_if_near(std::vector<std::string>& warnings, double logv, double lo, double hi,
                  const char* name) {
    constexpr double margin = 0.01;  // in log space, about 1%
    if (logv - lo < margin) {
        warnings.push_back(std::string(name) + " at lower search bound");
    } else if (hi - logv < margin) {
        warnings.push_back(std::string(name) + " at upper search bound");
    }
}

void finish_diagnostics(FitResult& res, double sst) {
    res.rmse = std::sqrt(res.sse / static_cast<double>(res.n_points));
    res.r_squared = sst > 0.0 ? 1.0 - res.sse / sst : (res.sse == 0.0 ? 1.0 : -inf);
}

void warn_negative_delay(FitResult& res) {
    if (res.has_tech && res.params.tech.tstar < 0.0) {
        res.warnings.push_back("negative delay tstar: patents lead publications");
    }
}

[[noreturn]] void degenerate(const std::string& what) {
    throw Error(Errc::degenerate_fit, what + ": objective is non-finite at every start");
}

FitResult fit_joint_simultaneous(const YearSeries& pub, const YearSeries& pat,
                                 const FitConfig& cfg) {
    const auto sp0 = init_science(pub);
    const auto tp0 = init_tech(pat, sp0, cfg.forward);

    const Observations po(pub, inverse_square(pub.max_count()));
    const Observations ao(pat, inverse_square(pat.max_count()));
    const double sst = po.sst() + ao.sst();

    const Bounds bounds{
        {std::log(sp0.k / box_span), std::log(r_min), -inf, std::log(tp0.p / box_span), -inf},
        {std::log(sp0.k * box_span), std::log(r_max), inf, std::log(tp0.p * box_span), inf}};
    auto unpack = [](std::span<const double> x) {
        return HypeParams{{std::exp(x[0]), std::exp(x[1]), x[2]}, {std::exp(x[3]), x[4]}};
    };
    const detail::Objective objective = [&](std::span<const double> x) {
        if (!bounds.contains(x)) return inf;
        const auto hp = unpack(x);
        return sse(po, hp, Curve::publications, cfg.forward) +
               sse(ao, hp, Curve::patents, cfg.forward);
    };

    const std::vector<double> x0{std::log(sp0.k), std::log(sp0.r), sp0.t0, std::log(tp0.p),
                                 tp0.tstar};
    const std::vector<double> steps{0.2, 0.2, 1.0, 0.2, 1.0};
    const std::vector<double> jitter{std::log(2.0), std::log(2.0), 2.0, std::log(2.0), 2.0};

    int best_index = 0;
    const auto best = multi_start(objective, x0, steps, jitter, bounds, cfg,
                                  cfg.tolerance * cfg.tolerance * sst, best_index);
    if (!std::isfinite(best.value)) degenerate("joint fit");

    FitResult res;
    res.params = unpack(best.x);
    res.has_tech = true;
    res.sse = best.value;
    res.n_points = pub.size() + pat.size();
    res.converged = best.converged;
    res.best_start_index = best_index;
    res.iterations = best.iterations;
    append_residuals(res.residuals, pub, res.params, Curve::publications, cfg.forward);
    append_residuals(res.residuals, pat, res.params, Curve::patents, cfg.forward);
    warn_if_near(res.warnings, best.x[1], bounds.lo[1], bounds.hi[1], "r");
    warn_if_near(res.warnings, best.x[0], bounds.lo[0], bounds.hi[0], "k");
    warn_if_near(res.warnings, best.x[3], bounds.lo[3], bounds.hi[3], "p");
    warn_negative_delay(res);
    finish_diagnostics(res, sst);
    return res;
}

}  // namespace

void FitConfig::validate() const {
    if (starts < 1) throw Error(Errc::invalid_argument, "starts must be >= 1");
    if (max_iters < 1) throw Error(Errc::invalid_argument, "max_iters must be >= 1");
    if (!(tolerance > 0.0 && std::isfinite(tolerance))) {
        throw Error(Errc::invalid_argument, "tolerance must be finite and > 0");
    }
}

ScienceParams init_science(const YearSeries& publications) {
    const double max = publications.max_count();
    const int peak = publications.argmax_year();
    double k = total(publications);
    if (peak >= publications.last_year() - 1) {
        k *= 2.0;  // still rising: the observed mass is a lower bound
    }
    const double r = k > 0.0 ? std::clamp(4.0 * max / k, 0.05, 3.0) : 0.05;
    return {k, r, peak + 0.5};
}

TechParams init_tech(const YearSeries& patents, const ScienceParams& science,
                     ForwardModel forward) {
    const double lo = patents.first_year() - science.t0 - 10.0;
    const double hi = patents.last_year() - science.t0 + 10.0;

    TechParams best{1.0, 0.0};
    double best_sse = inf;
    std::vector<double> unit(patents.size());
    for (double ts = lo; ts <= hi; ts += 0.25) {
        const HypeParams unit_hp{science, {1.0, ts}};
        double gy = 0.0, gg = 0.0;
        for (std::size_t i = 0; i < patents.size(); ++i) {
            const auto& pt = patents.points()[i];
            unit[i] = expected_count(pt.year, unit_hp, Curve::patents, forward);
            gy += unit[i] * pt.count;
            gg += unit[i] * unit[i];
        }
        if (!(gg > 0.0) || !(gy > 0.0)) continue;
        const double p = gy / gg;
        double acc = 0.0;
        for (std::size_t i = 0; i < patents.size(); ++i) {
            const double d = patents.points()[i].count - p * unit[i];
            acc += d * d;
        }
        if (acc < best_sse) {
            best_sse = acc;
            best = {p, ts};
        }
    }
    if (!std::isfinite(best_sse)) {
        // All-zero patents (or no overlap); fall back to a small positive ratio.
        const double tot = total(patents);
        best = {tot > 0.0 ? tot / science.k : 1e-6, 0.0};
    }
    return best;
}

double science_objective(const ScienceParams& sp, const YearSeries& publications,
                         ForwardModel forward) {
    return sse(Observations(publications, 1.0), HypeParams{sp, {1.0, 0.0}}, Curve::publications,
               forward);
}

double tech_objective(const HypeParams& hp, const YearSeries& patents, ForwardModel forward) {
    return sse(Observations(patents, 1.0), hp, Curve::patents, forward);
}

double joint_objective(const HypeParams& hp, const YearSeries& publications,
                       const YearSeries& patents, ForwardModel forward) {
    return sse(Observations(publications, inverse_square(publications.max_count())), hp,
               Curve::publications, forward) +
           sse(Observations(patents, inverse_square(patents.max_count())), hp, Curve::patents,
               forward);
}

FitResult fit_science(const YearSeries& publications, const FitConfig& cfg) {
    cfg.validate();
    if (!(total(publications) > 0.0)) {
        throw Error(Errc::degenerate_fit, "publication series is identically zero");
    }
    const auto sp0 = init_science(publications);
    const Observations obs(publications, 1.0);
    const double sst = obs.sst();

    const Bounds bounds{{std::log(sp0.k / box_span), std::log(r_min), -inf},
                        {std::log(sp0.k * box_span), std::log(r_max), inf}};
    auto unpack = [](std::span<const double> x) {
        return HypeParams{{std::exp(x[0]), std::exp(x[1]), x[2]}, {1.0, 0.0}};
    };
    const detail::Objective objective = [&](std::span<const double> x) {
        if (!bounds.contains(x)) return inf;
        return sse(obs, unpack(x), Curve::publications, cfg.forward);
    };

    const std::vector<double> x0{std::log(sp0.k), std::log(sp0.r), sp0.t0};
    const std::vector<double> steps{0.2, 0.2, 1.0};
    const std::vector<double> jitter{std::log(2.0), std::log(2.0), 2.0};

    int best_index = 0;
    const auto best = multi_start(objective, x0, steps, jitter, bounds, cfg,
                                  cfg.tolerance * cfg.tolerance * sst, best_index);
    if (!std::isfinite(best.value)) degenerate("publication fit");

    FitResult res;
    res.params = unpack(best.x);
    res.sse = best.value;
    res.n_points = publications.size();
    res.converged = best.converged;
    res.best_start_index = best_index;
    res.iterations = best.iterations;
    append_residuals(res.residuals, publications, res.params, Curve::publications, cfg.forward);
    warn_if_near(res.warnings, best.x[1], bounds.lo[1], bounds.hi[1], "r");
    warn_if_near(res.warnings, best.x[0], bounds.lo[0], bounds.hi[0], "k");
    finish_diagnostics(res, sst);
    return res;
}

FitResult fit_tech(const YearSeries& patents, const ScienceParams& science,
                   const FitConfig& cfg) {
    cfg.validate();
    validate(science);
    if (!(total(patents) > 0.0)) {
        throw Error(Errc::degenerate_fit, "patent series is identically zero");
    }
    const auto tp0 = init_tech(patents, science, cfg.forward);
    const Observations obs(patents, 1.0);
    const double sst = obs.sst();

    const Bounds bounds{{std::log(tp0.p / box_span), -inf}, {std::log(tp0.p * box_span), inf}};
    auto unpack = [&science](std::span<const double> x) {
        return HypeParams{science, {std::exp(x[0]), x[1]}};
    };
    const detail::Objective objective = [&](std::span<const double> x) {
        if (!bounds.contains(x)) return inf;
        return sse(obs, unpack(x), Curve::patents, cfg.forward);
    };

    const std::vector<double> x0{std::log(tp0.p), tp0.tstar};
    const std::vector<double> steps{0.2, 1.0};
    const std::vector<double> jitter{std::log(2.0), 2.0};

    int best_index = 0;
    const auto best = multi_start(objective, x0, steps, jitter, bounds, cfg,
                                  cfg.tolerance * cfg.tolerance * sst, best_index);
    if (!std::isfinite(best.value)) degenerate("patent fit");

    FitResult res;
    res.params = unpack(best.x);
    res.has_tech = true;
    res.sse = best.value;
    res.n_points = patents.size();
    res.converged = best.converged;
    res.best_start_index = best_index;
    res.iterations = best.iterations;
    append_residuals(res.residuals, patents, res.params, Curve::patents, cfg.forward);
    warn_if_near(res.warnings, best.x[0], bounds.lo[0], bounds.hi[0], "p");
    warn_negative_delay(res);
    finish_diagnostics(res, sst);
    return res;
}

FitResult fit_joint(const YearSeries& publications, const YearSeries& patents,
                    const FitConfig& cfg) {
    cfg.validate();
    if (!(total(publications) > 0.0) || !(total(patents) > 0.0)) {
        throw Error(Errc::degenerate_fit, "an input series is identically zero");
    }
    if (cfg.mode == FitMode::joint) {
        return fit_joint_simultaneous(publications, patents, cfg);
    }

    const auto sci = fit_science(publications, cfg);
    const auto tech = fit_tech(patents, sci.params.science, cfg);

    FitResult res;
    res.params = {sci.params.science, tech.params.tech};
    res.has_tech = true;
    res.sse = joint_objective(res.params, publications, patents, cfg.forward);
    res.n_points = publications.size() + patents.size();
    res.converged = sci.converged && tech.converged;
    res.best_start_index = sci.best_start_index;
    res.iterations = sci.iterations + tech.iterations;
    res.residuals = sci.residuals;
    res.residuals.insert(res.residuals.end(), tech.residuals.begin(), tech.residuals.end());
    res.warnings = sci.warnings;
    res.warnings.insert(res.warnings.end(), tech.warnings.begin(), tech.warnings.end());
    const double sst = Observations(publications, inverse_square(publications.max_count())).sst() +
                       Observations(patents, inverse_square(patents.max_count())).sst();
    finish_diagnostics(res, sst);
    return res;
}

OracleResult grid_oracle(const YearSeries& publications, const YearSeries& patents,
                         const ParamBox& box, int steps, ForwardModel forward) {
    if (steps < 8) {
        throw Error(Errc::invalid_argument, "grid_oracle needs at least 8 steps per axis");
    }
    const std::array<Interval, 5> axes{box.k, box.r, box.t0, box.p, box.tstar};
    for (const auto& a : axes) {
        if (!std::isfinite(a.lo) || !std::isfinite(a.hi) || !(a.hi > a.lo)) {
            throw Error(Errc::invalid_argument, "grid_oracle box must be finite and non-empty");
        }
    }
    if (!(box.k.lo > 0.0 && box.r.lo > 0.0 && box.p.lo > 0.0)) {
        throw Error(Errc::invalid_argument, "grid_oracle box must keep k, r, p positive");
    }

    const auto n = static_cast<std::size_t>(steps);
    auto node = [steps](const Interval& a, std::size_t i) {
        return a.lo + (a.hi - a.lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
    };

    const Observations po(publications, inverse_square(publications.max_count()));
    const Observations ao(patents, inverse_square(patents.max_count()));
    const std::size_t np = po.years.size();
    const std::size_t na = ao.years.size();

    // Both forward models are linear in k (publications) and in p*k
    // (patents), so unit-amplitude predictions are cached per shape.
    std::vector<double> pub_unit(n * n * np);          // [r][t0][year]
    std::vector<double> pat_unit(n * n * n * na);      // [r][t0][tstar][year]
    for (std::size_t ir = 0; ir < n; ++ir) {
        for (std::size_t it = 0; it < n; ++it) {
            const ScienceParams sp{1.0, node(box.r, ir), node(box.t0, it)};
            double* pu = &pub_unit[(ir * n + it) * np];
            for (std::size_t y = 0; y < np; ++y) {
                pu[y] = expected_count(po.years[y], {sp, {1.0, 0.0}}, Curve::publications, forward);
            }
            for (std::size_t is = 0; is < n; ++is) {
                const HypeParams hp{sp, {1.0, node(box.tstar, is)}};
                double* au = &pat_unit[((ir * n + it) * n + is) * na];
                for (std::size_t y = 0; y < na; ++y) {
                    au[y] = expected_count(ao.years[y], hp, Curve::patents, forward);
                }
            }
        }
    }

    auto weighted_sse = [](const std::vector<double>& obs, const double* unit, double amp,
                           double w) {
        double acc = 0.0;
        for (std::size_t y = 0; y < obs.size(); ++y) {
            const double d = obs[y] - amp * unit[y];
            acc += d * d;
        }
        return w * acc;
    };

    double best = inf;
    std::array<std::size_t, 5> arg{};
    for (std::size_t ir = 0; ir < n; ++ir) {
        for (std::size_t it = 0; it < n; ++it) {
            const double* pu = &pub_unit[(ir * n + it) * np];
            for (std::size_t ik = 0; ik < n; ++ik) {
                const double k = node(box.k, ik);
                const double pub_part = weighted_sse(po.counts, pu, k, po.weight);
                if (pub_part >= best) continue;
                for (std::size_t is = 0; is < n; ++is) {
                    const double* au = &pat_unit[((ir * n + it) * n + is) * na];
                    for (std::size_t ip = 0; ip < n; ++ip) {
                        const double v =
                            pub_part + weighted_sse(ao.counts, au, node(box.p, ip) * k, ao.weight);
                        if (v < best) {
                            best = v;
                            arg = {ik, ir, it, ip, is};
                        }
                    }
                }
            }
        }
    }

    OracleResult out;
    out.params = {{node(box.k, arg[0]), node(box.r, arg[1]), node(box.t0, arg[2])},
                  {node(box.p, arg[3]), node(box.tstar, arg[4])}};
    out.objective = joint_objective(out.params, publications, patents, forward);
    return out;
}

}  // namespace hypecurve
