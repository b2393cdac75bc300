#include "hypecurve/fit.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "hypecurve/error.hpp"
#include "hypecurve/synth.hpp"

namespace hypecurve {
namespace {

const HypeParams ref{{4.0, 1.0, 8.0}, {0.125, 4.0}};

void expect_rel(double got, double want, double rel, const char* what) {
    EXPECT_NEAR(got, want, rel * std::abs(want)) << what;
}

YearSeries science_bins(const ScienceParams& sp, int from, int to) {
    return generate({sp, {1.0, 0.0}}, from, to, {}).publications;
}

// Brute-force argmin of the publication-only objective over a 3-D box.
double science_grid_min(const YearSeries& s, const ScienceParams& c, int steps) {
    double best = INFINITY;
    for (int i = 0; i < steps; ++i) {
        const double k = c.k * (0.5 + 1.5 * i / (steps - 1));
        for (int j = 0; j < steps; ++j) {
            const double r = c.r * (0.5 + 1.5 * j / (steps - 1));
            for (int m = 0; m < steps; ++m) {
                const double t0 = c.t0 - 2.0 + 4.0 * m / (steps - 1);
                best = std::min(best, science_objective({k, r, t0}, s));
            }
        }
    }
    return best;
}

TEST(InitScience, LocatesPeakAndMass) {
    const auto s = science_bins({1000, 0.5, 2005}, 1990, 2020);
    const auto sp = init_science(s);
    EXPECT_NEAR(sp.t0, 2005, 1.0);
    EXPECT_NEAR(sp.k, 1000, 50);
    EXPECT_GT(sp.r, 0.0);
}

TEST(InitScience, DoublesMassWhenStillRising) {
    const ScienceParams truth{1000, 0.5, 2010};
    const auto s = science_bins(truth, 1990, 2008);  // truncated before the peak
    EXPECT_GT(truth.k, total(s));
    EXPECT_EQ(s.argmax_year(), 2008);
    EXPECT_DOUBLE_EQ(init_science(s).k, 2 * total(s));
}

TEST(InitScience, RateClamped) {
    const YearSeries spike("p", {{2000, 0}, {2001, 100}, {2002, 0}, {2003, 0}});
    EXPECT_EQ(init_science(spike).r, 3.0);
    std::vector<YearCount> ones;
    for (int y = 2000; y < 2090; ++y) ones.push_back({y, 1.0});
    const YearSeries flat("p", ones);
    EXPECT_EQ(init_science(flat).r, 0.05);
}

TEST(FitScience, ZeroNoiseRecovery) {
    const ScienceParams truth{4000, 0.45, 2004};
    const auto s = science_bins(truth, 1988, 2025);
    const auto fit = fit_science(s);
    EXPECT_TRUE(fit.converged);
    EXPECT_FALSE(fit.has_tech);
    expect_rel(fit.params.science.k, truth.k, 1e-4, "k");
    expect_rel(fit.params.science.r, truth.r, 1e-4, "r");
    expect_rel(fit.params.science.t0, truth.t0, 1e-4, "t0");
    EXPECT_LT(fit.sse, 1e-8 * truth.k * truth.k);
    EXPECT_NEAR(fit.r_squared, 1.0, 1e-6);
    EXPECT_EQ(fit.n_points, s.size());
    EXPECT_DOUBLE_EQ(fit.rmse, std::sqrt(fit.sse / s.size()));
    EXPECT_EQ(fit.residuals.size(), s.size());
}

TEST(FitScience, PoissonRecoveryAgainstGridOracle) {
    const ScienceParams truth{4000, 0.45, 2004};
    FitConfig cfg;
    cfg.starts = 4;
    int recovered = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto s = generate({truth, {1.0, 0.0}}, 1988, 2025, {NoiseKind::poisson, 0, seed}).publications;
        const auto fit = fit_science(s, cfg);
        const auto& q = fit.params.science;
        if (std::abs(q.k / truth.k - 1) <= 0.10 && std::abs(q.r / truth.r - 1) <= 0.15 &&
            std::abs(q.t0 - truth.t0) <= 0.5) {
            ++recovered;
        }
        if (seed <= 20) {  // oracle check on a subset keeps runtime modest
            EXPECT_LE(fit.sse, science_grid_min(s, truth, 16)) << "seed " << seed;
        }
    }
    EXPECT_GE(recovered, 80);
}

TEST(FitScience, ConstantSeriesDoesNotCrash) {
    std::vector<YearCount> pts;
    for (int y = 1990; y < 2020; ++y) pts.push_back({y, 5.0});
    const YearSeries flat("publications", pts);
    try {
        const auto fit = fit_science(flat);
        bool flagged = false;
        for (const auto& w : fit.warnings) flagged |= w.find("bound") != std::string::npos;
        EXPECT_TRUE(flagged) << "no bound warning; r = " << fit.params.science.r;
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::degenerate_fit);
    }
}

TEST(FitScience, AllZeroIsDegenerate) {
    const YearSeries zero("publications", {{2000, 0}, {2001, 0}, {2002, 0}});
    try {
        fit_science(zero);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::degenerate_fit);
    }
}

TEST(FitTech, ZeroNoiseRecovery) {
    const HypeParams truth{{4000, 0.45, 2004}, {0.25, 5.0}};
    const auto pat = generate(truth, 1988, 2025, {}).patents;
    const auto fit = fit_tech(pat, truth.science);
    EXPECT_TRUE(fit.converged);
    expect_rel(fit.params.tech.p, 0.25, 1e-4, "p");
    expect_rel(fit.params.tech.tstar, 5.0, 1e-4, "tstar");
    EXPECT_EQ(fit.params.science, truth.science);
}

TEST(FitTech, ZeroDelay) {
    const HypeParams truth{{4000, 0.45, 2004}, {0.7, 0.0}};
    const auto pat = generate(truth, 1988, 2025, {}).patents;
    EXPECT_NEAR(fit_tech(pat, truth.science).params.tech.tstar, 0.0, 0.1);
}

TEST(FitTech, NegativeDelayWarned) {
    const HypeParams truth{{4000, 0.45, 2004}, {0.7, -3.0}};
    const auto pat = generate(truth, 1988, 2025, {}).patents;
    const auto fit = fit_tech(pat, truth.science);
    EXPECT_NEAR(fit.params.tech.tstar, -3.0, 1e-3);
    ASSERT_FALSE(fit.warnings.empty());
    EXPECT_NE(fit.warnings.back().find("negative"), std::string::npos);
}

TEST(FitJoint, ZeroNoiseReferenceRecovery) {
    const auto g = generate(ref, 0, 30, {});
    const auto fit = fit_joint(g.publications, g.patents);
    EXPECT_TRUE(fit.converged);
    EXPECT_TRUE(fit.has_tech);
    expect_rel(fit.params.science.k, 4.0, 1e-4, "k");
    expect_rel(fit.params.science.r, 1.0, 1e-4, "r");
    expect_rel(fit.params.science.t0, 8.0, 1e-4, "t0");
    expect_rel(fit.params.tech.p, 0.125, 1e-4, "p");
    expect_rel(fit.params.tech.tstar, 4.0, 1e-4, "tstar");
    EXPECT_GE(fit.r_squared, 1.0 - 1e-6);
    EXPECT_LE(fit.r_squared, 1.0);
}

TEST(FitJoint, JointAndIndependentAgreeOnZeroNoise) {
    const HypeParams truth{{8000, 0.45, 2004}, {2.5, 5.0}};
    const auto g = generate(truth, 1988, 2025, {});
    FitConfig joint, indep;
    indep.mode = FitMode::independent;
    const auto a = fit_joint(g.publications, g.patents, joint);
    const auto b = fit_joint(g.publications, g.patents, indep);
    expect_rel(a.params.science.k, b.params.science.k, 1e-3, "k");
    expect_rel(a.params.science.r, b.params.science.r, 1e-3, "r");
    expect_rel(a.params.science.t0, b.params.science.t0, 1e-3, "t0");
    expect_rel(a.params.tech.p, b.params.tech.p, 1e-3, "p");
    expect_rel(a.params.tech.tstar, b.params.tech.tstar, 1e-3, "tstar");
    EXPECT_DOUBLE_EQ(b.sse, joint_objective(b.params, g.publications, g.patents));
}

TEST(FitJoint, ShorterPatentSeries) {
    const HypeParams truth{{8000, 0.45, 2004}, {2.5, 5.0}};
    const auto g = generate(truth, 1988, 2025, {});
    std::vector<YearCount> late(g.patents.points().begin() + 8, g.patents.points().end());
    const YearSeries pat("patents", late);
    const auto fit = fit_joint(g.publications, pat);
    EXPECT_TRUE(fit.converged);
    expect_rel(fit.params.tech.tstar, 5.0, 1e-4, "tstar");
    EXPECT_EQ(fit.n_points, g.publications.size() + pat.size());
}

TEST(FitJoint, MidpointForwardModel) {
    const HypeParams truth{{8000, 0.45, 2004}, {2.5, 5.0}};
    const auto g = generate(truth, 1988, 2025, {}, ForwardModel::midpoint);
    FitConfig cfg;
    cfg.forward = ForwardModel::midpoint;
    const auto fit = fit_joint(g.publications, g.patents, cfg);
    expect_rel(fit.params.science.k, truth.science.k, 1e-4, "k");
    expect_rel(fit.params.tech.tstar, truth.tech.tstar, 1e-4, "tstar");
}

TEST(FitJoint, DeterministicForSameSeed) {
    const HypeParams truth{{8000, 0.45, 2004}, {2.5, 5.0}};
    const auto g = generate(truth, 1988, 2025, {NoiseKind::poisson, 0, 17});
    FitConfig cfg;
    cfg.seed = 99;
    const auto a = fit_joint(g.publications, g.patents, cfg);
    const auto b = fit_joint(g.publications, g.patents, cfg);
    EXPECT_EQ(a.params, b.params);
    EXPECT_EQ(a.sse, b.sse);
    EXPECT_EQ(a.best_start_index, b.best_start_index);
    EXPECT_EQ(a.iterations, b.iterations);
}

TEST(FitJoint, NeverWorseThanInitializationAndPositive) {
    const HypeParams truth{{8000, 0.45, 2004}, {2.5, 5.0}};
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto g = generate(truth, 1988, 2025, {NoiseKind::poisson, 0, seed});
        const auto sp0 = init_science(g.publications);
        const HypeParams start{sp0, init_tech(g.patents, sp0)};
        const auto fit = fit_joint(g.publications, g.patents);
        EXPECT_LE(fit.sse, joint_objective(start, g.publications, g.patents));
        EXPECT_TRUE(is_valid(fit.params));
        EXPECT_GE(fit.sse, 0.0);
        EXPECT_LE(fit.r_squared, 1.0);
    }
}

TEST(FitConfig, Validation) {
    FitConfig cfg;
    cfg.starts = 0;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = {};
    cfg.tolerance = 0;
    EXPECT_THROW(cfg.validate(), Error);
    const auto g = generate(ref, 0, 30, {});
    EXPECT_THROW(fit_joint(g.publications, g.patents, cfg), Error);
}

ParamBox box_around(const HypeParams& t) {
    return {{t.science.k / 2, t.science.k * 2},
            {t.science.r / 2, t.science.r * 2},
            {t.science.t0 - 2, t.science.t0 + 2},
            {t.tech.p / 2, t.tech.p * 2},
            {t.tech.tstar / 2, t.tech.tstar * 2}};
}

TEST(GridOracle, CertifiesOptimizerOnReference) {
    const auto g = generate(ref, 0, 30, {});
    const auto oracle = grid_oracle(g.publications, g.patents, box_around(ref), 16);
    const auto fit = fit_joint(g.publications, g.patents);
    EXPECT_GE(oracle.objective, fit.sse);
    // argmin within one grid cell of the generator
    const auto box = box_around(ref);
    auto cell = [](const Interval& a) { return (a.hi - a.lo) / 15; };
    EXPECT_LE(std::abs(oracle.params.science.k - 4), cell(box.k));
    EXPECT_LE(std::abs(oracle.params.science.r - 1), cell(box.r));
    EXPECT_LE(std::abs(oracle.params.science.t0 - 8), cell(box.t0));
    EXPECT_LE(std::abs(oracle.params.tech.p - 0.125), cell(box.p));
    EXPECT_LE(std::abs(oracle.params.tech.tstar - 4), cell(box.tstar));
    EXPECT_DOUBLE_EQ(oracle.objective, joint_objective(oracle.params, g.publications, g.patents));
}

TEST(GridOracle, FindsExactNodeWhenTruthIsOnGrid) {
    const auto g = generate(ref, 0, 30, {});
    // Nodes at lo + i * (hi - lo) / 7 hit the truth for i = 3.
    const ParamBox box{{1, 8}, {0.25, 2}, {5, 12}, {0.03125, 0.25}, {1, 8}};
    const auto oracle = grid_oracle(g.publications, g.patents, box, 8);
    EXPECT_NEAR(oracle.params.science.t0, 8.0, 1e-12);
    EXPECT_NEAR(oracle.params.tech.tstar, 4.0, 1e-12);
    EXPECT_LT(oracle.objective, 1e-20);
}

TEST(GridOracle, RejectsDegenerateGrids) {
    const auto g = generate(ref, 0, 30, {});
    EXPECT_THROW(grid_oracle(g.publications, g.patents, box_around(ref), 7), Error);
    EXPECT_THROW(grid_oracle(g.publications, g.patents, box_around(ref), 1), Error);
    auto bad = box_around(ref);
    bad.r = {1, 1};
    EXPECT_THROW(grid_oracle(g.publications, g.patents, bad, 8), Error);
}

}  // namespace
}  // namespace hypecurve
