#include "hypecurve/model.hpp"

#include <cmath>
#include <string>

#include "hypecurve/error.hpp"
#include "hypecurve/quadrature.hpp"

namespace hypecurve {

namespace {

[[noreturn]] void invalid(const std::string& what) {
    throw Error(Errc::invalid_argument, what);
}

}  // namespace

bool is_valid(const ScienceParams& sp) noexcept {
    return std::isfinite(sp.k) && sp.k > 0.0 && std::isfinite(sp.r) && sp.r > 0.0 &&
           std::isfinite(sp.t0);
}

bool is_valid(const TechParams& tp) noexcept {
    return std::isfinite(tp.p) && tp.p > 0.0 && std::isfinite(tp.tstar);
}

bool is_valid(const HypeParams& hp) noexcept {
    return is_valid(hp.science) && is_valid(hp.tech);
}

void validate(const ScienceParams& sp) {
    if (!(std::isfinite(sp.k) && sp.k > 0.0)) invalid("k must be finite and > 0");
    if (!(std::isfinite(sp.r) && sp.r > 0.0)) invalid("r must be finite and > 0");
    if (!std::isfinite(sp.t0)) invalid("t0 must be finite");
}

void validate(const HypeParams& hp) {
    validate(hp.science);
    if (!(std::isfinite(hp.tech.p) && hp.tech.p > 0.0)) invalid("p must be finite and > 0");
    if (!std::isfinite(hp.tech.tstar)) invalid("tstar must be finite");
}

double logistic(double x) noexcept {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double softplus(double x) noexcept {
    if (x > 0.0) {
        return x + std::log1p(std::exp(-x));
    }
    return std::log1p(std::exp(x));
}

double cumulative(double t, const ScienceParams& sp) noexcept {
    return sp.k * logistic(sp.r * (t - sp.t0));
}

double pub_rate(double t, const ScienceParams& sp) noexcept {
    // N is even in (t - t0); evaluate with a non-positive exponent.
    const double e = std::exp(-std::abs(sp.r * (t - sp.t0)));
    const double d = 1.0 + e;
    return sp.k * sp.r * e / (d * d);
}

double patent_rate(double t, const HypeParams& hp) noexcept {
    return hp.tech.p * cumulative(t - hp.tech.tstar, hp.science);
}

double hype(double t, const HypeParams& hp) noexcept {
    return pub_rate(t, hp.science) + patent_rate(t, hp);
}

double pub_bin(double year_start, const ScienceParams& sp) noexcept {
    const double xa = sp.r * (year_start - sp.t0);
    const double xb = sp.r * (year_start + 1.0 - sp.t0);
    // On the saturated side subtract the complements, which are small.
    if (xa >= 0.0) {
        return sp.k * (logistic(-xa) - logistic(-xb));
    }
    return sp.k * (logistic(xb) - logistic(xa));
}

double patent_bin(double year_start, const HypeParams& hp) {
    const auto rate = [&hp](double t) { return patent_rate(t, hp); };
    return adaptive_simpson(rate, year_start, year_start + 1.0);
}

double bin_expected(double year_start, const HypeParams& hp, Curve curve) {
    return curve == Curve::publications ? pub_bin(year_start, hp.science)
                                        : patent_bin(year_start, hp);
}

double expected_count(double year, const HypeParams& hp, Curve curve, ForwardModel forward) {
    if (forward == ForwardModel::bin_integral) {
        return bin_expected(year, hp, curve);
    }
    const double mid = year + 0.5;
    return curve == Curve::publications ? pub_rate(mid, hp.science) : patent_rate(mid, hp);
}

}  // namespace hypecurve
