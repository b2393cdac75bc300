#include "outputs.hpp"

#include <cmath>
#include <cstdio>

#include "hypecurve/error.hpp"

namespace hypecurve::cli {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Json dip_json(const std::optional<Dip>& dip) {
    if (!dip) return nullptr;
    return {{"peak_year", dip->peak_year}, {"dip_year", dip->year}, {"depth", dip->depth}};
}

}  // namespace

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json Manifest::to_json() const {
    Json in = Json::array();
    for (const auto& f : inputs) {
        in.push_back({{"path", f.path}, {"fnv1a64", f.digest}});
    }
    return {{"tool", "hypecurve"}, {"version", tool_version}, {"command", command},
            {"inputs", in},        {"config", config},        {"timestamp", timestamp}};
}

std::string curve_csv(const HypeParams& hp, bool has_tech, double from, double to, double step) {
    std::string out = "t,N,P,H\n";
    const auto n = static_cast<long>(std::floor((to - from) / step + 0.5));
    for (long i = 0; i <= n; ++i) {
        // Index-based so t carries no accumulated rounding.
        const double t = from + static_cast<double>(i) * step;
        const double nv = pub_rate(t, hp.science);
        const double pv = has_tech ? patent_rate(t, hp) : 0.0;
        char tbuf[32];
        std::snprintf(tbuf, sizeof tbuf, "%.4f", t);
        std::string ts(tbuf);
        ts.erase(ts.find_last_not_of('0') + 1);
        if (ts.back() == '.') ts += '0';
        out += ts + ',' + num(nv) + ',' + num(pv) + ',' + num(nv + pv) + '\n';
    }
    return out;
}

std::string forecast_csv(const std::vector<ForecastRow>& rows) {
    std::string out = "year,pub_rate,pat_rate,hype,pub_ratio\n";
    for (const auto& r : rows) {
        out += std::to_string(r.year) + ',' + num(r.pub_rate) + ',' + num(r.pat_rate) + ',' +
               num(r.hype) + ',' + num(r.pub_ratio) + '\n';
    }
    return out;
}

std::string_view to_string(FitMode mode) {
    return mode == FitMode::joint ? "joint" : "independent";
}

std::string_view to_string(ForwardModel forward) {
    return forward == ForwardModel::bin_integral ? "bin" : "midpoint";
}

std::string_view to_string(TriggerCurve curve) {
    switch (curve) {
        case TriggerCurve::pub_rate: return "rate";
        case TriggerCurve::cumulative: return "cumulative";
        case TriggerCurve::patents: return "patents";
    }
    return "?";
}

Json params_json(const HypeParams& hp, bool has_tech) {
    Json j = {{"k", hp.science.k}, {"r", hp.science.r}, {"t0", hp.science.t0}};
    if (has_tech) {
        j["p"] = hp.tech.p;
        j["tstar"] = hp.tech.tstar;
    }
    return j;
}

Json fit_json(const FitResult& fit, FitMode mode, ForwardModel forward) {
    Json residuals = Json::array();
    for (const auto& r : fit.residuals) {
        residuals.push_back({{"series", r.curve == Curve::publications ? "publications" : "patents"},
                             {"year", r.year},
                             {"value", r.value}});
    }
    return {{"mode", fit.has_tech ? to_string(mode) : "publications-only"},
            {"forward_model", to_string(forward)},
            {"loss", "least_squares"},
            {"params", params_json(fit.params, fit.has_tech)},
            {"has_tech", fit.has_tech},
            {"sse", fit.sse},
            {"rmse", fit.rmse},
            {"r_squared", fit.r_squared},
            {"n_points", fit.n_points},
            {"converged", fit.converged},
            {"best_start_index", fit.best_start_index},
            {"iterations", fit.iterations},
            {"warnings", fit.warnings},
            {"residuals", residuals}};
}

Json report_json(const HypeReport& rep, const ReportConfig& cfg) {
    Json rows = Json::array();
    for (const auto& r : rep.forecast) {
        rows.push_back({{"year", r.year},
                        {"pub_rate", r.pub_rate},
                        {"pat_rate", r.pat_rate},
                        {"hype", r.hype},
                        {"pub_ratio", r.pub_ratio}});
    }
    Json j = {{"epsilon", cfg.epsilon},
              {"pub_trigger_basis", to_string(cfg.pub_trigger_basis)},
              {"pub_peak_year", rep.pub_peak_year},
              {"pub_peak_rate", rep.pub_peak_rate},
              {"pub_trigger_year", rep.pub_trigger_year},
              {"pub_rate_trigger_year", rep.pub_rate_trigger_year}};
    if (rep.has_tech) {
        j["pat_trigger_year"] = rep.pat_trigger_year;
        j["delay_years"] = rep.delay_years;
        j["patent_plateau"] = rep.patent_plateau;
        j["dip"] = dip_json(rep.dip);
    }
    j["pub_half_year"] = rep.pub_half_year ? Json(*rep.pub_half_year) : Json(nullptr);
    j["forecast_from_year"] = rep.forecast_from_year;
    j["forecast"] = rows;
    return j;
}

StoredParams params_from_report(const Json& report) {
    try {
        if (report.at("schema").get<std::string>() != report_schema) {
            throw Error(Errc::invalid_argument,
                        "unsupported report schema '" + report.at("schema").get<std::string>() + "'");
        }
        const auto& p = report.at("fit").at("params");
        StoredParams out;
        out.has_tech = report.at("fit").at("has_tech").get<bool>();
        out.params.science = {p.at("k").get<double>(), p.at("r").get<double>(),
                              p.at("t0").get<double>()};
        if (out.has_tech) {
            out.params.tech = {p.at("p").get<double>(), p.at("tstar").get<double>()};
        }
        out.forecast_from_year = report.at("report").at("forecast_from_year").get<int>();
        return out;
    } catch (const Json::exception& e) {
        throw Error(Errc::invalid_argument, std::string("malformed report: ") + e.what());
    }
}

}  // namespace hypecurve::cli
