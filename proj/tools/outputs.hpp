#pragma once

// File formats written by the hypecurve CLI.
//
//   curve samples   header `t,N,P,H`, t at 0.1-year steps
//   forecast table  header `year,pub_rate,pat_rate,hype,pub_ratio`
//   report          JSON, schema id `hypecurve.report/1`
//   series          `year,count` (see hypecurve::to_csv)

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hypecurve/analysis.hpp"
#include "hypecurve/fit.hpp"

namespace hypecurve::cli {

inline constexpr std::string_view report_schema = "hypecurve.report/1";
inline constexpr std::string_view tool_version = "0.1.0";

using Json = nlohmann::ordered_json;

/// FNV-1a, 64 bit, rendered as 16 hex digits.
std::string fnv1a64_hex(std::string_view bytes);

struct InputFile {
    std::string path;
    std::string digest;
};

struct Manifest {
    std::string command;
    std::vector<InputFile> inputs;
    Json config = Json::object();
    std::string timestamp;  ///< --timestamp, else SOURCE_DATE_EPOCH, else "unset"

    Json to_json() const;
};

/// Samples t = from, from + step, ... <= to (+ half a step of slack).
std::string curve_csv(const HypeParams& hp, bool has_tech, double from, double to,
                      double step = 0.1);

std::string forecast_csv(const std::vector<ForecastRow>& rows);

Json params_json(const HypeParams& hp, bool has_tech);
Json fit_json(const FitResult& fit, FitMode mode, ForwardModel forward);
Json report_json(const HypeReport& rep, const ReportConfig& cfg);

/// Parameters and tech flag read back from a report document; throws
/// Error(invalid_argument) on schema mismatch or missing fields.
struct StoredParams {
    HypeParams params;
    bool has_tech = false;
    int forecast_from_year = 0;
};
StoredParams params_from_report(const Json& report);

std::string_view to_string(FitMode mode);
std::string_view to_string(ForwardModel forward);
std::string_view to_string(TriggerCurve curve);

}  // namespace hypecurve::cli
