#include "hypecurve/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <system_error>

#include "hypecurve/error.hpp"

namespace hypecurve {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double value = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (s.empty() || ec != std::errc{} || ptr != end) {
        return std::nullopt;
    }
    return value;
}

std::optional<int> parse_year(std::string_view s) {
    s = trim(s);
    int value = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (s.empty() || ec != std::errc{} || ptr != end) {
        return std::nullopt;
    }
    return value;
}

std::string row_context(std::size_t row) { return "row " + std::to_string(row); }

std::string format_count(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    std::string s(buf);
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') {
        s.pop_back();
    }
    if (s == "-0") {
        s = "0";
    }
    return s;
}

// Sorted points with possible gaps -> consecutive points, gaps zero-filled.
std::vector<YearCount> fill_gaps(const std::vector<YearCount>& sorted,
                                 std::vector<std::string>& warnings) {
    std::vector<YearCount> out;
    out.reserve(sorted.size());
    for (const auto& pt : sorted) {
        if (!out.empty()) {
            for (int y = out.back().year + 1; y < pt.year; ++y) {
                out.push_back({y, 0.0});
                warnings.push_back("missing year " + std::to_string(y) + " filled with 0");
            }
        }
        out.push_back(pt);
    }
    return out;
}

}  // namespace

YearSeries::YearSeries(std::string label, std::vector<YearCount> points,
                       std::vector<std::string> warnings)
    : label_(std::move(label)), points_(std::move(points)), warnings_(std::move(warnings)) {
    if (points_.size() < min_points) {
        throw Error(Errc::too_few_points, "series '" + label_ + "' has " +
                                              std::to_string(points_.size()) +
                                              " points; at least 3 are required");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& pt = points_[i];
        if (!std::isfinite(pt.count)) {
            throw Error(Errc::malformed_row,
                        "non-finite count for year " + std::to_string(pt.year));
        }
        if (pt.count < 0.0) {
            throw Error(Errc::negative_count,
                        "negative count for year " + std::to_string(pt.year));
        }
        if (i > 0 && pt.year != points_[i - 1].year + 1) {
            if (pt.year == points_[i - 1].year) {
                throw Error(Errc::duplicate_year, "duplicate year " + std::to_string(pt.year));
            }
            throw Error(Errc::invalid_argument,
                        "years must be consecutive and ascending (got " +
                            std::to_string(points_[i - 1].year) + " then " +
                            std::to_string(pt.year) + ")");
        }
    }
}

double YearSeries::max_count() const noexcept {
    double best = 0.0;
    for (const auto& pt : points_) {
        best = std::max(best, pt.count);
    }
    return best;
}

int YearSeries::argmax_year() const noexcept {
    auto it = std::max_element(points_.begin(), points_.end(),
                               [](const YearCount& a, const YearCount& b) { return a.count < b.count; });
    return it->year;
}

std::optional<double> YearSeries::count_at(int year) const noexcept {
    if (year < first_year() || year > last_year()) {
        return std::nullopt;
    }
    return points_[static_cast<std::size_t>(year - first_year())].count;
}

std::vector<double> YearSeries::counts() const {
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& pt : points_) {
        out.push_back(pt.count);
    }
    return out;
}

YearSeries YearSeries::scaled(double factor) const {
    if (!(std::isfinite(factor) && factor > 0.0)) {
        throw Error(Errc::invalid_argument, "scale factor must be finite and > 0");
    }
    auto pts = points_;
    for (auto& pt : pts) {
        pt.count *= factor;
    }
    return YearSeries(label_, std::move(pts), warnings_);
}

YearSeries YearSeries::relabeled(std::string label) const {
    return YearSeries(std::move(label), points_, warnings_);
}

YearSeries parse_csv(std::string_view text, std::string label) {
    if (text.starts_with("\xEF\xBB\xBF")) {
        text.remove_prefix(3);
    }

    std::vector<YearCount> rows;
    std::map<int, std::size_t> seen;  // year -> row
    bool first_nonblank = true;
    std::size_t row = 0;

    while (!text.empty()) {
        const auto nl = text.find('\n');
        const auto line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++row;
        if (line.empty()) {
            continue;
        }

        const auto comma = line.find(',');
        const auto first = line.substr(0, comma);
        if (first_nonblank) {
            first_nonblank = false;
            if (!parse_double(first)) {
                continue;  // header
            }
        }
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
            throw Error(Errc::malformed_row, row_context(row) + ": expected 'year,count'");
        }
        const auto year = parse_year(first);
        const auto count = parse_double(line.substr(comma + 1));
        if (!year || !count || !std::isfinite(*count)) {
            throw Error(Errc::malformed_row, row_context(row) + ": non-numeric field");
        }
        if (*count < 0.0) {
            throw Error(Errc::negative_count, row_context(row) + ": negative count");
        }
        if (auto [it, inserted] = seen.emplace(*year, row); !inserted) {
            throw Error(Errc::duplicate_year, "duplicate year " + std::to_string(*year) + " (" +
                                                  row_context(it->second) + " and " +
                                                  row_context(row) + ")");
        }
        rows.push_back({*year, *count});
    }

    if (rows.empty()) {
        throw Error(Errc::empty_input, "no data rows");
    }
    std::sort(rows.begin(), rows.end(),
              [](const YearCount& a, const YearCount& b) { return a.year < b.year; });
    std::vector<std::string> warnings;
    auto filled = fill_gaps(rows, warnings);
    return YearSeries(std::move(label), std::move(filled), std::move(warnings));
}

std::string to_csv(const YearSeries& series) {
    std::string out = "year,count\n";
    for (const auto& pt : series.points()) {
        out += std::to_string(pt.year);
        out += ',';
        out += format_count(pt.count);
        out += '\n';
    }
    return out;
}

YearSeries average_sources(std::span<const YearSeries> sources) {
    if (sources.empty()) {
        throw Error(Errc::empty_source_list, "no sources to average");
    }
    const auto& label = sources.front().label();
    std::map<int, std::pair<double, int>> acc;  // year -> (sum, covering sources)
    for (const auto& src : sources) {
        if (src.label() != label) {
            throw Error(Errc::label_mismatch,
                        "cannot average '" + src.label() + "' with '" + label + "'");
        }
        for (const auto& pt : src.points()) {
            auto& [sum, n] = acc[pt.year];
            sum += pt.count;
            ++n;
        }
    }
    std::vector<YearCount> mean;
    mean.reserve(acc.size());
    for (const auto& [year, sn] : acc) {
        mean.push_back({year, sn.first / sn.second});
    }
    std::vector<std::string> warnings;
    auto filled = fill_gaps(mean, warnings);
    return YearSeries(label, std::move(filled), std::move(warnings));
}

NormalizedPair normalize_pair(const YearSeries& publications, const YearSeries& patents) {
    const double pub_max = publications.max_count();
    const double pat_max = patents.max_count();
    if (!(pub_max > 0.0)) {
        throw Error(Errc::zero_max, "series '" + publications.label() + "' is identically zero");
    }
    if (!(pat_max > 0.0)) {
        throw Error(Errc::zero_max, "series '" + patents.label() + "' is identically zero");
    }
    const double pub_scale = 1.0 / pub_max;
    const double pat_scale = 0.5 / pat_max;

    // Divide rather than multiply so the maximum lands exactly on 1 and 0.5.
    auto rescale = [](const YearSeries& s, double max, double target) {
        std::vector<YearCount> pts(s.points().begin(), s.points().end());
        for (auto& pt : pts) {
            pt.count = pt.count == max ? target : target * (pt.count / max);
        }
        return YearSeries(s.label(), std::move(pts), s.warnings());
    };
    return NormalizedPair{rescale(publications, pub_max, 1.0), rescale(patents, pat_max, 0.5),
                          pub_scale, pat_scale};
}

double total(const YearSeries& series) noexcept {
    double sum = 0.0;
    for (const auto& pt : series.points()) {
        sum += pt.count;
    }
    return sum;
}

}  // namespace hypecurve
