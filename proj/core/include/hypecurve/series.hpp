#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hypecurve {

struct YearCount {
    int year = 0;
    double count = 0.0;

    bool operator==(const YearCount&) const = default;
};

/// Yearly counts for one indicator. Years are consecutive and ascending,
/// counts finite and non-negative, and there are at least three points.
/// Immutable once constructed.
class YearSeries {
public:
    static constexpr std::size_t min_points = 3;

    /// Validates; throws Error on any invariant violation.
    YearSeries(std::string label, std::vector<YearCount> points,
               std::vector<std::string> warnings = {});

    const std::string& label() const noexcept { return label_; }
    std::span<const YearCount> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    int first_year() const noexcept { return points_.front().year; }
    int last_year() const noexcept { return points_.back().year; }
    double max_count() const noexcept;
    /// Year of the largest count; earliest on ties.
    int argmax_year() const noexcept;
    std::optional<double> count_at(int year) const noexcept;
    std::vector<double> counts() const;

    /// Non-fatal notes collected during ingestion (filled gaps, ...).
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    /// Same points with every count multiplied by `factor` (> 0).
    YearSeries scaled(double factor) const;
    YearSeries relabeled(std::string label) const;

    /// Equality on label and points; warnings are ingestion metadata.
    bool operator==(const YearSeries& other) const noexcept {
        return label_ == other.label_ && points_ == other.points_;
    }

private:
    std::string label_;
    std::vector<YearCount> points_;
    std::vector<std::string> warnings_;
};

/// Parses `year,count` rows. A first row whose first field is non-numeric is
/// taken as a header. Blank lines are skipped; LF and CRLF are accepted.
/// Rows are sorted by year and interior gaps are filled with zero counts
/// (each fill is recorded as a warning).
YearSeries parse_csv(std::string_view text, std::string label = "counts");

/// `year,count` header, ascending years, counts with at most six decimals.
std::string to_csv(const YearSeries& series);

/// Per-year arithmetic mean over the sources that cover each year. Years in
/// the union range covered by no source become 0 with a warning.
YearSeries average_sources(std::span<const YearSeries> sources);

struct NormalizedPair {
    YearSeries publications;  ///< max count == 1.0
    YearSeries patents;       ///< max count == 0.5
    double pub_scale = 1.0;   ///< normalized = raw * pub_scale
    double pat_scale = 1.0;
};

/// Publications scaled to a maximum of 1, patents to a maximum of 0.5.
NormalizedPair normalize_pair(const YearSeries& publications, const YearSeries& patents);

double total(const YearSeries& series) noexcept;

}  // namespace hypecurve
