#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hypecurve {

enum class Errc {
    invalid_argument,
    empty_input,
    malformed_row,
    negative_count,
    duplicate_year,
    too_few_points,
    empty_source_list,
    label_mismatch,
    zero_max,
    degenerate_fit,
    invalid_epsilon,
    unconverged_fit,
    degenerate_range,
};

std::string_view to_string(Errc code) noexcept;

/// Library-wide exception. `code()` identifies the failure; `what()` carries
/// the human-readable context (row numbers, offending years, ...).
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace hypecurve
