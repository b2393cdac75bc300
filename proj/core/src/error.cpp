#include "hypecurve/error.hpp"

namespace hypecurve {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::invalid_argument: return "InvalidArgument";
        case Errc::empty_input: return "EmptyInput";
        case Errc::malformed_row: return "MalformedRow";
        case Errc::negative_count: return "NegativeCount";
        case Errc::duplicate_year: return "DuplicateYear";
        case Errc::too_few_points: return "TooFewPoints";
        case Errc::empty_source_list: return "EmptySourceList";
        case Errc::label_mismatch: return "LabelMismatch";
        case Errc::zero_max: return "ZeroMax";
        case Errc::degenerate_fit: return "DegenerateFit";
        case Errc::invalid_epsilon: return "InvalidEpsilon";
        case Errc::unconverged_fit: return "UnconvergedFit";
        case Errc::degenerate_range: return "DegenerateRange";
    }
    return "Unknown";
}

}  // namespace hypecurve
