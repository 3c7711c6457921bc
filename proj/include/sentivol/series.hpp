#pragma once

#include "sentivol/calendar.hpp"

#include <string>
#include <vector>

namespace sentivol {

/// A dated scalar series. Dates strictly increasing, one finite value per date.
struct Series {
    std::string label;
    std::vector<Date> dates;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }

    /// Throws InvariantViolation when lengths differ, dates are not strictly
    /// increasing, or a value is not finite.
    void validate() const;
};

using SentimentSeries = Series;

} // namespace sentivol
