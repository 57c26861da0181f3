#include "psrisk/prob.hpp"

#include <cmath>
#include <sstream>

namespace psrisk {

namespace {

std::string bad_value(const char* what, double v) {
    std::ostringstream os;
    os << what << ": " << v;
    return os.str();
}

}  // namespace

Probability::Probability(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw ValidationError(bad_value("probability outside [0, 1]", value));
    }
}

ProbInterval::ProbInterval(double lower, double upper)
    : lower_(Probability(lower).value()), upper_(Probability(upper).value()) {
    if (!(lower <= upper)) {
        std::ostringstream os;
        os << "inverted probability interval [" << lower << ", " << upper << "]";
        throw ValidationError(os.str());
    }
}

FrequencyPerYear::FrequencyPerYear(double value) : value_(value) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw ValidationError(bad_value("frequency must be finite and >= 0", value));
    }
}

bool FailureRecord::has_data() const {
    return probability.has_value() ||
           (rate_per_hour.has_value() && mission_time_hours.has_value());
}

double FailureRecord::point_probability() const {
    if (probability) {
        if (!probability->is_point()) {
            throw EvaluationError("event '" + component_id +
                                  "' carries an interval probability; point evaluation "
                                  "requires a degenerate interval");
        }
        return probability->lower();
    }
    if (rate_per_hour) {
        if (!mission_time_hours) {
            throw EvaluationError("event '" + component_id +
                                  "' has a failure rate but no mission time");
        }
        return rate_to_probability(*rate_per_hour, *mission_time_hours).value();
    }
    throw EvaluationError("event '" + component_id + "' has no failure data");
}

ProbInterval interval_product(const ProbInterval& a, const ProbInterval& b) {
    return ProbInterval(a.lower() * b.lower(), a.upper() * b.upper());
}

ProbInterval interval_complement(const ProbInterval& a) {
    return ProbInterval(1.0 - a.upper(), 1.0 - a.lower());
}

Probability rate_to_probability(double rate_per_hour, double mission_time_hours) {
    if (!(rate_per_hour >= 0.0) || !std::isfinite(rate_per_hour)) {
        throw ValidationError("failure rate must be finite and >= 0");
    }
    if (!(mission_time_hours > 0.0) || !std::isfinite(mission_time_hours)) {
        throw ValidationError("mission time must be finite and > 0");
    }
    return Probability(-std::expm1(-rate_per_hour * mission_time_hours));
}

}  // namespace psrisk
