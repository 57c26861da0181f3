#pragma once

#include <optional>
#include <string>

#include "psrisk/errors.hpp"

namespace psrisk {

// Validated probability in [0, 1]; stored at 64-bit precision. Out-of-range
// or non-finite values are rejected at construction.
class Probability {
  public:
    Probability() = default;
    explicit Probability(double value);

    double value() const { return value_; }

  private:
    double value_ = 0.0;
};

// Interval probability [lower, upper]: a lower/upper probability limit
// (LPL/UPL) pair. A degenerate interval (lower == upper) is valid and
// models a point value.
class ProbInterval {
  public:
    ProbInterval() = default;
    ProbInterval(double lower, double upper);

    static ProbInterval point(double p) { return ProbInterval(p, p); }

    double lower() const { return lower_; }
    double upper() const { return upper_; }
    bool is_point() const { return lower_ == upper_; }

    friend bool operator==(const ProbInterval& a, const ProbInterval& b) {
        return a.lower_ == b.lower_ && a.upper_ == b.upper_;
    }

  private:
    double lower_ = 0.0;
    double upper_ = 0.0;
};

// Events per year. May exceed 1: a rate, not a probability.
class FrequencyPerYear {
  public:
    FrequencyPerYear() = default;
    explicit FrequencyPerYear(double value);

    double value() const { return value_; }

  private:
    double value_ = 0.0;
};

// One catalogued component failure entry. Either an explicit probability
// (possibly interval-valued) or a rate/mission-time pair must be present;
// when both are given the probability column wins.
struct FailureRecord {
    std::string component_id;
    std::string description;
    std::optional<double> rate_per_hour;
    std::optional<double> mission_time_hours;
    std::optional<ProbInterval> probability;
    std::string source;

    bool has_data() const;
    // Resolves to a point probability for evaluation. Throws EvaluationError
    // when the record is interval-valued or lacks a usable rate/time pair.
    double point_probability() const;
};

ProbInterval interval_product(const ProbInterval& a, const ProbInterval& b);
ProbInterval interval_complement(const ProbInterval& a);

// 1 - exp(-rate * time). Approaches rate*time in the rare-event regime.
Probability rate_to_probability(double rate_per_hour, double mission_time_hours);

}  // namespace psrisk
