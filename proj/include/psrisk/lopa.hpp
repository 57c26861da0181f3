#pragma once

#include <string>
#include <vector>

#include "psrisk/prob.hpp"

namespace psrisk::lopa {

enum class IplClass {
    ControlLoop,
    OperatorResponseToAlarm,
    TrainedHumanActionNoStress,
    Sis,
    ManualShutdown,
    Custom,
};

struct IplKind {
    IplClass cls = IplClass::Custom;
    std::string label;  // used by Custom only

    static IplKind of(IplClass cls) { return IplKind{cls, {}}; }
    static IplKind custom(std::string label) { return IplKind{IplClass::Custom, std::move(label)}; }
};

// Catalogued default PFD per layer class. Custom kinds have no default and
// raise LookupError; supply the PFD explicitly instead.
Probability typical_pfd(const IplKind& kind);

struct ProtectionLayer {
    std::string name;
    IplKind kind;
    ProbInterval pfd;
};

enum class DemandUnit { PerDemand, PerYear };

// Per-demand probability or per-year frequency of the initiating deviation.
struct InitiatingEvent {
    DemandUnit unit = DemandUnit::PerDemand;
    double value = 1.0;
};

// Demand flows through the layers in list order: layer 1 first.
struct LopaScenario {
    InitiatingEvent initiating_event;
    std::vector<ProtectionLayer> layers;
};

// Interval-valued result in the unit of the initiating event. Per-year
// results are rates and may exceed 1.
struct FrequencyResult {
    DemandUnit unit = DemandUnit::PerDemand;
    double lower = 0.0;
    double upper = 0.0;
};

// Initiating event times the product of every layer PFD (empty product for
// zero layers).
FrequencyResult consequence_frequency(const LopaScenario& scenario);

// Product of the layer PFDs alone; rejects an empty layer list.
ProbInterval accident_probability(const std::vector<ProtectionLayer>& layers);

// Outcome masses of the four-layer ladder: BPCS, operator response to the
// alarm, SIS, manual shutdown. Point inputs partition the demand exactly.
struct ConsequenceLadder {
    ProbInterval safe;
    ProbInterval near_miss;
    ProbInterval mishap;
    ProbInterval incident;
    ProbInterval accident;
};

// Names of the five outcomes, ladder order.
const std::vector<std::string>& consequence_state_names();

// Requires a per-demand initiating event and exactly 4 layers in the order
// BPCS, operator intervention, SIS, manual shutdown.
ConsequenceLadder consequence_ladder(const LopaScenario& scenario);

// First-success decomposition for any layer count n: element 0 is the safe
// outcome, element i < n is failure of layers 1..i with success at layer
// i+1, element n is failure of every layer. Requires a per-demand event.
std::vector<ProbInterval> first_success_masses(const LopaScenario& scenario);

}  // namespace psrisk::lopa
