#include "psrisk/lopa.hpp"

namespace psrisk::lopa {

Probability typical_pfd(const IplKind& kind) {
    switch (kind.cls) {
        case IplClass::ControlLoop:
            return Probability(1.00e-02);
        case IplClass::TrainedHumanActionNoStress:
            return Probability(1.00e-02);
        case IplClass::OperatorResponseToAlarm:
            return Probability(1.00e-01);
        // The reference case assigns the control-loop figure to the SIS trip
        // and the trained-action figure to manual shutdown.
        case IplClass::Sis:
            return Probability(1.00e-02);
        case IplClass::ManualShutdown:
            return Probability(1.00e-02);
        case IplClass::Custom:
            break;
    }
    throw LookupError("no catalogued PFD for custom layer '" + kind.label + "'");
}

FrequencyResult consequence_frequency(const LopaScenario& scenario) {
    ProbInterval product = ProbInterval::point(1.0);
    for (const ProtectionLayer& layer : scenario.layers) {
        product = interval_product(product, layer.pfd);
    }
    const double ie = scenario.initiating_event.value;
    return FrequencyResult{scenario.initiating_event.unit, ie * product.lower(),
                           ie * product.upper()};
}

ProbInterval accident_probability(const std::vector<ProtectionLayer>& layers) {
    if (layers.empty()) {
        throw ValidationError("accident probability needs at least one protection layer");
    }
    ProbInterval product = ProbInterval::point(1.0);
    for (const ProtectionLayer& layer : layers) {
        product = interval_product(product, layer.pfd);
    }
    return product;
}

const std::vector<std::string>& consequence_state_names() {
    static const std::vector<std::string> names = {"safe", "near_miss", "mishap",
                                                   "incident", "accident"};
    return names;
}

std::vector<ProbInterval> first_success_masses(const LopaScenario& scenario) {
    if (scenario.initiating_event.unit != DemandUnit::PerDemand) {
        throw ValidationError("outcome ladder requires a per-demand initiating event");
    }
    const ProbInterval demand = ProbInterval::point(
        Probability(scenario.initiating_event.value).value());

    const std::size_t n = scenario.layers.size();
    std::vector<ProbInterval> masses;
    masses.reserve(n + 1);

    // Mass i: layers 1..i fail, layer i+1 succeeds.
    ProbInterval failed_so_far = demand;
    for (std::size_t i = 0; i < n; ++i) {
        masses.push_back(
            interval_product(failed_so_far, interval_complement(scenario.layers[i].pfd)));
        failed_so_far = interval_product(failed_so_far, scenario.layers[i].pfd);
    }
    masses.push_back(failed_so_far);
    return masses;
}

ConsequenceLadder consequence_ladder(const LopaScenario& scenario) {
    if (scenario.layers.size() != 4) {
        throw ValidationError("consequence ladder requires exactly 4 layers, got " +
                              std::to_string(scenario.layers.size()));
    }
    std::vector<ProbInterval> masses = first_success_masses(scenario);
    return ConsequenceLadder{masses[0], masses[1], masses[2], masses[3], masses[4]};
}

}  // namespace psrisk::lopa
