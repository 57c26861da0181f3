#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psrisk/credal.hpp"
#include "psrisk/fault_tree.hpp"
#include "psrisk/lopa.hpp"
#include "psrisk/prob.hpp"

namespace psrisk::collab {

enum class PifContext { EnvironmentAndSituation, System, Personnel, Task };

std::string to_string(PifContext context);

// Performance-influencing factor. Catalog entries without published error
// data carry no interval.
struct PifRecord {
    PifContext context = PifContext::Task;
    std::string name;
    std::optional<ProbInterval> hep;
};

enum class AiGroup { Sensor, Actuator, Systematic, LogicSolver };

std::string to_string(AiGroup group);

struct AiFailureRecord {
    std::string failure_type;
    AiGroup group = AiGroup::Systematic;
    ProbInterval probability;
};

// The full 20-factor catalog across 4 contexts; the 15 factors with
// published error data carry their intervals.
std::vector<PifRecord> idheas_pif_catalog();

// The 15 human-error intervals, short names as published.
std::vector<PifRecord> hep_defaults();

// The 10 failure-cause intervals with their group assignment.
std::vector<AiFailureRecord> ai_failure_defaults();

// Maps a factor name (full catalog wording or error-table wording) to the
// canonical error-table name; empty for unknown names and for the factors
// without published error data.
std::string canonical_pif_name(const std::string& name);

// Network node names used by the reference model.
inline constexpr const char* kBpcsNode = "BpcsFailure";
inline constexpr const char* kOperatorNode = "OperatorInterventionError";
inline constexpr const char* kSisNode = "SisFailure";
inline constexpr const char* kManualNode = "ManualShutdownError";
inline constexpr const char* kConsequenceNode = "Consequence";

// Which human-action nodes a PIF context influences.
struct HumanArcs {
    bool operator_intervention = false;
    bool manual_shutdown = false;
};

struct CollabOptions {
    // Default wiring: environment conditions reach both human actions,
    // interface and task pressures reach the alarm response, personnel
    // factors reach both.
    std::map<PifContext, HumanArcs> pif_arcs = {
        {PifContext::EnvironmentAndSituation, {true, true}},
        {PifContext::System, {true, false}},
        {PifContext::Personnel, {true, true}},
        {PifContext::Task, {true, false}},
    };
    // A one-member cause group copies its member instead of re-weighting it.
    bool identity_for_singleton_groups = true;
};

// Reference credal network: 25 cause leaves feed per-group intermediate
// nodes, those feed the four protection-failure nodes, and a deterministic
// ladder maps the four failures onto the five-state consequence node.
credal::CredalNet build_collaboration_model(const std::vector<AiFailureRecord>& ai,
                                            const std::vector<PifRecord>& pifs,
                                            const CollabOptions& options = {});

// Case-study tree: two OR branches (control loop, shutdown chain) under an
// AND top gate, with the published per-component one-year probabilities.
fta::FaultTree case_study_fault_tree();

// Case-study protection chain with the catalogued default PFDs: control
// loop, operator response to the alarm, trip system, manual shutdown.
lopa::LopaScenario reference_lopa_scenario();

}  // namespace psrisk::collab
