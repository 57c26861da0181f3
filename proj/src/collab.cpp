#include "psrisk/collab.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "psrisk/bayes_net.hpp"

namespace psrisk::collab {

namespace {

ProbInterval iv(double lower, double upper) { return ProbInterval(lower, upper); }

struct PifRow {
    PifContext context;
    const char* catalog_name;  // full catalog wording
    const char* short_name;    // published error-table wording, empty if none
    const char* node_id;
    double lower;
    double upper;
};

// Tables: the 20-factor catalog with the 15 published intervals attached.
constexpr PifRow kPifTable[] = {
    {PifContext::EnvironmentAndSituation, "Workplace Location Accessibility and Habitability",
     "", "", 0, 0},
    {PifContext::EnvironmentAndSituation, "Workplace Visibility", "", "", 0, 0},
    {PifContext::EnvironmentAndSituation, "Noise in Workplace and Communication Pathways",
     "Noise", "Noise", 2.10e-02, 2.80e-02},
    {PifContext::EnvironmentAndSituation, "Cold/Heat/Humidity", "Heat", "Heat", 1.00e-01,
     2.00e-01},
    {PifContext::EnvironmentAndSituation, "Resistance to Physical Movement", "", "", 0, 0},
    {PifContext::System,
     "System and Instrumentation and Control (I&C) Transparency to Personnel",
     "System Transparency", "SystemTransparency", 3.00e-02, 1.50e-01},
    {PifContext::System, "Human-System Interface (HSI)", "Human-System Interface",
     "HumanSystemInterface", 4.00e-03, 1.40e-02},
    {PifContext::System, "Equipment and Tools", "Equipment and Tools", "EquipmentAndTools",
     5.20e-02, 7.20e-02},
    {PifContext::Personnel, "Staffing", "Staffing", "Staffing", 4.80e-02, 9.80e-02},
    {PifContext::Personnel, "Procedures, Guidelines, and Instructions", "Procedures",
     "Procedures", 3.30e-02, 6.90e-02},
    {PifContext::Personnel, "Training", "Training", "Training", 3.60e-02, 4.50e-02},
    {PifContext::Personnel, "Team and Organization Factors", "Team and Organization",
     "TeamAndOrganization", 1.00e-01, 1.60e-01},
    {PifContext::Personnel, "Work Processes", "Work Processes", "WorkProcesses", 7.00e-02,
     1.10e-01},
    {PifContext::Task, "Information Availability and Reliability", "Information Availability",
     "InformationAvailability", 3.00e-02, 2.80e-01},
    {PifContext::Task, "Scenario Familiarity", "Scenario Familiarity", "ScenarioFamiliarity",
     1.40e-02, 1.70e-01},
    {PifContext::Task, "Multi-Tasking, Interruptions, and Distractions", "", "", 0, 0},
    {PifContext::Task, "Task Complexity", "Task Complexity", "TaskComplexity", 2.10e-03,
     1.56e-02},
    {PifContext::Task, "Mental Fatigue", "Mental Fatigue", "MentalFatigue", 2.00e-01,
     3.00e-01},
    {PifContext::Task, "Time Pressure and Stress", "Time Pressure and Stress",
     "TimePressureAndStress", 5.62e-02, 3.50e-01},
    {PifContext::Task, "Physical Demands", "", "", 0, 0},
};

struct AiRow {
    const char* failure_type;
    AiGroup group;
    const char* node_id;
    double lower;
    double upper;
};

constexpr AiRow kAiTable[] = {
    {"Sensor failure", AiGroup::Sensor, "SensorFailure", 1.05e-01, 2.15e-01},
    {"Actuator", AiGroup::Actuator, "ActuatorFailure", 1.05e-01, 2.15e-01},
    {"System integration failure", AiGroup::Systematic, "SystemIntegrationFailure", 1.00e-02,
     2.00e-02},
    {"Network communication failure", AiGroup::Systematic, "NetworkCommunicationFailure",
     2.69e-02, 5.63e-02},
    {"Power supply failure", AiGroup::Systematic, "PowerSupplyFailure", 7.54e-02, 7.54e-02},
    {"I/O connection failure", AiGroup::Systematic, "IoConnectionFailure", 2.69e-02,
     5.63e-02},
    {"Model uncertainty", AiGroup::LogicSolver, "ModelUncertainty", 2.69e-02, 5.63e-02},
    {"Control logic unit (CLU) failure", AiGroup::LogicSolver, "CluFailure", 4.73e-02,
     4.73e-02},
    {"Storage insufficient", AiGroup::LogicSolver, "StorageInsufficient", 2.69e-02, 5.63e-02},
    {"Random disturbance beyond control", AiGroup::LogicSolver, "RandomDisturbance", 3.40e-06,
     3.40e-06},
};

ProbInterval noisy_or(const std::vector<ProbInterval>& members) {
    double lower = 1.0;
    double upper = 1.0;
    for (const ProbInterval& m : members) {
        lower *= 1.0 - m.lower();
        upper *= 1.0 - m.upper();
    }
    return ProbInterval(1.0 - lower, 1.0 - upper);
}

credal::CredalRow binary_row(const ProbInterval& p_true) {
    return credal::CredalRow{{p_true, interval_complement(p_true)}};
}

// Interval CPT from the published combination rule evaluated at both
// endpoint vectors; the rule is monotone in every parent probability.
std::vector<credal::CredalRow> rule_rows(const std::vector<ProbInterval>& weights) {
    std::vector<double> lowers;
    std::vector<double> uppers;
    for (const ProbInterval& w : weights) {
        lowers.push_back(w.lower());
        uppers.push_back(w.upper());
    }
    const bn::Cpt lo = bn::single_cause_cpt_rule(lowers).cpt;
    const bn::Cpt hi = bn::single_cause_cpt_rule(uppers).cpt;

    std::vector<credal::CredalRow> rows;
    rows.reserve(lo.rows.size());
    for (std::size_t r = 0; r < lo.rows.size(); ++r) {
        rows.push_back(binary_row(ProbInterval(lo.rows[r][0], hi.rows[r][0])));
    }
    return rows;
}

credal::CrNode leaf_node(const std::string& id, const ProbInterval& prior) {
    credal::CrNode node;
    node.id = id;
    node.rows = {binary_row(prior)};
    return node;
}

credal::CrNode group_node(const std::string& id, const std::vector<std::string>& member_ids,
                          const std::vector<ProbInterval>& member_probs,
                          bool identity_singletons) {
    credal::CrNode node;
    node.id = id;
    node.parents = member_ids;
    if (member_ids.size() == 1 && identity_singletons) {
        node.rows = {binary_row(ProbInterval::point(1.0)),
                     binary_row(ProbInterval::point(0.0))};
    } else {
        node.rows = rule_rows(member_probs);
    }
    return node;
}

}  // namespace

std::string to_string(PifContext context) {
    switch (context) {
        case PifContext::EnvironmentAndSituation: return "Environment and situation";
        case PifContext::System: return "System";
        case PifContext::Personnel: return "Personnel";
        case PifContext::Task: return "Task";
    }
    return "?";
}

std::string to_string(AiGroup group) {
    switch (group) {
        case AiGroup::Sensor: return "Sensor";
        case AiGroup::Actuator: return "Actuator";
        case AiGroup::Systematic: return "Systematic";
        case AiGroup::LogicSolver: return "LogicSolver";
    }
    return "?";
}

std::vector<PifRecord> idheas_pif_catalog() {
    std::vector<PifRecord> records;
    for (const PifRow& row : kPifTable) {
        PifRecord record;
        record.context = row.context;
        record.name = row.catalog_name;
        if (row.short_name[0] != '\0') {
            record.hep = iv(row.lower, row.upper);
        }
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<PifRecord> hep_defaults() {
    std::vector<PifRecord> records;
    for (const PifRow& row : kPifTable) {
        if (row.short_name[0] == '\0') continue;
        records.push_back(PifRecord{row.context, row.short_name, iv(row.lower, row.upper)});
    }
    return records;
}

std::vector<AiFailureRecord> ai_failure_defaults() {
    std::vector<AiFailureRecord> records;
    for (const AiRow& row : kAiTable) {
        records.push_back(AiFailureRecord{row.failure_type, row.group, iv(row.lower, row.upper)});
    }
    return records;
}

std::string canonical_pif_name(const std::string& name) {
    for (const PifRow& row : kPifTable) {
        if (row.short_name[0] == '\0') continue;
        if (name == row.short_name || name == row.catalog_name) {
            return row.short_name;
        }
    }
    return {};
}

credal::CredalNet build_collaboration_model(const std::vector<AiFailureRecord>& ai,
                                            const std::vector<PifRecord>& pifs,
                                            const CollabOptions& options) {
    // Resolve the canonical member lists against the supplied records.
    std::map<std::string, ProbInterval> ai_by_type;
    for (const AiFailureRecord& record : ai) {
        ai_by_type.emplace(record.failure_type, record.probability);
    }
    std::map<std::string, const PifRecord*> pif_by_name;
    for (const PifRecord& record : pifs) {
        const std::string canonical = canonical_pif_name(record.name);
        pif_by_name.emplace(canonical.empty() ? record.name : canonical, &record);
    }

    std::vector<std::string> missing;
    for (const AiRow& row : kAiTable) {
        if (!ai_by_type.count(row.failure_type)) missing.push_back(row.failure_type);
    }
    for (const PifRow& row : kPifTable) {
        if (row.short_name[0] == '\0') continue;
        auto it = pif_by_name.find(row.short_name);
        if (it == pif_by_name.end() || !it->second->hep) missing.push_back(row.short_name);
    }
    if (!missing.empty()) {
        std::ostringstream os;
        os << "collaboration model is missing records:";
        for (const std::string& name : missing) os << " '" << name << "'";
        throw ValidationError(os.str());
    }

    std::vector<credal::CrNode> nodes;

    // Cause leaves.
    std::map<AiGroup, std::vector<std::string>> ai_group_members;
    std::map<AiGroup, std::vector<ProbInterval>> ai_group_probs;
    for (const AiRow& row : kAiTable) {
        const ProbInterval prior = ai_by_type.at(row.failure_type);
        nodes.push_back(leaf_node(row.node_id, prior));
        ai_group_members[row.group].push_back(row.node_id);
        ai_group_probs[row.group].push_back(prior);
    }
    std::map<PifContext, std::vector<std::string>> pif_group_members;
    std::map<PifContext, std::vector<ProbInterval>> pif_group_probs;
    for (const PifRow& row : kPifTable) {
        if (row.short_name[0] == '\0') continue;
        const ProbInterval prior = *pif_by_name.at(row.short_name)->hep;
        nodes.push_back(leaf_node(row.node_id, prior));
        pif_group_members[row.context].push_back(row.node_id);
        pif_group_probs[row.context].push_back(prior);
    }

    // Intermediate cause groups. Each carries a representative severity:
    // its members' combined noisy-OR interval, used as its weight in the
    // downstream failure-node rows.
    const std::vector<std::pair<AiGroup, std::string>> ai_groups = {
        {AiGroup::Sensor, "SensorGroup"},
        {AiGroup::Actuator, "ActuatorGroup"},
        {AiGroup::Systematic, "SystematicGroup"},
        {AiGroup::LogicSolver, "LogicSolverGroup"},
    };
    std::vector<std::string> ai_group_ids;
    std::vector<ProbInterval> ai_group_weights;
    for (const auto& [group, id] : ai_groups) {
        nodes.push_back(group_node(id, ai_group_members.at(group), ai_group_probs.at(group),
                                   options.identity_for_singleton_groups));
        ai_group_ids.push_back(id);
        ai_group_weights.push_back(noisy_or(ai_group_probs.at(group)));
    }

    const std::vector<std::pair<PifContext, std::string>> pif_groups = {
        {PifContext::EnvironmentAndSituation, "EnvironmentPifs"},
        {PifContext::System, "SystemPifs"},
        {PifContext::Personnel, "PersonnelPifs"},
        {PifContext::Task, "TaskPifs"},
    };
    std::map<PifContext, std::string> pif_group_ids;
    std::map<PifContext, ProbInterval> pif_group_weights;
    for (const auto& [context, id] : pif_groups) {
        nodes.push_back(group_node(id, pif_group_members.at(context),
                                   pif_group_probs.at(context),
                                   options.identity_for_singleton_groups));
        pif_group_ids[context] = id;
        pif_group_weights.emplace(context, noisy_or(pif_group_probs.at(context)));
    }

    // Protection-failure nodes. Both instrumented layers see all four cause
    // groups; the human actions see the contexts wired to them.
    const auto failure_node = [](const std::string& id, std::vector<std::string> parents,
                                 const std::vector<ProbInterval>& weights) {
        credal::CrNode node;
        node.id = id;
        node.parents = std::move(parents);
        node.rows = rule_rows(weights);
        return node;
    };
    nodes.push_back(failure_node(kBpcsNode, ai_group_ids, ai_group_weights));
    nodes.push_back(failure_node(kSisNode, ai_group_ids, ai_group_weights));

    std::vector<std::string> operator_parents;
    std::vector<ProbInterval> operator_weights;
    std::vector<std::string> manual_parents;
    std::vector<ProbInterval> manual_weights;
    for (const auto& [context, id] : pif_groups) {
        const auto arcs = options.pif_arcs.find(context);
        if (arcs == options.pif_arcs.end()) continue;
        if (arcs->second.operator_intervention) {
            operator_parents.push_back(id);
            operator_weights.push_back(pif_group_weights.at(context));
        }
        if (arcs->second.manual_shutdown) {
            manual_parents.push_back(id);
            manual_weights.push_back(pif_group_weights.at(context));
        }
    }
    if (operator_parents.empty() || manual_parents.empty()) {
        throw ValidationError("every human-action node needs at least one PIF context");
    }
    nodes.push_back(failure_node(kOperatorNode, operator_parents, operator_weights));
    nodes.push_back(failure_node(kManualNode, manual_parents, manual_weights));

    // Consequence ladder: deterministic outcome of the four failures in
    // demand order.
    credal::CrNode consequence;
    consequence.id = kConsequenceNode;
    consequence.states = lopa::consequence_state_names();
    consequence.parents = {kBpcsNode, kOperatorNode, kSisNode, kManualNode};
    for (int row = 0; row < 16; ++row) {
        const bool bpcs_failed = ((row >> 3) & 1) == 0;
        const bool operator_failed = ((row >> 2) & 1) == 0;
        const bool sis_failed = ((row >> 1) & 1) == 0;
        const bool manual_failed = (row & 1) == 0;
        int outcome = 0;  // safe
        if (bpcs_failed) {
            if (!operator_failed) outcome = 1;       // near miss
            else if (!sis_failed) outcome = 2;       // mishap
            else if (!manual_failed) outcome = 3;    // incident
            else outcome = 4;                        // accident
        }
        credal::CredalRow ladder_row;
        for (int s = 0; s < 5; ++s) {
            ladder_row.entries.push_back(ProbInterval::point(s == outcome ? 1.0 : 0.0));
        }
        consequence.rows.push_back(std::move(ladder_row));
    }
    nodes.push_back(std::move(consequence));

    return credal::CredalNet(std::move(nodes));
}

fta::FaultTree case_study_fault_tree() {
    const auto record = [](const char* id, const char* description, double rate_millionth,
                           double one_year) {
        FailureRecord r;
        r.component_id = id;
        r.description = description;
        r.rate_per_hour = rate_millionth * 1e-6;
        r.probability = ProbInterval::point(one_year);
        r.source = "case study component data";
        return r;
    };

    fta::FaultTree tree;
    tree.events["PT-100"] = record("PT-100", "Pressure transmitter", 500, 1.25e-02);
    tree.events["PIC-100"] = record("PIC-100", "Pressure controller", 800, 9.05e-04);
    tree.events["PV-100"] = record("PV-100", "Pressure control valve", 1500, 1.97e-06);
    tree.events["PZA&PZB"] = record("PZA&PZB", "Pressure switch pair", 346, 4.83e-02);
    tree.events["LogicSolver"] = record("LogicSolver", "Shutdown logic solver", 500, 1.25e-02);
    tree.events["SDV-100"] = record("SDV-100", "Shutdown valve", 1340, 7.98e-06);

    using fta::Node;
    tree.top = Node::gate_of(
        fta::GateKind::And,
        {Node::gate_of(fta::GateKind::Or,
                       {Node::basic("PT-100"), Node::basic("PIC-100"), Node::basic("PV-100")}),
         Node::gate_of(fta::GateKind::Or,
                       {Node::basic("PZA&PZB"), Node::basic("LogicSolver"),
                        Node::basic("SDV-100")})});
    tree.validate();
    return tree;
}

lopa::LopaScenario reference_lopa_scenario() {
    using lopa::IplClass;
    using lopa::IplKind;
    const auto layer = [](const char* name, IplClass cls) {
        return lopa::ProtectionLayer{
            name, IplKind::of(cls),
            ProbInterval::point(lopa::typical_pfd(IplKind::of(cls)).value())};
    };
    lopa::LopaScenario scenario;
    scenario.initiating_event = {lopa::DemandUnit::PerDemand, 1.0};
    scenario.layers = {
        layer("BPCS", IplClass::ControlLoop),
        layer("Operator intervention", IplClass::OperatorResponseToAlarm),
        layer("SIS", IplClass::Sis),
        layer("Manual shutdown", IplClass::ManualShutdown),
    };
    return scenario;
}

}  // namespace psrisk::collab
