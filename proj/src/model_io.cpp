#include "psrisk/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <initializer_list>

#include "json.hpp"
#include "psrisk/numfmt.hpp"

namespace psrisk::io {

namespace {

using nlohmann::json;  // object keys iterate sorted (std::map)

// ---------------------------------------------------------------------------
// canonical writer

void escape_string(const std::string& s, std::string& out) {
    out += '"';
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    out += '"';
}

void write_value(const json& v, std::string& out, int depth) {
    const auto indent = [&out](int d) { out.append(static_cast<std::size_t>(d) * 2, ' '); };
    switch (v.type()) {
        case json::value_t::null:
            out += "null";
            break;
        case json::value_t::boolean:
            out += v.get<bool>() ? "true" : "false";
            break;
        case json::value_t::string:
            escape_string(v.get<std::string>(), out);
            break;
        case json::value_t::number_integer:
            out += std::to_string(v.get<std::int64_t>());
            break;
        case json::value_t::number_unsigned:
            out += std::to_string(v.get<std::uint64_t>());
            break;
        case json::value_t::number_float:
            out += sci(v.get<double>());
            break;
        case json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            bool first = true;
            for (const json& item : v) {
                if (!first) out += ",\n";
                first = false;
                indent(depth + 1);
                write_value(item, out, depth + 1);
            }
            out += '\n';
            indent(depth);
            out += ']';
            break;
        }
        case json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                indent(depth + 1);
                escape_string(it.key(), out);
                out += ": ";
                write_value(it.value(), out, depth + 1);
            }
            out += '\n';
            indent(depth);
            out += '}';
            break;
        }
        default:
            out += "null";
    }
}

std::string canonical_text(const json& v) {
    std::string out;
    write_value(v, out, 0);
    out += '\n';
    return out;
}

// ---------------------------------------------------------------------------
// parse helpers

struct Ctx {
    bool strict = false;
    std::vector<std::string>* warnings = nullptr;
};

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ValidationError(path + ": " + message);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed, Ctx& ctx) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (known) continue;
        if (ctx.strict) {
            fail(path, "unknown field '" + it.key() + "'");
        }
        if (ctx.warnings) {
            ctx.warnings->push_back(path + ": ignoring unknown field '" + it.key() + "'");
        }
    }
}

const json& member(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        fail(path, std::string("missing field '") + key + "'");
    }
    return *it;
}

const json* optional_member(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

void require_object(const json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "expected an object");
}

void require_array(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array");
}

double get_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

std::string get_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

int get_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<int>();
}

template <typename Fn>
auto scoped(const std::string& path, Fn&& fn) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

ProbInterval parse_interval(const json& v, const std::string& path, Ctx& ctx) {
    if (v.is_number()) {
        return scoped(path, [&] { return ProbInterval::point(v.get<double>()); });
    }
    require_object(v, path);
    check_keys(v, path, {"lower", "upper"}, ctx);
    const double lower = get_number(member(v, path, "lower"), path + ".lower");
    const double upper = get_number(member(v, path, "upper"), path + ".upper");
    return scoped(path, [&] { return ProbInterval(lower, upper); });
}

json interval_json(const ProbInterval& p) {
    return json{{"lower", p.lower()}, {"upper", p.upper()}};
}

// ---------------------------------------------------------------------------
// lopa section

const char* ipl_class_name(lopa::IplClass cls) {
    switch (cls) {
        case lopa::IplClass::ControlLoop: return "control_loop";
        case lopa::IplClass::OperatorResponseToAlarm: return "operator_response_to_alarm";
        case lopa::IplClass::TrainedHumanActionNoStress: return "trained_human_action_no_stress";
        case lopa::IplClass::Sis: return "sis";
        case lopa::IplClass::ManualShutdown: return "manual_shutdown";
        case lopa::IplClass::Custom: return "custom";
    }
    return "custom";
}

lopa::IplClass parse_ipl_class(const std::string& name, const std::string& path) {
    for (lopa::IplClass cls :
         {lopa::IplClass::ControlLoop, lopa::IplClass::OperatorResponseToAlarm,
          lopa::IplClass::TrainedHumanActionNoStress, lopa::IplClass::Sis,
          lopa::IplClass::ManualShutdown, lopa::IplClass::Custom}) {
        if (name == ipl_class_name(cls)) return cls;
    }
    fail(path, "unknown layer kind '" + name + "'");
}

lopa::LopaScenario parse_lopa(const json& v, Ctx& ctx) {
    const std::string path = "lopa";
    require_object(v, path);
    check_keys(v, path, {"initiating_event", "layers"}, ctx);

    lopa::LopaScenario scenario;
    const json& ie = member(v, path, "initiating_event");
    require_object(ie, path + ".initiating_event");
    check_keys(ie, path + ".initiating_event", {"unit", "value"}, ctx);
    const std::string unit =
        get_string(member(ie, path, "unit"), path + ".initiating_event.unit");
    if (unit == "per_demand") {
        scenario.initiating_event.unit = lopa::DemandUnit::PerDemand;
    } else if (unit == "per_year") {
        scenario.initiating_event.unit = lopa::DemandUnit::PerYear;
    } else {
        fail(path + ".initiating_event.unit", "expected 'per_demand' or 'per_year'");
    }
    scenario.initiating_event.value =
        get_number(member(ie, path, "value"), path + ".initiating_event.value");
    if (scenario.initiating_event.unit == lopa::DemandUnit::PerDemand) {
        scoped(path + ".initiating_event.value", [&] {
            Probability(scenario.initiating_event.value);
            return 0;
        });
    } else {
        scoped(path + ".initiating_event.value", [&] {
            FrequencyPerYear(scenario.initiating_event.value);
            return 0;
        });
    }

    const json& layers = member(v, path, "layers");
    require_array(layers, path + ".layers");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const std::string lp = path + ".layers[" + std::to_string(i) + "]";
        const json& lv = layers[i];
        require_object(lv, lp);
        check_keys(lv, lp, {"kind", "label", "name", "pfd"}, ctx);
        lopa::ProtectionLayer layer;
        layer.name = get_string(member(lv, lp, "name"), lp + ".name");
        if (layer.name.empty()) fail(lp + ".name", "layer name must be nonempty");
        layer.kind.cls =
            parse_ipl_class(get_string(member(lv, lp, "kind"), lp + ".kind"), lp + ".kind");
        if (const json* label = optional_member(lv, "label")) {
            if (layer.kind.cls != lopa::IplClass::Custom) {
                fail(lp + ".label", "label is only valid for custom layers");
            }
            layer.kind.label = get_string(*label, lp + ".label");
        }
        layer.pfd = parse_interval(member(lv, lp, "pfd"), lp + ".pfd", ctx);
        scenario.layers.push_back(std::move(layer));
    }
    return scenario;
}

json lopa_json(const lopa::LopaScenario& scenario) {
    json layers = json::array();
    for (const lopa::ProtectionLayer& layer : scenario.layers) {
        json lv{{"kind", ipl_class_name(layer.kind.cls)},
                {"name", layer.name},
                {"pfd", interval_json(layer.pfd)}};
        if (layer.kind.cls == lopa::IplClass::Custom) {
            lv["label"] = layer.kind.label;
        }
        layers.push_back(std::move(lv));
    }
    return json{
        {"initiating_event",
         json{{"unit", scenario.initiating_event.unit == lopa::DemandUnit::PerDemand
                           ? "per_demand"
                           : "per_year"},
              {"value", scenario.initiating_event.value}}},
        {"layers", std::move(layers)}};
}

// ---------------------------------------------------------------------------
// fault-tree section

fta::Node parse_ft_node(const json& v, const std::string& path, Ctx& ctx) {
    if (v.is_string()) {
        return fta::Node::basic(v.get<std::string>());
    }
    require_object(v, path);
    check_keys(v, path, {"and", "or"}, ctx);
    const json* children = optional_member(v, "and");
    fta::GateKind kind = fta::GateKind::And;
    if (!children) {
        children = optional_member(v, "or");
        kind = fta::GateKind::Or;
    } else if (optional_member(v, "or")) {
        fail(path, "gate cannot be both 'and' and 'or'");
    }
    if (!children) {
        fail(path, "gate needs an 'and' or 'or' child list");
    }
    const std::string cp = path + (kind == fta::GateKind::And ? ".and" : ".or");
    require_array(*children, cp);
    if (children->empty()) {
        fail(cp, "gate must have at least one child");
    }
    std::vector<fta::Node> parsed;
    for (std::size_t i = 0; i < children->size(); ++i) {
        parsed.push_back(parse_ft_node((*children)[i], cp + "[" + std::to_string(i) + "]", ctx));
    }
    return fta::Node::gate_of(kind, std::move(parsed));
}

fta::FaultTree parse_fault_tree(const json& v, Ctx& ctx) {
    const std::string path = "fault_tree";
    require_object(v, path);
    check_keys(v, path, {"events", "top"}, ctx);

    fta::FaultTree tree;
    const json& events = member(v, path, "events");
    require_array(events, path + ".events");
    for (std::size_t i = 0; i < events.size(); ++i) {
        const std::string ep = path + ".events[" + std::to_string(i) + "]";
        const json& ev = events[i];
        require_object(ev, ep);
        check_keys(ev, ep,
                   {"description", "id", "mission_time_hours", "probability", "rate_per_hour",
                    "source"},
                   ctx);
        FailureRecord record;
        record.component_id = get_string(member(ev, ep, "id"), ep + ".id");
        if (record.component_id.empty()) fail(ep + ".id", "event id must be nonempty");
        if (const json* d = optional_member(ev, "description")) {
            record.description = get_string(*d, ep + ".description");
        }
        if (const json* s = optional_member(ev, "source")) {
            record.source = get_string(*s, ep + ".source");
        }
        if (const json* r = optional_member(ev, "rate_per_hour")) {
            record.rate_per_hour = get_number(*r, ep + ".rate_per_hour");
            if (!(*record.rate_per_hour >= 0.0)) {
                fail(ep + ".rate_per_hour", "rate must be >= 0");
            }
        }
        if (const json* t = optional_member(ev, "mission_time_hours")) {
            record.mission_time_hours = get_number(*t, ep + ".mission_time_hours");
            if (!(*record.mission_time_hours > 0.0)) {
                fail(ep + ".mission_time_hours", "mission time must be > 0");
            }
        }
        if (const json* p = optional_member(ev, "probability")) {
            record.probability = parse_interval(*p, ep + ".probability", ctx);
        }
        if (!record.has_data()) {
            fail(ep, "event '" + record.component_id +
                         "' needs a probability or a rate with a mission time");
        }
        if (!tree.events.emplace(record.component_id, std::move(record)).second) {
            fail(ep, "duplicate event id");
        }
    }
    tree.top = parse_ft_node(member(v, path, "top"), path + ".top", ctx);
    scoped(path, [&] {
        tree.validate();
        return 0;
    });
    return tree;
}

json ft_node_json(const fta::Node& node) {
    if (node.type == fta::Node::Type::BasicEvent) {
        return json(node.event_id);
    }
    json children = json::array();
    for (const fta::Node& child : node.children) {
        children.push_back(ft_node_json(child));
    }
    return json{{node.gate == fta::GateKind::And ? "and" : "or", std::move(children)}};
}

json fault_tree_json(const fta::FaultTree& tree) {
    json events = json::array();
    for (const auto& [id, record] : tree.events) {
        json ev{{"id", id}};
        if (!record.description.empty()) ev["description"] = record.description;
        if (!record.source.empty()) ev["source"] = record.source;
        if (record.rate_per_hour) ev["rate_per_hour"] = *record.rate_per_hour;
        if (record.mission_time_hours) ev["mission_time_hours"] = *record.mission_time_hours;
        if (record.probability) ev["probability"] = interval_json(*record.probability);
        events.push_back(std::move(ev));
    }
    return json{{"events", std::move(events)}, {"top", ft_node_json(tree.top)}};
}

// ---------------------------------------------------------------------------
// network section

struct ParsedNode {
    std::string id;
    std::vector<std::string> states;
    std::vector<std::string> parents;
    const json* cpt = nullptr;
    std::string path;
};

ParsedNode parse_node_common(const json& v, const std::string& path, Ctx& ctx) {
    require_object(v, path);
    check_keys(v, path, {"cpt", "id", "parents", "states"}, ctx);
    ParsedNode node;
    node.path = path;
    node.id = get_string(member(v, path, "id"), path + ".id");
    if (const json* states = optional_member(v, "states")) {
        require_array(*states, path + ".states");
        for (std::size_t i = 0; i < states->size(); ++i) {
            node.states.push_back(
                get_string((*states)[i], path + ".states[" + std::to_string(i) + "]"));
        }
    } else {
        node.states = {"TRUE", "FALSE"};
    }
    if (const json* parents = optional_member(v, "parents")) {
        require_array(*parents, path + ".parents");
        for (std::size_t i = 0; i < parents->size(); ++i) {
            node.parents.push_back(
                get_string((*parents)[i], path + ".parents[" + std::to_string(i) + "]"));
        }
    }
    node.cpt = &member(v, path, "cpt");
    require_array(*node.cpt, path + ".cpt");
    return node;
}

void parse_network(const json& v, ModelDocument& doc, Ctx& ctx) {
    const std::string path = "network";
    require_object(v, path);
    check_keys(v, path, {"kind", "nodes"}, ctx);
    const std::string kind = get_string(member(v, path, "kind"), path + ".kind");
    if (kind != "bayes" && kind != "credal") {
        fail(path + ".kind", "expected 'bayes' or 'credal'");
    }
    const json& nodes = member(v, path, "nodes");
    require_array(nodes, path + ".nodes");

    if (kind == "bayes") {
        std::vector<bn::BnNode> parsed;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const std::string np = path + ".nodes[" + std::to_string(i) + "]";
            ParsedNode common = parse_node_common(nodes[i], np, ctx);
            bn::BnNode node;
            node.id = common.id;
            node.states = common.states;
            node.parents = common.parents;
            for (std::size_t r = 0; r < common.cpt->size(); ++r) {
                const json& row = (*common.cpt)[r];
                const std::string rp = np + ".cpt[" + std::to_string(r) + "]";
                require_array(row, rp);
                std::vector<double> values;
                for (std::size_t k = 0; k < row.size(); ++k) {
                    values.push_back(get_number(row[k], rp + "[" + std::to_string(k) + "]"));
                }
                node.cpt.rows.push_back(std::move(values));
            }
            parsed.push_back(std::move(node));
        }
        doc.bayes_net = scoped(path, [&] { return bn::BayesNet(std::move(parsed)); });
        return;
    }

    std::vector<credal::CrNode> parsed;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string np = path + ".nodes[" + std::to_string(i) + "]";
        ParsedNode common = parse_node_common(nodes[i], np, ctx);
        credal::CrNode node;
        node.id = common.id;
        node.states = common.states;
        node.parents = common.parents;
        for (std::size_t r = 0; r < common.cpt->size(); ++r) {
            const json& row = (*common.cpt)[r];
            const std::string rp = np + ".cpt[" + std::to_string(r) + "]";
            require_array(row, rp);
            credal::CredalRow parsed_row;
            for (std::size_t k = 0; k < row.size(); ++k) {
                parsed_row.entries.push_back(
                    parse_interval(row[k], rp + "[" + std::to_string(k) + "]", ctx));
            }
            node.rows.push_back(std::move(parsed_row));
        }
        parsed.push_back(std::move(node));
    }
    doc.credal_net = scoped(path, [&] { return credal::CredalNet(std::move(parsed)); });
}

json bayes_json(const bn::BayesNet& net) {
    std::vector<const bn::BnNode*> ordered;
    for (const bn::BnNode& node : net.nodes()) ordered.push_back(&node);
    std::sort(ordered.begin(), ordered.end(),
              [](const bn::BnNode* a, const bn::BnNode* b) { return a->id < b->id; });

    json nodes = json::array();
    for (const bn::BnNode* node : ordered) {
        json rows = json::array();
        for (const std::vector<double>& row : node->cpt.rows) {
            rows.push_back(json(row));
        }
        nodes.push_back(json{{"cpt", std::move(rows)},
                             {"id", node->id},
                             {"parents", json(node->parents)},
                             {"states", json(node->states)}});
    }
    return json{{"kind", "bayes"}, {"nodes", std::move(nodes)}};
}

json credal_json(const credal::CredalNet& net) {
    std::vector<const credal::CrNode*> ordered;
    for (const credal::CrNode& node : net.nodes()) ordered.push_back(&node);
    std::sort(ordered.begin(), ordered.end(),
              [](const credal::CrNode* a, const credal::CrNode* b) { return a->id < b->id; });

    json nodes = json::array();
    for (const credal::CrNode* node : ordered) {
        json rows = json::array();
        for (const credal::CredalRow& row : node->rows) {
            json entries = json::array();
            for (const ProbInterval& e : row.entries) {
                entries.push_back(interval_json(e));
            }
            rows.push_back(std::move(entries));
        }
        nodes.push_back(json{{"cpt", std::move(rows)},
                             {"id", node->id},
                             {"parents", json(node->parents)},
                             {"states", json(node->states)}});
    }
    return json{{"kind", "credal"}, {"nodes", std::move(nodes)}};
}

// ---------------------------------------------------------------------------
// catalogs section

collab::PifContext parse_context(const std::string& name, const std::string& path) {
    for (collab::PifContext c :
         {collab::PifContext::EnvironmentAndSituation, collab::PifContext::System,
          collab::PifContext::Personnel, collab::PifContext::Task}) {
        if (name == collab::to_string(c)) return c;
    }
    fail(path, "unknown PIF context '" + name + "'");
}

collab::AiGroup parse_group(const std::string& name, const std::string& path) {
    for (collab::AiGroup g : {collab::AiGroup::Sensor, collab::AiGroup::Actuator,
                              collab::AiGroup::Systematic, collab::AiGroup::LogicSolver}) {
        if (name == collab::to_string(g)) return g;
    }
    fail(path, "unknown failure group '" + name + "'");
}

Catalogs parse_catalogs(const json& v, Ctx& ctx) {
    const std::string path = "catalogs";
    require_object(v, path);
    check_keys(v, path, {"ai_failures", "pifs"}, ctx);

    Catalogs catalogs;
    if (const json* pifs = optional_member(v, "pifs")) {
        require_array(*pifs, path + ".pifs");
        for (std::size_t i = 0; i < pifs->size(); ++i) {
            const std::string pp = path + ".pifs[" + std::to_string(i) + "]";
            const json& pv = (*pifs)[i];
            require_object(pv, pp);
            check_keys(pv, pp, {"context", "hep", "name"}, ctx);
            collab::PifRecord record;
            record.context =
                parse_context(get_string(member(pv, pp, "context"), pp + ".context"),
                              pp + ".context");
            record.name = get_string(member(pv, pp, "name"), pp + ".name");
            if (const json* hep = optional_member(pv, "hep")) {
                record.hep = parse_interval(*hep, pp + ".hep", ctx);
            }
            catalogs.pifs.push_back(std::move(record));
        }
    }
    if (const json* failures = optional_member(v, "ai_failures")) {
        require_array(*failures, path + ".ai_failures");
        for (std::size_t i = 0; i < failures->size(); ++i) {
            const std::string fp = path + ".ai_failures[" + std::to_string(i) + "]";
            const json& fv = (*failures)[i];
            require_object(fv, fp);
            check_keys(fv, fp, {"failure_type", "group", "probability"}, ctx);
            collab::AiFailureRecord record;
            record.failure_type =
                get_string(member(fv, fp, "failure_type"), fp + ".failure_type");
            record.group =
                parse_group(get_string(member(fv, fp, "group"), fp + ".group"), fp + ".group");
            record.probability =
                parse_interval(member(fv, fp, "probability"), fp + ".probability", ctx);
            catalogs.ai_failures.push_back(std::move(record));
        }
    }
    if (catalogs.pifs.empty() && catalogs.ai_failures.empty()) {
        fail(path, "catalogs section is empty");
    }
    return catalogs;
}

json catalogs_json(const Catalogs& catalogs) {
    json out = json::object();
    if (!catalogs.pifs.empty()) {
        std::vector<const collab::PifRecord*> ordered;
        for (const collab::PifRecord& r : catalogs.pifs) ordered.push_back(&r);
        std::stable_sort(ordered.begin(), ordered.end(),
                         [](const collab::PifRecord* a, const collab::PifRecord* b) {
                             return a->name < b->name;
                         });
        json pifs = json::array();
        for (const collab::PifRecord* record : ordered) {
            json pv{{"context", collab::to_string(record->context)}, {"name", record->name}};
            if (record->hep) pv["hep"] = interval_json(*record->hep);
            pifs.push_back(std::move(pv));
        }
        out["pifs"] = std::move(pifs);
    }
    if (!catalogs.ai_failures.empty()) {
        std::vector<const collab::AiFailureRecord*> ordered;
        for (const collab::AiFailureRecord& r : catalogs.ai_failures) ordered.push_back(&r);
        std::stable_sort(ordered.begin(), ordered.end(),
                         [](const collab::AiFailureRecord* a, const collab::AiFailureRecord* b) {
                             return a->failure_type < b->failure_type;
                         });
        json failures = json::array();
        for (const collab::AiFailureRecord* record : ordered) {
            failures.push_back(json{{"failure_type", record->failure_type},
                                    {"group", collab::to_string(record->group)},
                                    {"probability", interval_json(record->probability)}});
        }
        out["ai_failures"] = std::move(failures);
    }
    return out;
}

void offset_to_position(const std::string& text, std::size_t offset, std::size_t& line,
                        std::size_t& column) {
    line = 1;
    std::size_t line_start = 0;
    const std::size_t end = std::min(offset, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            line_start = i + 1;
        }
    }
    column = end - line_start + 1;
}

}  // namespace

// ---------------------------------------------------------------------------

ModelDocument parse_model(const std::string& text, const ParseOptions& options) {
    Ctx ctx{options.strict, options.warnings};

    // Nesting is bounded up front; the recursive parser would otherwise
    // exhaust the stack on pathological inputs long before any content
    // check runs.
    constexpr int kMaxNesting = 256;
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '[' || c == '{') {
            if (++depth > kMaxNesting) {
                std::size_t line = 1;
                std::size_t column = 1;
                offset_to_position(text, i, line, column);
                throw ParseError("nesting deeper than " + std::to_string(kMaxNesting) +
                                     " levels",
                                 line, column);
            }
        } else if (c == ']' || c == '}') {
            if (depth > 0) --depth;
        }
    }

    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t column = 1;
        offset_to_position(text, e.byte > 0 ? e.byte - 1 : 0, line, column);
        throw ParseError(e.what(), line, column);
    } catch (const json::exception& e) {
        throw ParseError(e.what(), 1, 1);
    }

    try {
        if (!root.is_object()) {
            fail("document", "root must be an object");
        }
        check_keys(root, "document",
                   {"catalogs", "fault_tree", "format_version", "lopa", "network"}, ctx);
        const int version =
            get_int(member(root, "document", "format_version"), "format_version");
        if (version != kFormatVersion) {
            fail("format_version", "unsupported version " + std::to_string(version));
        }

        ModelDocument doc;
        doc.format_version = version;
        if (const json* v = optional_member(root, "lopa")) {
            doc.lopa = parse_lopa(*v, ctx);
        }
        if (const json* v = optional_member(root, "fault_tree")) {
            doc.fault_tree = parse_fault_tree(*v, ctx);
        }
        if (const json* v = optional_member(root, "network")) {
            parse_network(*v, doc, ctx);
        }
        if (const json* v = optional_member(root, "catalogs")) {
            doc.catalogs = parse_catalogs(*v, ctx);
        }
        if (!doc.lopa && !doc.fault_tree && !doc.bayes_net && !doc.credal_net &&
            !doc.catalogs) {
            fail("document", "no sections");
        }
        return doc;
    } catch (const ValidationError&) {
        throw;
    } catch (const json::exception& e) {
        // Any stray library exception still surfaces as a diagnostic.
        throw ValidationError(std::string("malformed document: ") + e.what());
    }
}

std::string serialize_model(const ModelDocument& document) {
    json root{{"format_version", document.format_version}};
    if (document.lopa) root["lopa"] = lopa_json(*document.lopa);
    if (document.fault_tree) root["fault_tree"] = fault_tree_json(*document.fault_tree);
    if (document.bayes_net) root["network"] = bayes_json(*document.bayes_net);
    if (document.credal_net) root["network"] = credal_json(*document.credal_net);
    if (document.catalogs) root["catalogs"] = catalogs_json(*document.catalogs);
    return canonical_text(root);
}

std::string digest(const std::string& canonical) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string serialize_results(const ResultDocument& results) {
    json entries = json::array();
    for (const ResultEntry& entry : results.entries) {
        json states = json::array();
        for (const ResultState& s : entry.states) {
            states.push_back(json{{"lower", s.lower}, {"state", s.state}, {"upper", s.upper}});
        }
        json notes = json::object();
        for (const auto& [key, value] : entry.notes) notes[key] = value;
        entries.push_back(json{{"method", entry.method},
                               {"notes", std::move(notes)},
                               {"query", entry.query},
                               {"states", std::move(states)}});
    }
    return canonical_text(json{{"entries", std::move(entries)},
                               {"format_version", results.format_version},
                               {"input_digest", results.input_digest},
                               {"tool_version", results.tool_version}});
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string export_csv(const ResultDocument& results) {
    std::string out = "query,state,lower,upper,method\r\n";
    for (const ResultEntry& entry : results.entries) {
        for (const ResultState& s : entry.states) {
            out += csv_field(entry.query) + ',' + csv_field(s.state) + ',' + sci(s.lower) +
                   ',' + sci(s.upper) + ',' + csv_field(entry.method) + "\r\n";
        }
    }
    return out;
}

void xml_escape(const std::string& s, std::string& out) {
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
}

std::string fixed2(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string export_svg(const ResultDocument& results, bool log_scale) {
    struct Bar {
        std::string label;
        double lower;
        double upper;
    };
    std::vector<Bar> bars;
    const bool single_entry = results.entries.size() == 1;
    for (const ResultEntry& entry : results.entries) {
        for (const ResultState& s : entry.states) {
            const std::string label =
                single_entry ? s.state : entry.query + ":" + s.state;
            bars.push_back(Bar{label, s.lower, s.upper});
        }
    }

    static constexpr double kBarWidth = 56.0;
    static constexpr double kGap = 26.0;
    static constexpr double kPlotHeight = 220.0;
    static constexpr double kLeft = 40.0;
    static constexpr double kTop = 30.0;
    static constexpr double kLogFloor = 1e-8;
    const double width = kLeft * 2 + bars.size() * (kBarWidth + kGap);
    const double height = kTop + kPlotHeight + 70.0;

    const auto bar_height = [log_scale](double v) {
        if (v <= 0.0) return 0.0;
        if (!log_scale) return v * kPlotHeight;
        const double t = (std::log10(std::max(v, kLogFloor)) - std::log10(kLogFloor)) /
                         (0.0 - std::log10(kLogFloor));
        return std::max(0.0, std::min(1.0, t)) * kPlotHeight;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           fixed2(width) + "\" height=\"" + fixed2(height) + "\">\n";
    svg += "  <rect x=\"0\" y=\"0\" width=\"" + fixed2(width) + "\" height=\"" +
           fixed2(height) + "\" fill=\"white\"/>\n";
    const double baseline = kTop + kPlotHeight;
    svg += "  <line x1=\"" + fixed2(kLeft - 10.0) + "\" y1=\"" + fixed2(baseline) +
           "\" x2=\"" + fixed2(width - kLeft + 10.0) + "\" y2=\"" + fixed2(baseline) +
           "\" stroke=\"black\"/>\n";

    for (std::size_t i = 0; i < bars.size(); ++i) {
        const Bar& bar = bars[i];
        const double x = kLeft + static_cast<double>(i) * (kBarWidth + kGap);
        const double h = bar_height(bar.upper);
        svg += "  <rect x=\"" + fixed2(x) + "\" y=\"" + fixed2(baseline - h) + "\" width=\"" +
               fixed2(kBarWidth) + "\" height=\"" + fixed2(h) +
               "\" fill=\"#4878a8\" stroke=\"black\"/>\n";
        if (bar.lower < bar.upper) {
            const double hl = bar_height(bar.lower);
            svg += "  <line x1=\"" + fixed2(x) + "\" y1=\"" + fixed2(baseline - hl) +
                   "\" x2=\"" + fixed2(x + kBarWidth) + "\" y2=\"" + fixed2(baseline - hl) +
                   "\" stroke=\"#d04040\" stroke-width=\"2\"/>\n";
        }
        std::string value_label = sci(bar.upper);
        if (bar.lower < bar.upper) {
            value_label = sci(bar.lower) + " / " + sci(bar.upper);
        }
        svg += "  <text x=\"" + fixed2(x + kBarWidth / 2) + "\" y=\"" +
               fixed2(baseline - h - 6.0) +
               "\" font-size=\"9\" text-anchor=\"middle\" font-family=\"monospace\">";
        xml_escape(value_label, svg);
        svg += "</text>\n";
        svg += "  <text x=\"" + fixed2(x + kBarWidth / 2) + "\" y=\"" +
               fixed2(baseline + 16.0) +
               "\" font-size=\"10\" text-anchor=\"middle\" font-family=\"sans-serif\">";
        xml_escape(bar.label, svg);
        svg += "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace

std::string export_results(const ResultDocument& results, ExportFormat format,
                           const ExportOptions& options) {
    bool empty = results.entries.empty();
    if (!empty) {
        empty = true;
        for (const ResultEntry& entry : results.entries) {
            if (!entry.states.empty()) {
                empty = false;
                break;
            }
        }
    }
    if (empty) {
        throw ValidationError("no results to export");
    }
    if (format == ExportFormat::Csv) {
        return export_csv(results);
    }
    return export_svg(results, options.log_scale);
}

}  // namespace psrisk::io
