#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "psrisk/collab.hpp"
#include "psrisk/model_io.hpp"
#include "psrisk/numfmt.hpp"

namespace {

using namespace psrisk;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open '" + path + "'");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot write '" + path + "'");
    }
    out << content;
}

struct LoadedModel {
    io::ModelDocument doc;
    std::string digest;
};

LoadedModel load_model(const std::string& path, bool strict) {
    std::vector<std::string> warnings;
    io::ParseOptions options;
    options.strict = strict;
    options.warnings = &warnings;
    LoadedModel loaded;
    loaded.doc = io::parse_model(read_file(path), options);
    for (const std::string& w : warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    loaded.digest = io::digest(io::serialize_model(loaded.doc));
    return loaded;
}

bn::Evidence parse_evidence(const std::vector<std::string>& items) {
    bn::Evidence evidence;
    for (const std::string& item : items) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
            throw ValidationError("evidence must be NODE=STATE, got '" + item + "'");
        }
        evidence[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return evidence;
}

std::string selection_text(const credal::CornerSelection& selection) {
    std::string out;
    for (const auto& [key, endpoint] : selection) {
        if (!out.empty()) out += ';';
        out += key;
        out += (endpoint == credal::Endpoint::Lower) ? "=L" : "=U";
    }
    return out;
}

void emit_results(const io::ResultDocument& results, const std::string& out_path,
                  const std::string& format, bool log_scale) {
    if (out_path.empty()) return;
    std::string content;
    if (format == "csv") {
        content = io::export_results(results, io::ExportFormat::Csv);
    } else if (format == "svg") {
        content = io::export_results(results, io::ExportFormat::SvgBar, {log_scale});
    } else {
        content = io::serialize_results(results);
    }
    write_file(out_path, content);
}

void print_interval_row(const std::string& label, double lower, double upper) {
    std::printf("  %-14s %-14s %s\n", label.c_str(), sci3(lower).c_str(), sci3(upper).c_str());
}

// ---------------------------------------------------------------------------
// sections shared by the single-purpose commands and `report`

void run_lopa_section(const lopa::LopaScenario& scenario, io::ResultDocument& results) {
    const lopa::FrequencyResult freq = lopa::consequence_frequency(scenario);
    const bool per_demand = scenario.initiating_event.unit == lopa::DemandUnit::PerDemand;

    std::printf("LOPA scenario: %zu protection layers, initiating event %s %s\n",
                scenario.layers.size(), sci3(scenario.initiating_event.value).c_str(),
                per_demand ? "per demand" : "per year");
    for (std::size_t i = 0; i < scenario.layers.size(); ++i) {
        const lopa::ProtectionLayer& layer = scenario.layers[i];
        std::printf("  layer %zu  %-24s PFD [%s, %s]\n", i + 1, layer.name.c_str(),
                    sci3(layer.pfd.lower()).c_str(), sci3(layer.pfd.upper()).c_str());
    }
    std::printf("consequence (%s): [%s, %s]\n", per_demand ? "per demand" : "per year",
                sci3(freq.lower).c_str(), sci3(freq.upper).c_str());

    io::ResultEntry freq_entry;
    freq_entry.query = "lopa";
    freq_entry.method = "frequency";
    freq_entry.states.push_back({"consequence", freq.lower, freq.upper});
    freq_entry.notes["unit"] = per_demand ? "per_demand" : "per_year";
    results.entries.push_back(std::move(freq_entry));

    if (per_demand && scenario.layers.size() == 4) {
        const lopa::ConsequenceLadder ladder = lopa::consequence_ladder(scenario);
        const std::vector<std::pair<std::string, ProbInterval>> rows = {
            {"safe", ladder.safe},
            {"near_miss", ladder.near_miss},
            {"mishap", ladder.mishap},
            {"incident", ladder.incident},
            {"accident", ladder.accident},
        };
        std::printf("outcome ladder:\n");
        std::printf("  %-14s %-14s %s\n", "state", "lower", "upper");
        io::ResultEntry entry;
        entry.query = "lopa";
        entry.method = "ladder";
        for (const auto& [name, mass] : rows) {
            print_interval_row(name, mass.lower(), mass.upper());
            entry.states.push_back({name, mass.lower(), mass.upper()});
        }
        results.entries.push_back(std::move(entry));
    }
}

void run_fta_section(const fta::FaultTree& tree, fta::EvaluationMode mode,
                     io::ResultDocument& results) {
    const fta::EvalResult value = fta::evaluate_detailed(tree, mode);
    const char* mode_name = mode == fta::EvaluationMode::Exact ? "exact" : "rare-event";
    std::printf("top event probability (%s): %s\n", mode_name,
                sci3(value.probability).c_str());
    if (value.rare_event_capped) {
        std::printf("  note: an OR sum exceeded 1 and was capped\n");
    }
    io::ResultEntry entry;
    entry.query = "fta";
    entry.method = mode_name;
    entry.states.push_back({"top", value.probability, value.probability});
    if (value.rare_event_capped) entry.notes["capped"] = "true";
    results.entries.push_back(std::move(entry));
}

void print_cut_sets(const fta::FaultTree& tree) {
    const std::set<std::set<std::string>> sets = fta::minimal_cut_sets(tree);
    std::printf("minimal cut sets (%zu):\n", sets.size());
    for (const std::set<std::string>& cut : sets) {
        std::string line;
        for (const std::string& id : cut) {
            if (!line.empty()) line += ", ";
            line += id;
        }
        std::printf("  {%s}\n", line.c_str());
    }
}

void run_marginal_section(const bn::BayesNet& net, const std::string& target,
                          const bn::Evidence& evidence, io::ResultDocument& results) {
    const bn::StateDistribution dist = bn::infer_marginal(net, target, evidence);
    std::printf("P(%s | %zu observation%s):\n", target.c_str(), evidence.size(),
                evidence.size() == 1 ? "" : "s");
    io::ResultEntry entry;
    entry.query = "bn-infer";
    entry.method = "variable-elimination";
    entry.notes["target"] = target;
    for (std::size_t i = 0; i < dist.states.size(); ++i) {
        std::printf("  %-14s %s\n", dist.states[i].c_str(), sci3(dist.p[i]).c_str());
        entry.states.push_back({dist.states[i], dist.p[i], dist.p[i]});
    }
    results.entries.push_back(std::move(entry));
}

void run_bounds_section(const credal::CredalNet& net, const std::string& target,
                        const bn::Evidence& evidence, const std::string& method,
                        std::size_t max_params, io::ResultDocument& results) {
    const std::vector<std::string> params = credal::free_parameters(net);

    if (method == "two-corner") {
        const credal::ScenarioBounds bounds = credal::two_corner_bounds(net, target, evidence);
        std::printf("two-corner scenario bounds for %s (%zu interval parameters):\n",
                    target.c_str(), params.size());
        std::printf("  %-14s %-14s %s\n", "state", "best(all-L)", "worst(all-U)");
        io::ResultEntry entry;
        entry.query = "bounds";
        entry.method = "two-corner";
        entry.notes["target"] = target;
        entry.notes["selection_best"] = "all-lower";
        entry.notes["selection_worst"] = "all-upper";
        std::string inverted;
        for (const credal::StateBound& b : bounds.bounds) {
            print_interval_row(b.state, b.best, b.worst);
            entry.states.push_back({b.state, b.best, b.worst});
            if (b.best > b.worst) {
                if (!inverted.empty()) inverted += ',';
                inverted += b.state;
            }
        }
        if (!inverted.empty()) {
            std::printf("  note: corner values are inverted (best > worst) for: %s\n",
                        inverted.c_str());
            entry.notes["inverted_states"] = inverted;
        }

        // The two corners bound nothing unless the query is monotone in
        // every parameter, so cross-check against full enumeration while
        // that stays tractable.
        const std::size_t check_limit = std::min<std::size_t>(max_params, 12);
        if (params.size() <= check_limit) {
            const credal::ScenarioBounds envelope =
                credal::corner_enumeration_bounds(net, target, evidence, check_limit);
            std::string widened;
            for (std::size_t i = 0; i < bounds.bounds.size(); ++i) {
                const double lo = std::min(bounds.bounds[i].best, bounds.bounds[i].worst);
                const double hi = std::max(bounds.bounds[i].best, bounds.bounds[i].worst);
                if (envelope.bounds[i].best < lo - 1e-15 ||
                    envelope.bounds[i].worst > hi + 1e-15) {
                    if (!widened.empty()) widened += ',';
                    widened += bounds.bounds[i].state;
                }
            }
            if (!widened.empty()) {
                std::printf("  caveat: corner enumeration widens the envelope for: %s\n",
                            widened.c_str());
                entry.notes["enumeration_disagrees"] = widened;
            } else {
                entry.notes["enumeration_check"] = "confirmed";
            }
        } else {
            entry.notes["enumeration_check"] =
                "skipped (" + std::to_string(params.size()) + " parameters)";
        }
        results.entries.push_back(std::move(entry));
        return;
    }

    const credal::ScenarioBounds bounds =
        credal::corner_enumeration_bounds(net, target, evidence, max_params);
    std::printf("corner-enumeration bounds for %s (%zu interval parameters, %zu corners):\n",
                target.c_str(), params.size(), std::size_t{1} << params.size());
    std::printf("  %-14s %-14s %s\n", "state", "min", "max");
    io::ResultEntry entry;
    entry.query = "bounds";
    entry.method = "enumerate";
    entry.notes["target"] = target;
    for (const credal::StateBound& b : bounds.bounds) {
        print_interval_row(b.state, b.best, b.worst);
        entry.states.push_back({b.state, b.best, b.worst});
        entry.notes["selection_min:" + b.state] = selection_text(b.selection_best);
        entry.notes["selection_max:" + b.state] = selection_text(b.selection_worst);
    }
    results.entries.push_back(std::move(entry));
}

// Builds the reference collaboration network, with any catalog overrides
// layered onto the shipped defaults by record name.
credal::CredalNet model_from_catalogs(const io::Catalogs& overrides) {
    std::vector<collab::AiFailureRecord> ai = collab::ai_failure_defaults();
    for (const collab::AiFailureRecord& record : overrides.ai_failures) {
        bool known = false;
        for (collab::AiFailureRecord& base : ai) {
            if (base.failure_type == record.failure_type) {
                base = record;
                known = true;
                break;
            }
        }
        if (!known) ai.push_back(record);
    }
    std::vector<collab::PifRecord> pifs = collab::hep_defaults();
    for (const collab::PifRecord& record : overrides.pifs) {
        if (!record.hep) continue;
        // Records may use the short error-table name or the full catalog
        // wording.
        const std::string canonical = collab::canonical_pif_name(record.name);
        bool known = false;
        for (collab::PifRecord& base : pifs) {
            if (base.name == (canonical.empty() ? record.name : canonical)) {
                base.hep = record.hep;
                known = true;
                break;
            }
        }
        if (!known) pifs.push_back(record);
    }
    return collab::build_collaboration_model(ai, pifs);
}

struct CommandArgs {
    std::string model_path;
    std::string out_path;
    std::string format;
    std::string mode = "exact";
    std::string method = "two-corner";
    std::string target;
    std::vector<std::string> evidence;
    std::size_t max_params = 20;
    std::uint64_t samples = 0;
    std::uint64_t seed = 1;
    bool strict = false;
    bool log_scale = false;
    bool cut_sets = false;
    std::string emit_dir;
};

int run_lopa(const CommandArgs& args) {
    const LoadedModel loaded = load_model(args.model_path, args.strict);
    if (!loaded.doc.lopa) {
        throw ValidationError("model has no lopa section");
    }
    io::ResultDocument results;
    results.input_digest = loaded.digest;
    run_lopa_section(*loaded.doc.lopa, results);
    emit_results(results, args.out_path, args.format, args.log_scale);
    return 0;
}

int run_fta(const CommandArgs& args) {
    const LoadedModel loaded = load_model(args.model_path, args.strict);
    if (!loaded.doc.fault_tree) {
        throw ValidationError("model has no fault_tree section");
    }
    const fta::FaultTree& tree = *loaded.doc.fault_tree;
    const fta::EvaluationMode mode = args.mode == "rare-event"
                                         ? fta::EvaluationMode::RareEvent
                                         : fta::EvaluationMode::Exact;
    io::ResultDocument results;
    results.input_digest = loaded.digest;
    run_fta_section(tree, mode, results);
    if (args.cut_sets) {
        print_cut_sets(tree);
    }
    if (args.samples > 0) {
        const fta::McEstimate mc = fta::monte_carlo_top_event(tree, args.samples, args.seed);
        std::printf("monte carlo (%llu samples, seed %llu): %s +/- %s\n",
                    static_cast<unsigned long long>(mc.samples),
                    static_cast<unsigned long long>(args.seed), sci3(mc.estimate).c_str(),
                    sci3(mc.std_error).c_str());
        io::ResultEntry entry;
        entry.query = "fta";
        entry.method = "monte-carlo";
        entry.states.push_back({"top", mc.estimate, mc.estimate});
        entry.notes["samples"] = std::to_string(mc.samples);
        entry.notes["seed"] = std::to_string(args.seed);
        entry.notes["std_error"] = sci(mc.std_error);
        results.entries.push_back(std::move(entry));
    }
    emit_results(results, args.out_path, args.format, args.log_scale);
    return 0;
}

int run_bn_infer(const CommandArgs& args) {
    const LoadedModel loaded = load_model(args.model_path, args.strict);
    if (loaded.doc.credal_net) {
        throw ValidationError("network is interval-valued; use the bounds command");
    }
    if (!loaded.doc.bayes_net) {
        throw ValidationError("model has no point-valued network section");
    }
    const bn::Evidence evidence = parse_evidence(args.evidence);
    io::ResultDocument results;
    results.input_digest = loaded.digest;
    run_marginal_section(*loaded.doc.bayes_net, args.target, evidence, results);
    if (args.samples > 0) {
        const bn::McDistribution mc = bn::monte_carlo_estimate(
            *loaded.doc.bayes_net, args.target, evidence, args.samples, args.seed);
        std::printf("monte carlo (%llu samples, %llu accepted, seed %llu):\n",
                    static_cast<unsigned long long>(mc.samples),
                    static_cast<unsigned long long>(mc.accepted),
                    static_cast<unsigned long long>(args.seed));
        io::ResultEntry entry;
        entry.query = "bn-infer";
        entry.method = "monte-carlo";
        entry.notes["target"] = args.target;
        entry.notes["samples"] = std::to_string(mc.samples);
        entry.notes["accepted"] = std::to_string(mc.accepted);
        entry.notes["seed"] = std::to_string(args.seed);
        for (std::size_t i = 0; i < mc.states.size(); ++i) {
            std::printf("  %-14s %s +/- %s\n", mc.states[i].c_str(),
                        sci3(mc.estimate[i]).c_str(), sci3(mc.std_error[i]).c_str());
            entry.states.push_back({mc.states[i], mc.estimate[i], mc.estimate[i]});
            entry.notes["std_error:" + mc.states[i]] = sci(mc.std_error[i]);
        }
        results.entries.push_back(std::move(entry));
    }
    emit_results(results, args.out_path, args.format, args.log_scale);
    return 0;
}

int run_bounds(const CommandArgs& args) {
    const LoadedModel loaded = load_model(args.model_path, args.strict);
    std::optional<credal::CredalNet> net;
    if (loaded.doc.credal_net) {
        net = loaded.doc.credal_net;
    } else if (!loaded.doc.bayes_net && loaded.doc.catalogs) {
        net = model_from_catalogs(*loaded.doc.catalogs);
        std::printf("built the reference collaboration model from the catalogs section\n");
    }
    if (!net) {
        if (loaded.doc.bayes_net) {
            throw ValidationError("network is point-valued; use the bn-infer command");
        }
        throw ValidationError("model has no credal network or catalogs section");
    }
    const bn::Evidence evidence = parse_evidence(args.evidence);
    io::ResultDocument results;
    results.input_digest = loaded.digest;
    run_bounds_section(*net, args.target, evidence, args.method, args.max_params, results);
    emit_results(results, args.out_path, args.format, args.log_scale);
    return 0;
}

int run_catalog(const CommandArgs& args) {
    const std::vector<collab::PifRecord> pifs = collab::idheas_pif_catalog();
    std::printf("performance-influencing factors (%zu):\n", pifs.size());
    for (const collab::PifRecord& record : pifs) {
        if (record.hep) {
            std::printf("  %-28s %-52s [%s, %s]\n", collab::to_string(record.context).c_str(),
                        record.name.c_str(), sci3(record.hep->lower()).c_str(),
                        sci3(record.hep->upper()).c_str());
        } else {
            std::printf("  %-28s %-52s (no published figure)\n",
                        collab::to_string(record.context).c_str(), record.name.c_str());
        }
    }
    const std::vector<collab::AiFailureRecord> failures = collab::ai_failure_defaults();
    std::printf("control-system failure causes (%zu):\n", failures.size());
    for (const collab::AiFailureRecord& record : failures) {
        std::printf("  %-12s %-36s [%s, %s]\n", collab::to_string(record.group).c_str(),
                    record.failure_type.c_str(), sci3(record.probability.lower()).c_str(),
                    sci3(record.probability.upper()).c_str());
    }
    std::printf("typical layer PFDs:\n");
    const std::vector<std::pair<const char*, lopa::IplClass>> kinds = {
        {"control_loop", lopa::IplClass::ControlLoop},
        {"operator_response_to_alarm", lopa::IplClass::OperatorResponseToAlarm},
        {"trained_human_action_no_stress", lopa::IplClass::TrainedHumanActionNoStress},
        {"sis", lopa::IplClass::Sis},
        {"manual_shutdown", lopa::IplClass::ManualShutdown},
    };
    for (const auto& [name, cls] : kinds) {
        std::printf("  %-32s %s\n", name,
                    sci3(lopa::typical_pfd(lopa::IplKind::of(cls)).value()).c_str());
    }

    if (!args.out_path.empty()) {
        io::ModelDocument doc;
        doc.catalogs = io::Catalogs{pifs, failures};
        write_file(args.out_path, io::serialize_model(doc));
    }
    if (!args.emit_dir.empty()) {
        std::filesystem::create_directories(args.emit_dir);
        const std::filesystem::path dir(args.emit_dir);

        io::ModelDocument lopa_doc;
        lopa_doc.lopa = collab::reference_lopa_scenario();
        write_file((dir / "lopa_table1_defaults.json").string(),
                   io::serialize_model(lopa_doc));

        io::ModelDocument fta_doc;
        fta_doc.fault_tree = collab::case_study_fault_tree();
        write_file((dir / "case_separator_fta.json").string(), io::serialize_model(fta_doc));

        io::ModelDocument collab_doc;
        collab_doc.credal_net = collab::build_collaboration_model(
            collab::ai_failure_defaults(), collab::hep_defaults());
        write_file((dir / "collab_default_credal.json").string(),
                   io::serialize_model(collab_doc));
        std::printf("wrote 3 fixture models under %s\n", args.emit_dir.c_str());
    }
    return 0;
}

int run_report(const CommandArgs& args) {
    const LoadedModel loaded = load_model(args.model_path, args.strict);
    const bn::Evidence evidence = parse_evidence(args.evidence);
    io::ResultDocument results;
    results.input_digest = loaded.digest;

    if (loaded.doc.lopa) {
        run_lopa_section(*loaded.doc.lopa, results);
    }
    if (loaded.doc.fault_tree) {
        run_fta_section(*loaded.doc.fault_tree, fta::EvaluationMode::Exact, results);
        run_fta_section(*loaded.doc.fault_tree, fta::EvaluationMode::RareEvent, results);
        print_cut_sets(*loaded.doc.fault_tree);
    }

    std::optional<credal::CredalNet> credal_section = loaded.doc.credal_net;
    if (!credal_section && !loaded.doc.bayes_net && loaded.doc.catalogs) {
        credal_section = model_from_catalogs(*loaded.doc.catalogs);
        std::printf("built the reference collaboration model from the catalogs section\n");
    }
    if (loaded.doc.bayes_net) {
        std::string target = args.target;
        if (target.empty()) {
            std::printf("note: no --target given; skipping network inference\n");
        } else {
            run_marginal_section(*loaded.doc.bayes_net, target, evidence, results);
        }
    } else if (credal_section) {
        std::string target = args.target;
        if (target.empty() && credal_section->has_node(collab::kConsequenceNode)) {
            target = collab::kConsequenceNode;
            std::printf("note: defaulting --target to %s\n", target.c_str());
        }
        if (target.empty()) {
            std::printf("note: no --target given; skipping network bounds\n");
        } else {
            run_bounds_section(*credal_section, target, evidence, args.method,
                               args.max_params, results);
        }
    }

    if (results.entries.empty()) {
        throw ValidationError("model has no sections this command can analyse");
    }
    emit_results(results, args.out_path, args.format, args.log_scale);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantitative risk analysis for layered process protections"};
    app.set_version_flag("--version", std::string("psrisk ") + io::kToolVersion + " (format " +
                                          std::to_string(io::kFormatVersion) + ")");
    app.require_subcommand(1);

    CommandArgs args;
    const auto add_model = [&args](CLI::App* cmd) {
        cmd->add_option("--model", args.model_path, "model document (JSON)")->required();
        cmd->add_flag("--strict", args.strict, "reject unknown fields");
    };
    const auto add_output = [&args](CLI::App* cmd) {
        cmd->add_option("--out", args.out_path, "write machine-readable results here");
        cmd->add_option("--format", args.format, "output format for --out (default: json)")
            ->check(CLI::IsMember({"csv", "svg"}));
        cmd->add_flag("--log-scale", args.log_scale, "log-scale bars in SVG output");
    };

    CLI::App* lopa_cmd = app.add_subcommand("lopa", "evaluate a protection-layer scenario");
    add_model(lopa_cmd);
    add_output(lopa_cmd);

    CLI::App* fta_cmd = app.add_subcommand("fta", "evaluate a fault tree");
    add_model(fta_cmd);
    add_output(fta_cmd);
    fta_cmd->add_option("--mode", args.mode, "gate arithmetic (default: exact)")
        ->check(CLI::IsMember({"exact", "rare-event"}));
    fta_cmd->add_flag("--cut-sets", args.cut_sets, "also list minimal cut sets");
    fta_cmd->add_option("--samples", args.samples, "Monte Carlo cross-check sample count");
    fta_cmd->add_option("--seed", args.seed, "Monte Carlo seed (default: 1)");

    CLI::App* infer_cmd = app.add_subcommand("bn-infer", "exact marginal on a point network");
    add_model(infer_cmd);
    add_output(infer_cmd);
    infer_cmd->add_option("--target", args.target, "query node")->required();
    infer_cmd->add_option("--evidence", args.evidence, "observed NODE=STATE (repeatable)");
    infer_cmd->add_option("--samples", args.samples, "Monte Carlo cross-check sample count");
    infer_cmd->add_option("--seed", args.seed, "Monte Carlo seed (default: 1)");

    CLI::App* bounds_cmd =
        app.add_subcommand("bounds", "best/worst scenario bounds on a credal network");
    add_model(bounds_cmd);
    add_output(bounds_cmd);
    bounds_cmd->add_option("--target", args.target, "query node")->required();
    bounds_cmd->add_option("--evidence", args.evidence, "observed NODE=STATE (repeatable)");
    bounds_cmd->add_option("--method", args.method, "two-corner (default) or enumerate")
        ->check(CLI::IsMember({"two-corner", "enumerate"}));
    bounds_cmd->add_option("--max-params", args.max_params,
                           "enumeration refusal limit (default: 20)");

    CLI::App* catalog_cmd =
        app.add_subcommand("catalog", "show the shipped data catalogs");
    catalog_cmd->add_option("--out", args.out_path, "write the catalogs as a model document");
    catalog_cmd->add_option("--emit-fixtures", args.emit_dir,
                            "write the reference fixture models into this directory");

    CLI::App* report_cmd =
        app.add_subcommand("report", "run every analysis a model supports");
    add_model(report_cmd);
    add_output(report_cmd);
    report_cmd->add_option("--target", args.target, "query node for network sections");
    report_cmd->add_option("--evidence", args.evidence, "observed NODE=STATE (repeatable)");
    report_cmd->add_option("--method", args.method, "bounds method (default: two-corner)")
        ->check(CLI::IsMember({"two-corner", "enumerate"}));
    report_cmd->add_option("--max-params", args.max_params,
                           "enumeration refusal limit (default: 20)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(lopa_cmd)) return run_lopa(args);
        if (app.got_subcommand(fta_cmd)) return run_fta(args);
        if (app.got_subcommand(infer_cmd)) return run_bn_infer(args);
        if (app.got_subcommand(bounds_cmd)) return run_bounds(args);
        if (app.got_subcommand(catalog_cmd)) return run_catalog(args);
        if (app.got_subcommand(report_cmd)) return run_report(args);
    } catch (const ParseError& e) {
        std::cerr << "error: line " << e.line() << ", column " << e.column() << ": "
                  << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
