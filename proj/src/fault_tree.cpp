#include "psrisk/fault_tree.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace psrisk::fta {

Node Node::basic(std::string id) {
    Node n;
    n.type = Type::BasicEvent;
    n.event_id = std::move(id);
    return n;
}

Node Node::gate_of(GateKind kind, std::vector<Node> children) {
    if (children.empty()) {
        throw ValidationError("gate must have at least one child");
    }
    Node n;
    n.type = Type::Gate;
    n.gate = kind;
    n.children = std::move(children);
    return n;
}

namespace {

void validate_node(const Node& node, const std::map<std::string, FailureRecord>& events) {
    if (node.type == Node::Type::BasicEvent) {
        if (!events.count(node.event_id)) {
            throw ValidationError("fault tree references unknown event '" + node.event_id + "'");
        }
        return;
    }
    if (node.children.empty()) {
        throw ValidationError("gate must have at least one child");
    }
    for (const Node& child : node.children) {
        validate_node(child, events);
    }
}

double eval_node(const Node& node, const std::map<std::string, double>& probs,
                 EvaluationMode mode, bool& capped) {
    if (node.type == Node::Type::BasicEvent) {
        return probs.at(node.event_id);
    }
    if (node.gate == GateKind::And) {
        double product = 1.0;
        for (const Node& child : node.children) {
            product *= eval_node(child, probs, mode, capped);
        }
        return product;
    }
    if (mode == EvaluationMode::Exact) {
        double none = 1.0;
        for (const Node& child : node.children) {
            none *= 1.0 - eval_node(child, probs, mode, capped);
        }
        return 1.0 - none;
    }
    double sum = 0.0;
    for (const Node& child : node.children) {
        sum += eval_node(child, probs, mode, capped);
    }
    if (sum > 1.0) {
        capped = true;
        sum = 1.0;
    }
    return sum;
}

bool bool_node(const Node& node, const std::map<std::string, bool>& states) {
    if (node.type == Node::Type::BasicEvent) {
        return states.at(node.event_id);
    }
    if (node.gate == GateKind::And) {
        for (const Node& child : node.children) {
            if (!bool_node(child, states)) return false;
        }
        return true;
    }
    for (const Node& child : node.children) {
        if (bool_node(child, states)) return true;
    }
    return false;
}

std::map<std::string, double> resolve_probabilities(const FaultTree& tree) {
    std::map<std::string, double> probs;
    for (const auto& [id, record] : tree.events) {
        probs[id] = record.point_probability();
    }
    return probs;
}

using CutSet = std::set<std::string>;

std::vector<CutSet> cut_sets(const Node& node) {
    if (node.type == Node::Type::BasicEvent) {
        return {CutSet{node.event_id}};
    }
    if (node.gate == GateKind::Or) {
        std::vector<CutSet> all;
        for (const Node& child : node.children) {
            std::vector<CutSet> sub = cut_sets(child);
            all.insert(all.end(), sub.begin(), sub.end());
        }
        return all;
    }
    // AND: cross product of child cut sets
    std::vector<CutSet> all = {CutSet{}};
    for (const Node& child : node.children) {
        std::vector<CutSet> sub = cut_sets(child);
        std::vector<CutSet> next;
        next.reserve(all.size() * sub.size());
        for (const CutSet& a : all) {
            for (const CutSet& b : sub) {
                CutSet merged = a;
                merged.insert(b.begin(), b.end());
                next.push_back(std::move(merged));
            }
        }
        all = std::move(next);
    }
    return all;
}

// Uniform double in [0, 1) from the top 53 bits; avoids the
// implementation-defined std::uniform_real_distribution.
double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void FaultTree::validate() const {
    validate_node(top, events);
    for (const auto& [id, record] : events) {
        if (id.empty()) {
            throw ValidationError("basic event with empty id");
        }
        if (!record.has_data()) {
            throw ValidationError("event '" + id + "' has neither probability nor rate+time");
        }
    }
}

EvalResult evaluate_detailed(const FaultTree& tree, EvaluationMode mode) {
    validate_node(tree.top, tree.events);
    const std::map<std::string, double> probs = resolve_probabilities(tree);
    EvalResult result;
    result.probability = eval_node(tree.top, probs, mode, result.rare_event_capped);
    return result;
}

Probability evaluate(const FaultTree& tree, EvaluationMode mode) {
    return Probability(evaluate_detailed(tree, mode).probability);
}

std::set<std::set<std::string>> minimal_cut_sets(const FaultTree& tree) {
    validate_node(tree.top, tree.events);
    std::vector<CutSet> all = cut_sets(tree.top);
    std::sort(all.begin(), all.end(),
              [](const CutSet& a, const CutSet& b) { return a.size() < b.size(); });

    std::vector<CutSet> minimal;
    for (const CutSet& candidate : all) {
        const bool dominated = std::any_of(
            minimal.begin(), minimal.end(), [&](const CutSet& kept) {
                return std::includes(candidate.begin(), candidate.end(), kept.begin(),
                                     kept.end());
            });
        if (!dominated) {
            minimal.push_back(candidate);
        }
    }
    return {minimal.begin(), minimal.end()};
}

McEstimate monte_carlo_top_event(const FaultTree& tree, std::uint64_t samples,
                                 std::uint64_t seed) {
    if (samples == 0) {
        throw ValidationError("sample count must be positive");
    }
    validate_node(tree.top, tree.events);
    const std::map<std::string, double> probs = resolve_probabilities(tree);

    std::mt19937_64 rng(seed);
    std::map<std::string, bool> states;
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        for (const auto& [id, p] : probs) {
            states[id] = next_uniform(rng) < p;
        }
        if (bool_node(tree.top, states)) {
            ++hits;
        }
    }
    const double n = static_cast<double>(samples);
    const double estimate = static_cast<double>(hits) / n;
    return McEstimate{estimate, std::sqrt(estimate * (1.0 - estimate) / n), samples};
}

}  // namespace psrisk::fta
