#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "psrisk/prob.hpp"

namespace psrisk::fta {

enum class GateKind { And, Or };

// AND gates multiply child probabilities in both modes. Exact OR is
// 1 - prod(1 - p); RareEvent OR is the child sum, capped at 1.
enum class EvaluationMode { Exact, RareEvent };

// A tree node is either a reference to a basic event or a gate with a
// nonempty child list.
struct Node {
    enum class Type { BasicEvent, Gate };

    Type type = Type::BasicEvent;
    std::string event_id;             // BasicEvent
    GateKind gate = GateKind::Or;     // Gate
    std::vector<Node> children;       // Gate, nonempty

    static Node basic(std::string id);
    static Node gate_of(GateKind kind, std::vector<Node> children);
};

// Coherent fault tree: AND/OR gates over independent basic events.
struct FaultTree {
    std::map<std::string, FailureRecord> events;
    Node top;

    // Checks every leaf resolves to a catalogued event and gates are
    // nonempty. Throws ValidationError.
    void validate() const;
};

struct EvalResult {
    double probability = 0.0;
    bool rare_event_capped = false;  // an OR sum exceeded 1 and was capped
};

// Recursive gate evaluation; every basic event must resolve to a point
// probability (EvaluationError otherwise). Basic events are assumed
// independent; an event referenced from two branches is not modelled.
EvalResult evaluate_detailed(const FaultTree& tree, EvaluationMode mode);
Probability evaluate(const FaultTree& tree, EvaluationMode mode);

// Minimal combinations of basic events whose joint occurrence implies the
// top event.
std::set<std::set<std::string>> minimal_cut_sets(const FaultTree& tree);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

// Seed-deterministic sampling oracle. Each basic event is drawn once per
// sample, so repeated references stay consistent.
McEstimate monte_carlo_top_event(const FaultTree& tree, std::uint64_t samples,
                                 std::uint64_t seed);

}  // namespace psrisk::fta
