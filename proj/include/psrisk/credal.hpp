#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "psrisk/bayes_net.hpp"
#include "psrisk/prob.hpp"

namespace psrisk::credal {

// Row of an interval CPT. At most one entry per row is a true interval (the
// row's free parameter); the remaining entries are points holding the
// leftover mass at the free entry's lower bound, and they scale
// proportionally as the free entry moves across its range. Two-state rows
// may instead pair the free entry with its exact complement interval.
struct CredalRow {
    std::vector<ProbInterval> entries;
};

struct CrNode {
    bn::NodeId id;
    std::vector<std::string> states = {"TRUE", "FALSE"};
    std::vector<bn::NodeId> parents;
    std::vector<CredalRow> rows;
};

// Interval-parameter extension of BayesNet; same structural validation at
// construction, immutable afterwards.
class CredalNet {
  public:
    CredalNet() = default;
    explicit CredalNet(std::vector<CrNode> nodes);

    const std::vector<CrNode>& nodes() const { return nodes_; }
    const CrNode& node(const bn::NodeId& id) const;
    bool has_node(const bn::NodeId& id) const;

    // Index of the free (interval) entry of a row, -1 for point rows.
    static int free_state(const CredalRow& row);

  private:
    std::vector<CrNode> nodes_;
    std::map<bn::NodeId, int> index_;
};

enum class Endpoint { Lower, Upper };

// Chosen endpoint for every free interval parameter, keyed "<node>[<row>]".
using CornerSelection = std::map<std::string, Endpoint>;

std::string parameter_key(const bn::NodeId& node, std::size_t row);

// Keys of the network's free interval parameters, sorted.
std::vector<std::string> free_parameters(const CredalNet& net);

CornerSelection all_lower_corner(const CredalNet& net);
CornerSelection all_upper_corner(const CredalNet& net);

// Point network with every free parameter at its selected endpoint; binary
// rows renormalize by complement, wider rows scale the remaining states
// proportionally. The selection must cover every free parameter exactly.
bn::BayesNet instantiate_corner(const CredalNet& net, const CornerSelection& selection);

struct StateBound {
    std::string state;
    double best = 0.0;
    double worst = 0.0;
    CornerSelection selection_best;
    CornerSelection selection_worst;
};

struct ScenarioBounds {
    std::string method;
    std::vector<StateBound> bounds;

    const StateBound& at(const std::string& state) const;
};

// Best/worst scenario method: evaluates exactly two corners, labelling the
// all-Lower corner "best" and the all-Upper corner "worst". Sound only
// when the query is monotone in every parameter; see the enumeration
// variant below for a guarantee.
ScenarioBounds two_corner_bounds(const CredalNet& net, const bn::NodeId& target,
                                 const bn::Evidence& evidence);

// Exact envelope over all 2^k endpoint corners; per state, best/worst are
// the minimum/maximum marginal with the achieving corner recorded. Refuses
// when k exceeds max_parameters.
ScenarioBounds corner_enumeration_bounds(const CredalNet& net, const bn::NodeId& target,
                                         const bn::Evidence& evidence,
                                         std::size_t max_parameters = 20);

}  // namespace psrisk::credal
