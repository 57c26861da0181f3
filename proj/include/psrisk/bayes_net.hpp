#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "psrisk/prob.hpp"

namespace psrisk::bn {

using NodeId = std::string;

// One row per combination of parent states, enumerated first-parent-major
// in each parent's declared state order; each row is a distribution over
// the node's own states.
struct Cpt {
    std::vector<std::vector<double>> rows;
};

struct BnNode {
    NodeId id;
    std::vector<std::string> states = {"TRUE", "FALSE"};
    std::vector<NodeId> parents;
    Cpt cpt;
};

// Observed states, keyed by node.
using Evidence = std::map<NodeId, std::string>;

// Discrete directed network. Construction validates everything once:
// unique ids, resolvable duplicate-free parents, acyclicity, CPT shape,
// and row normalization within 1e-9. Instances are immutable afterwards
// and safe to share across threads.
class BayesNet {
  public:
    BayesNet() = default;
    explicit BayesNet(std::vector<BnNode> nodes);

    const std::vector<BnNode>& nodes() const { return nodes_; }
    bool has_node(const NodeId& id) const { return index_.count(id) != 0; }
    const BnNode& node(const NodeId& id) const;
    int index_of(const NodeId& id) const;
    // Position of a state label within a node's state list.
    static int state_index(const BnNode& node, const std::string& state);
    const std::vector<int>& topological_order() const { return topo_; }

    // Row of a node's CPT selected by the parents' state indices.
    int cpt_row_index(const BnNode& node, const std::vector<int>& full_assignment) const;

  private:
    std::vector<BnNode> nodes_;
    std::map<NodeId, int> index_;
    std::vector<int> topo_;
};

struct StateDistribution {
    std::vector<std::string> states;
    std::vector<double> p;

    double at(const std::string& state) const;
};

// Chain-rule product of CPT entries; the assignment must cover every node.
double joint_probability(const BayesNet& net, const std::map<NodeId, std::string>& assignment);

// Exact posterior P(target | evidence) by variable elimination with a
// min-degree ordering. Throws InconsistentEvidenceError when the evidence
// has probability zero.
StateDistribution infer_marginal(const BayesNet& net, const NodeId& target,
                                 const Evidence& evidence);

// Same computation under a caller-chosen elimination order (any permutation
// of the non-target, non-evidence nodes).
StateDistribution infer_marginal_with_order(const BayesNet& net, const NodeId& target,
                                            const Evidence& evidence,
                                            const std::vector<NodeId>& order);

struct McDistribution {
    std::vector<std::string> states;
    std::vector<double> estimate;
    std::vector<double> std_error;
    std::uint64_t accepted = 0;
    std::uint64_t samples = 0;
};

// Forward sampling with rejection on evidence; seed-deterministic. Throws
// InsufficientSamplesError when every sample is rejected.
McDistribution monte_carlo_estimate(const BayesNet& net, const NodeId& target,
                                    const Evidence& evidence, std::uint64_t samples,
                                    std::uint64_t seed);

struct GeneratedCpt {
    Cpt cpt;
    // Set when the parent count falls outside the published two-parent
    // table, making the row rule an extrapolation.
    bool arity_extrapolated = false;
};

// Binary-child CPT from per-parent error probabilities. Every parent
// failing forces the child; exactly one failing parent contributes its own
// probability; none gives 0; mixed rows (arity >= 3) combine the failing
// parents noisy-OR style. With a single parent the forcing rule is
// suppressed in favour of the one-parent rule.
GeneratedCpt single_cause_cpt_rule(const std::vector<double>& parent_heps);

}  // namespace psrisk::bn
